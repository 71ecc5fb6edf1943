#include "atd/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace atd {

namespace {

/// Mid-ranks (1-based) of a vector; tied values share the average rank.
std::vector<double> mid_ranks(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * (i + j) + 1.0;
    for (int k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double interpolated_percentile(std::vector<double> sorted, double p) {
  const int n = static_cast<int>(sorted.size());
  if (n == 1) return sorted[0];
  const double pos = p * (n - 1);
  const int lo = static_cast<int>(std::floor(pos));
  const int hi = std::min(lo + 1, n - 1);
  const double frac = pos - lo;
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double auroc_scores(const std::vector<double>& scores,
                    const std::vector<int>& labels) {
  int pos = 0, neg = 0;
  for (int y : labels) (y == 1 ? pos : neg)++;
  if (pos == 0 || neg == 0) {
    throw OneClassOnlyError("need at least one positive and one negative label");
  }
  const std::vector<double> ranks = mid_ranks(scores);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) rank_sum += ranks[i];
  }
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (static_cast<double>(pos) * neg);
}

}  // namespace

double auroc(const std::vector<EvalSample>& samples) {
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    scores.push_back(s.score);
    labels.push_back(s.label);
  }
  return auroc_scores(scores, labels);
}

double flipped_auroc(double a) { return std::max(a, 1.0 - a); }

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw LengthMismatchError("vectors differ in length");
  }
  if (x.size() < 2) throw LengthMismatchError("need at least two points");

  const std::vector<double> rx = mid_ranks(x);
  const std::vector<double> ry = mid_ranks(y);
  const int n = static_cast<int>(x.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  SpearmanResult r;
  if (sxx == 0.0 || syy == 0.0) {
    r.rho = 0.0;
    r.constant_input = true;
  } else {
    r.rho = sxy / std::sqrt(sxx * syy);
  }
  return r;
}

namespace {

/// Equal-frequency assignment by length rank; ties keep original order.
std::vector<int> assign_bins(const std::vector<EvalSample>& samples, int bins) {
  const int n = static_cast<int>(samples.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return samples[a].length < samples[b].length;
  });
  std::vector<int> assignment(n);
  const int base = n / bins;
  const int extra = n % bins;  // first `extra` bins take one more sample
  int pos = 0;
  for (int b = 0; b < bins; ++b) {
    const int size = base + (b < extra ? 1 : 0);
    for (int k = 0; k < size; ++k) assignment[order[pos++]] = b;
  }
  return assignment;
}

BinningResult binning_for(const std::vector<EvalSample>& samples, int bins) {
  BinningResult r;
  r.bin_count = bins;
  r.assignment = assign_bins(samples, bins);
  r.pos_count.assign(bins, 0);
  r.neg_count.assign(bins, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    (samples[i].label == 1 ? r.pos_count : r.neg_count)[r.assignment[i]]++;
  }

  r.pairs_ok = true;
  r.non_degenerate = true;
  for (int b = 0; b < bins; ++b) {
    if (r.pos_count[b] == 0 || r.neg_count[b] == 0) r.non_degenerate = false;
    if (static_cast<long long>(r.pos_count[b]) * r.neg_count[b] < 25) {
      r.pairs_ok = false;
    }
  }

  r.max_abs_spearman = 0.0;
  for (int b = 0; b < bins; ++b) {
    std::vector<double> scores, lengths;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (r.assignment[i] == b) {
        scores.push_back(samples[i].score);
        lengths.push_back(static_cast<double>(samples[i].length));
      }
    }
    if (scores.size() >= 2) {
      r.max_abs_spearman =
          std::max(r.max_abs_spearman, std::abs(spearman(scores, lengths).rho));
    }
  }
  r.spearman_ok = r.max_abs_spearman < 0.10;
  return r;
}

}  // namespace

BinningResult select_bins(const std::vector<EvalSample>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw OneClassOnlyError("need at least two samples");
  int pos = 0;
  for (const auto& s : samples) pos += s.label == 1;
  if (pos == 0 || pos == n) {
    throw OneClassOnlyError("need both classes present");
  }

  const int max_bins = std::max(1, n / 50);
  BinningResult fallback;
  bool have_fallback = false;
  for (int b = 1; b <= max_bins; ++b) {
    BinningResult r = binning_for(samples, b);
    if (r.compliant()) return r;
    if (r.pairs_ok && r.non_degenerate) {
      fallback = std::move(r);  // keep the largest admissible bin count
      have_fallback = true;
    }
  }
  if (have_fallback) return fallback;
  return binning_for(samples, 1);
}

LcAurocResult lc_auroc_with_bins(const std::vector<EvalSample>& samples,
                                 int bin_count, bool fallback_flag) {
  BinningResult bins = binning_for(samples, bin_count);
  int pos = 0;
  for (const auto& s : samples) pos += s.label == 1;
  if (pos == 0 || pos == static_cast<int>(samples.size())) {
    throw OneClassOnlyError("need both classes present");
  }

  LcAurocResult out;
  out.bin_count = bin_count;
  out.fallback_flag = fallback_flag;
  out.per_bin_auroc.assign(bin_count, std::numeric_limits<double>::quiet_NaN());
  out.weights.assign(bin_count, 0.0);

  double pair_total = 0.0;
  std::vector<double> pair_count(bin_count, 0.0);
  std::vector<std::vector<double>> residuals(bin_count);
  std::vector<std::vector<int>> labels(bin_count);

  for (int b = 0; b < bin_count; ++b) {
    // Least-squares fit of score on (1, length) inside the bin.
    std::vector<double> s, l;
    std::vector<int> y;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (bins.assignment[i] == b) {
        s.push_back(samples[i].score);
        l.push_back(static_cast<double>(samples[i].length));
        y.push_back(samples[i].label);
      }
    }
    const int m = static_cast<int>(s.size());
    if (m == 0) continue;
    double ms = 0.0, ml = 0.0;
    for (int i = 0; i < m; ++i) {
      ms += s[i];
      ml += l[i];
    }
    ms /= m;
    ml /= m;
    double cov = 0.0, var = 0.0;
    for (int i = 0; i < m; ++i) {
      cov += (l[i] - ml) * (s[i] - ms);
      var += (l[i] - ml) * (l[i] - ml);
    }
    const double slope = var > 0.0 ? cov / var : 0.0;  // constant length: center only
    residuals[b].resize(m);
    for (int i = 0; i < m; ++i) {
      residuals[b][i] = s[i] - (ms + slope * (l[i] - ml));
    }
    labels[b] = std::move(y);

    pair_count[b] = static_cast<double>(bins.pos_count[b]) * bins.neg_count[b];
    pair_total += pair_count[b];
  }

  double value = 0.0;
  for (int b = 0; b < bin_count; ++b) {
    if (pair_count[b] <= 0.0) continue;  // single-class bin: weight zero
    out.per_bin_auroc[b] = auroc_scores(residuals[b], labels[b]);
    out.weights[b] = pair_count[b] / pair_total;
    value += out.weights[b] * out.per_bin_auroc[b];
  }

  out.flipped = value < 0.5;
  out.value = flipped_auroc(value);
  return out;
}

LcAurocResult lc_auroc(const std::vector<EvalSample>& samples) {
  BinningResult bins = select_bins(samples);
  return lc_auroc_with_bins(samples, bins.bin_count, !bins.compliant());
}

double cvar(const std::vector<double>& values, Tail tail) {
  if (values.empty()) throw EmptyListError("no values given");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() < 4) {
    return tail == Tail::Bottom25 ? sorted.front() : sorted.back();
  }
  const double threshold =
      interpolated_percentile(sorted, tail == Tail::Bottom25 ? 0.25 : 0.75);
  double sum = 0.0;
  int count = 0;
  for (double v : sorted) {
    const bool in_tail = tail == Tail::Bottom25 ? v <= threshold : v >= threshold;
    if (in_tail) {
      sum += v;
      ++count;
    }
  }
  return sum / count;
}

FeatureAggregate robust_stats(const std::vector<double>& values) {
  if (values.empty()) throw EmptyListError("no values given");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const int n = static_cast<int>(sorted.size());

  FeatureAggregate f;
  f.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - f.mean) * (v - f.mean);
  f.std = std::sqrt(ss / n);
  f.median = interpolated_percentile(sorted, 0.5);
  f.iqr = interpolated_percentile(sorted, 0.75) - interpolated_percentile(sorted, 0.25);
  f.range = sorted.back() - sorted.front();
  f.cvar_bottom25 = cvar(values, Tail::Bottom25);
  f.cvar_top25 = cvar(values, Tail::Top25);
  return f;
}

std::pair<double, double> bootstrap_ci(
    const std::function<double(const std::vector<EvalSample>&)>& metric,
    const std::vector<EvalSample>& samples, int resamples,
    unsigned long long seed) {
  if (samples.empty()) throw EmptyListError("no samples given");
  const int n = static_cast<int>(samples.size());
  const long long max_attempts = 10LL * resamples;

  std::vector<double> stats;
  stats.reserve(resamples);
  long long attempt = 0;
  while (static_cast<int>(stats.size()) < resamples) {
    if (attempt >= max_attempts) {
      throw MetricUndefinedError(
          "metric undefined on too many bootstrap resamples");
    }
    // Independent substream per attempt, reproducible for a fixed seed.
    std::seed_seq seq{static_cast<unsigned int>(seed & 0xffffffffu),
                      static_cast<unsigned int>(seed >> 32),
                      static_cast<unsigned int>(attempt & 0xffffffff),
                      static_cast<unsigned int>(attempt >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<EvalSample> resample(n);
    for (int i = 0; i < n; ++i) resample[i] = samples[pick(rng)];
    ++attempt;
    try {
      stats.push_back(metric(resample));
    } catch (const Error&) {
      continue;  // undefined on this resample; redraw
    }
  }

  std::sort(stats.begin(), stats.end());
  return {interpolated_percentile(stats, 0.025),
          interpolated_percentile(stats, 0.975)};
}

std::map<std::string, double> aggregate_heads(
    const std::vector<DiagnosticsRecord>& records) {
  if (records.empty()) throw EmptyListError("no head records given");

  std::map<std::string, double> out;
  const auto emit = [&out](const std::string& prefix,
                           const std::vector<double>& values) {
    const FeatureAggregate f = robust_stats(values);
    out[prefix + "_mean"] = f.mean;
    out[prefix + "_median"] = f.median;
    out[prefix + "_std"] = f.std;
    out[prefix + "_iqr"] = f.iqr;
    out[prefix + "_range"] = f.range;
    out[prefix + "_cvar_bottom25"] = f.cvar_bottom25;
    out[prefix + "_cvar_top25"] = f.cvar_top25;
  };

  std::vector<double> phi, sigma2, gap, g;
  for (const auto& r : records) {
    phi.push_back(r.phi_hat);
    sigma2.push_back(r.sigma2);
    gap.push_back(r.gap);
    if (r.g) g.push_back(*r.g);
  }
  emit("phi", phi);
  emit("sigma2", sigma2);
  emit("gap", gap);
  if (!g.empty()) emit("g", g);
  return out;
}

}  // namespace atd
