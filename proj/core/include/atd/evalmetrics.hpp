#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atd/errors.hpp"

namespace atd {

/// One scored response: diagnostic score, hallucination label, token length.
struct EvalSample {
  double score = 0.0;
  int label = 0;  // 1 = hallucinated
  int length = 1;
};

/// Per-(sample, layer, head) diagnostic features.
struct DiagnosticsRecord {
  std::string sample_id;
  int layer = 0;
  int head = 0;
  double phi_hat = 0.0;
  double sigma2 = 0.0;
  double gap = 0.0;
  std::optional<double> g;  // absent for rectangular (cross-attention) heads
};

/// Equal-frequency length binning with the three admissibility criteria:
/// (i) every bin has at least 25 positive-negative pairs, (ii) no bin is
/// single-class, (iii) max within-bin |Spearman(score, length)| < 0.10.
struct BinningResult {
  int bin_count = 1;
  std::vector<int> assignment;  // bin index per sample
  std::vector<int> pos_count, neg_count;
  double max_abs_spearman = 0.0;
  bool pairs_ok = false;
  bool non_degenerate = false;
  bool spearman_ok = false;

  bool compliant() const { return pairs_ok && non_degenerate && spearman_ok; }
};

struct LcAurocResult {
  double value = 0.5;
  std::vector<double> per_bin_auroc;  // unflipped; NaN for single-class bins
  std::vector<double> weights;        // pair weights, sum to 1 over mixed bins
  int bin_count = 1;
  bool flipped = false;
  bool fallback_flag = false;  // no bin count satisfied all three criteria
};

struct SpearmanResult {
  double rho = 0.0;
  bool constant_input = false;  // a constant vector; rho reported as 0
};

struct FeatureAggregate {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population (1/N)
  double iqr = 0.0;
  double range = 0.0;
  double cvar_bottom25 = 0.0;
  double cvar_top25 = 0.0;
};

/// Probability a random positive outscores a random negative; ties half.
double auroc(const std::vector<EvalSample>& samples);

/// max(a, 1 - a): orients an AUROC to be at least one half.
double flipped_auroc(double a);

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Smallest admissible equal-frequency bin count, searched up to
/// floor(N / 50); falls back (compliant() == false) to the largest bin count
/// meeting criteria (i)-(ii) when no count passes the Spearman criterion.
BinningResult select_bins(const std::vector<EvalSample>& samples);

/// Length-controlled AUROC: within-bin least-squares residualization of
/// score against length, per-bin AUROC, pair-weighted aggregation, flip
/// applied to the final aggregate only.
LcAurocResult lc_auroc(const std::vector<EvalSample>& samples);

/// Same protocol with an externally fixed bin count.
LcAurocResult lc_auroc_with_bins(const std::vector<EvalSample>& samples,
                                 int bin_count, bool fallback_flag = false);

enum class Tail { Bottom25, Top25 };

/// Mean of the values at or beyond the 25th / 75th percentile
/// (interpolated); min or max when fewer than 4 values.
double cvar(const std::vector<double>& values, Tail tail);

FeatureAggregate robust_stats(const std::vector<double>& values);

/// Percentile-method 95% interval over seeded bootstrap resamples.
/// Resamples on which the metric is undefined are redrawn, up to
/// 10 * resamples attempts in total (then MetricUndefinedError).
std::pair<double, double> bootstrap_ci(
    const std::function<double(const std::vector<EvalSample>&)>& metric,
    const std::vector<EvalSample>& samples, int resamples = 1000,
    unsigned long long seed = 0);

/// Seven robust aggregates per feature, keyed e.g. "phi_cvar_top25",
/// "sigma2_std", "gap_mean", "g_iqr". The g aggregates are emitted only
/// when at least one record carries g.
std::map<std::string, double> aggregate_heads(
    const std::vector<DiagnosticsRecord>& records);

}  // namespace atd
