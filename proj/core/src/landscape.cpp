#include "atd/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atd {

AttentionMatrix generate(const CanonicalSpec& spec) {
  if (spec.n < 1) throw OutOfRangeError("sequence length must be >= 1");
  const int n = spec.n;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);

  switch (spec.kind) {
    case CanonicalKind::UniformCausal:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) b(i, j) = 1.0 / (i + 1);
      }
      return validate(b, Mask::causal());
    case CanonicalKind::Window: {
      if (spec.window < 1) throw OutOfRangeError("window width must be >= 1");
      for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - spec.window + 1);
        for (int j = lo; j <= i; ++j) b(i, j) = 1.0 / (i - lo + 1);
      }
      return validate(b, Mask::windowed(spec.window));
    }
    case CanonicalKind::Diagonal:
      b.setIdentity();
      return validate(b, Mask::windowed(1));
    case CanonicalKind::ExpDecay: {
      if (!(spec.alpha > 0.0)) throw OutOfRangeError("decay rate must be > 0");
      for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= i; ++j) row_sum += std::exp(-spec.alpha * (i - j));
        for (int j = 0; j <= i; ++j) b(i, j) = std::exp(-spec.alpha * (i - j)) / row_sum;
      }
      return validate(b, Mask::causal());
    }
  }
  throw OutOfRangeError("unknown canonical kind");
}

double harmonic(int n) {
  if (n < 0) throw OutOfRangeError("harmonic number needs n >= 0");
  double h = 0.0;
  for (int k = n; k >= 1; --k) h += 1.0 / k;
  return h;
}

std::pair<double, double> closed_form_cut_vol(int n, int t) {
  if (t < 0 || t > n) throw OutOfRangeError("prefix size out of range");
  const double u = harmonic(n) - harmonic(t);
  return {t * u, t * (2.0 + u)};
}

double closed_form_phi_uc(int n, int t) {
  if (t <= 0 || t >= n) throw OutOfRangeError("prefix size must satisfy 0 < t < n");
  const auto [cut, vol] = closed_form_cut_vol(n, t);
  return cut / std::min(vol, 2.0 * n - vol);
}

LandscapeCurve temporal_sweep(const AttentionMatrix& a) {
  if (!a.square()) throw NotSquareError("prefix cuts need a square matrix");
  const int n = a.rows();
  if (n < 2) throw TooSmallError("prefix cuts need n >= 2");

  const Eigen::MatrixXd& b = a.values;
  const Eigen::VectorXd d_q = b.rowwise().sum();
  const Eigen::VectorXd d_k = b.colwise().sum();
  const double total = 2.0 * b.sum();

  LandscapeCurve curve;
  curve.phi_min = std::numeric_limits<double>::infinity();
  curve.t_star = -1;

  // Grow S_t one (Q_t, K_t) pair at a time; adding a vertex contributes its
  // degree to the cut minus twice the weight of edges already inside.
  double cut = 0.0;
  double vol = 0.0;
  for (int t = 1; t < n; ++t) {
    const int p = t - 1;  // index of the pair being added
    double q_inside = 0.0;
    for (int j = 0; j < p; ++j) q_inside += b(p, j);  // Q_p to K_0..K_{p-1}
    cut += d_q[p] - 2.0 * q_inside;
    double k_inside = 0.0;
    for (int i = 0; i <= p; ++i) k_inside += b(i, p);  // K_p to Q_0..Q_p
    cut += d_k[p] - 2.0 * k_inside;
    vol += d_q[p] + d_k[p];

    curve.t_values.push_back(t);
    const double small = std::min(vol, total - vol);
    if (small <= 0.0) {
      curve.phi_values.push_back(std::numeric_limits<double>::quiet_NaN());
      curve.status.push_back(CutStatus::Skipped);
      continue;
    }
    const double phi = cut / small;
    curve.phi_values.push_back(phi);
    curve.status.push_back(cut <= 0.0 ? CutStatus::Disconnected : CutStatus::Ok);
    if (phi < curve.phi_min) {
      curve.phi_min = phi;
      curve.t_star = t;
    }
  }

  if (curve.t_star < 0) {
    throw AllSkippedError("every prefix cut had a zero-volume side");
  }
  curve.floor_pierced = curve.phi_min < 0.2;
  return curve;
}

double window_bound(int n, int w, int t) {
  if (t <= 0 || t >= n) throw OutOfRangeError("prefix size must satisfy 0 < t < n");
  if (w < 1) throw OutOfRangeError("window width must be >= 1");
  return static_cast<double>(w) / (n - t);
}

double floor_fraction(const std::vector<double>& minima, double floor) {
  if (minima.empty()) throw EmptyListError("no landscape minima given");
  const auto below = std::count_if(minima.begin(), minima.end(),
                                   [&](double v) { return v < floor; });
  return static_cast<double>(below) / static_cast<double>(minima.size());
}

}  // namespace atd
