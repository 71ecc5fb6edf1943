#include "atd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace atd {

Eigen::MatrixXd DilationGraph::adjacency() const {
  const int n = size();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  w.topRightCorner(n_q(), n_k()) = cross;
  w.bottomLeftCorner(n_k(), n_q()) = cross.transpose();
  return w;
}

DilationGraph dilation(const AttentionMatrix& a) {
  DilationGraph g;
  g.cross = a.values;
  g.vertex_degrees.resize(g.size());
  g.vertex_degrees.head(g.n_q()) = g.cross.rowwise().sum();
  g.vertex_degrees.tail(g.n_k()) = g.cross.colwise().sum();
  g.total_volume = 2.0 * g.cross.sum();
  return g;
}

namespace {

SpectralSummary summary_from_svd(const Eigen::VectorXd& sv,
                                 const Eigen::MatrixXd& u,
                                 const Eigen::MatrixXd& v, int k) {
  SpectralSummary s;
  const int avail = static_cast<int>(sv.size());
  s.singular_values = sv.head(std::min(k, avail));
  s.sigma2 = avail > 1 ? sv[1] : 0.0;
  s.gap = 1.0 - s.sigma2;
  if (avail > 1) {
    s.left2 = u.col(1);
    s.right2 = v.col(1);
  } else {
    s.left2 = Eigen::VectorXd::Zero(u.rows());
    s.right2 = Eigen::VectorXd::Zero(v.rows());
  }
  return s;
}

SpectralSummary iterative_svd(const Eigen::MatrixXd& m, int k) {
  const int n_q = static_cast<int>(m.rows());
  const int n_k = static_cast<int>(m.cols());
  const int block = std::min({k + 2, n_q, n_k});
  const int max_iters = 10 * std::max(n_q, n_k);

  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd v(n_k, block);
  for (int j = 0; j < block; ++j) {
    for (int i = 0; i < n_k; ++i) v(i, j) = gauss(rng);
  }
  v = Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ() *
      Eigen::MatrixXd::Identity(n_k, block);

  Eigen::VectorXd sv;
  Eigen::MatrixXd u_small, v_small;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::MatrixXd mv = m * v;                             // n_q x block
    Eigen::JacobiSVD<Eigen::MatrixXd> small(
        mv, Eigen::ComputeThinU | Eigen::ComputeThinV);
    sv = small.singularValues();
    u_small = small.matrixU();       // n_q x block
    v_small = v * small.matrixV();   // n_k x block, current Ritz vectors

    // Residuals of the leading k Ritz pairs under the transposed map.
    const double scale = std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
    bool converged = true;
    for (int j = 0; j < std::min<int>(k, sv.size()); ++j) {
      const double res =
          (m.transpose() * u_small.col(j) - sv[j] * v_small.col(j)).norm();
      if (res > 1e-8 * scale) {
        converged = false;
        break;
      }
    }
    if (converged) {
      return summary_from_svd(sv, u_small, v_small, k);
    }

    Eigen::MatrixXd w = m.transpose() * mv;  // one power step on M^T M
    v = Eigen::HouseholderQR<Eigen::MatrixXd>(w).householderQ() *
        Eigen::MatrixXd::Identity(n_k, block);
  }
  throw ConvergenceFailureError(max_iters);
}

}  // namespace

SpectralSummary svd_summary(const TransportOperator& m, int k, int dense_limit) {
  if (!m.values.allFinite()) {
    throw NonFiniteValueError("transport operator has non-finite entries");
  }
  k = std::max(k, 2);
  if (std::max(m.rows(), m.cols()) <= dense_limit) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m.values,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    return summary_from_svd(svd.singularValues(), svd.matrixU(), svd.matrixV(), k);
  }
  return iterative_svd(m.values, k);
}

CutResult evaluate_cut(const DilationGraph& g, const std::vector<bool>& members) {
  const int n = g.size();
  if (static_cast<int>(members.size()) != n) {
    throw LengthMismatchError("membership vector length does not match graph size");
  }
  const int in_count = static_cast<int>(std::count(members.begin(), members.end(), true));
  if (in_count == 0 || in_count == n) {
    throw TrivialCutError("cut side is empty or covers every vertex");
  }

  CutResult r;
  r.members = members;
  for (int i = 0; i < g.n_q(); ++i) {
    for (int j = 0; j < g.n_k(); ++j) {
      if (members[i] != members[g.n_q() + j]) r.cut_weight += g.cross(i, j);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (members[v]) r.vol_s += g.vertex_degrees[v];
  }
  r.vol_comp = g.total_volume - r.vol_s;
  const double small = std::min(r.vol_s, r.vol_comp);
  if (small <= 0.0) {
    throw ZeroVolumeSideError("one side of the cut has zero volume");
  }
  r.phi = r.cut_weight / small;
  return r;
}

CutResult sweep_conductance(const AttentionMatrix& a, bool degree_scaled,
                            int dense_limit) {
  TransportOperator m = normalize(a);
  DilationGraph g = dilation(a);
  const int n = g.size();
  if (n < 2) {
    throw TooSmallError("sweep requires at least two dilation vertices");
  }

  SpectralSummary s = svd_summary(m, 2, dense_limit);
  std::vector<double> key(n);
  for (int i = 0; i < g.n_q(); ++i) {
    key[i] = degree_scaled ? s.left2[i] / std::sqrt(m.degrees.d_q[i]) : s.left2[i];
  }
  for (int j = 0; j < g.n_k(); ++j) {
    key[g.n_q() + j] =
        degree_scaled ? s.right2[j] / std::sqrt(m.degrees.d_k[j]) : s.right2[j];
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (key[x] != key[y]) return key[x] < key[y];
    return x < y;  // vertex index; queries precede keys by construction
  });

  // Incremental prefix evaluation: adding vertex v moves its edges into S,
  // so cut gains deg(v) and loses twice the weight already inside.
  std::vector<bool> in_s(n, false);
  double cut = 0.0;
  double vol_s = 0.0;
  int best_prefix = -1;
  double best_phi = std::numeric_limits<double>::infinity();
  for (int t = 0; t < n - 1; ++t) {
    const int v = order[t];
    double inside = 0.0;
    if (v < g.n_q()) {
      for (int j = 0; j < g.n_k(); ++j) {
        if (in_s[g.n_q() + j]) inside += g.cross(v, j);
      }
    } else {
      const int j = v - g.n_q();
      for (int i = 0; i < g.n_q(); ++i) {
        if (in_s[i]) inside += g.cross(i, j);
      }
    }
    cut += g.vertex_degrees[v] - 2.0 * inside;
    vol_s += g.vertex_degrees[v];
    in_s[v] = true;

    const double vol_comp = g.total_volume - vol_s;
    const double small = std::min(vol_s, vol_comp);
    if (small <= 0.0) continue;  // zero-volume side: threshold excluded
    const double phi = cut / small;
    if (phi < best_phi) {
      best_phi = phi;
      best_prefix = t;
    }
  }
  if (best_prefix < 0) {
    throw AllSkippedError("every threshold cut had a zero-volume side");
  }

  std::vector<bool> members(n, false);
  for (int t = 0; t <= best_prefix; ++t) members[order[t]] = true;
  return evaluate_cut(g, members);
}

CutResult exact_conductance(const AttentionMatrix& a) {
  DilationGraph g = dilation(a);
  const int n = g.size();
  if (n <= 2) {
    throw TooSmallError("exhaustive search needs more than two dilation vertices");
  }
  if (n > 22) {
    throw TooLargeError("exhaustive search limited to 22 dilation vertices");
  }

  // Fix the last vertex outside S; every bipartition appears exactly once.
  const std::uint32_t limit = 1u << (n - 1);
  double best_phi = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    double vol_s = 0.0;
    for (int v = 0; v < n - 1; ++v) {
      if (mask & (1u << v)) vol_s += g.vertex_degrees[v];
    }
    const double vol_comp = g.total_volume - vol_s;
    const double small = std::min(vol_s, vol_comp);
    if (small <= 0.0) continue;

    double cut = 0.0;
    for (int i = 0; i < g.n_q(); ++i) {
      const bool qi = (mask >> i) & 1u;
      for (int j = 0; j < g.n_k(); ++j) {
        const int kv = g.n_q() + j;
        const bool kj = kv < n - 1 ? ((mask >> kv) & 1u) : false;
        if (qi != kj) cut += g.cross(i, j);
      }
    }
    const double phi = cut / small;
    if (phi < best_phi) {
      best_phi = phi;
      best_mask = mask;
    }
  }
  if (!std::isfinite(best_phi)) {
    throw TooSmallError("no bipartition with positive volume on both sides");
  }

  std::vector<bool> members(n, false);
  for (int v = 0; v < n - 1; ++v) members[v] = (best_mask >> v) & 1u;
  return evaluate_cut(g, members);
}

CheegerCheck cheeger_check(double phi, double sigma2) {
  CheegerCheck c;
  const double gap = 1.0 - sigma2;
  c.lower_ok = phi * phi / 2.0 <= gap + 1e-9;
  c.upper_ok = gap <= 2.0 * phi + 1e-9;
  return c;
}

}  // namespace atd
