#pragma once

#include <vector>

#include <Eigen/Dense>

#include "atd/attention.hpp"
#include "atd/transport.hpp"

namespace atd {

/// Weighted bipartite graph of the symmetric block embedding
/// [[0, B], [B^T, 0]]. Vertices 0..n_q-1 are queries, n_q..n_q+n_k-1 keys.
/// Only the cross block is stored; adjacency() materializes the full matrix.
struct DilationGraph {
  Eigen::MatrixXd cross;          // the n_q x n_k block
  Eigen::VectorXd vertex_degrees; // length n_q + n_k
  double total_volume = 0.0;      // 2 * total mass of the cross block

  int n_q() const { return static_cast<int>(cross.rows()); }
  int n_k() const { return static_cast<int>(cross.cols()); }
  int size() const { return n_q() + n_k(); }

  Eigen::MatrixXd adjacency() const;
};

struct SpectralSummary {
  Eigen::VectorXd singular_values;  // descending, top-k
  double sigma2 = 0.0;
  double gap = 0.0;                 // 1 - sigma2
  Eigen::VectorXd left2, right2;    // second singular vector pair
};

/// A bipartition of the dilation vertices with its conductance.
struct CutResult {
  std::vector<bool> members;  // length n_q + n_k
  double cut_weight = 0.0;
  double vol_s = 0.0;
  double vol_comp = 0.0;
  double phi = 0.0;
};

struct CheegerCheck {
  bool lower_ok = false;  // phi^2 / 2 <= 1 - sigma2
  bool upper_ok = false;  // 1 - sigma2 <= 2 phi
};

inline constexpr int kDefaultDenseLimit = 2048;

DilationGraph dilation(const AttentionMatrix& a);

/// Top-k singular triplets of M. Dense SVD up to dense_limit on the larger
/// dimension, subspace iteration above (relative residual 1e-8, at most
/// 10 * max(n_q, n_k) iterations; throws ConvergenceFailureError).
SpectralSummary svd_summary(const TransportOperator& m, int k = 2,
                            int dense_limit = kDefaultDenseLimit);

/// Exact cut weight, side volumes and conductance of the given bipartition.
/// Throws TrivialCutError / ZeroVolumeSideError.
CutResult evaluate_cut(const DilationGraph& g, const std::vector<bool>& members);

/// Spectral sweep over threshold cuts of the second singular vector pair.
/// Sort key for Q_i is u2[i]/sqrt(d_q[i]) and for K_j v2[j]/sqrt(d_k[j])
/// (raw u2/v2 entries when degree_scaled is false); ties break on vertex
/// index with queries before keys. Returns the minimum-conductance prefix.
/// Upper bound: phi_hat <= sqrt(2 * (1 - sigma2)).
CutResult sweep_conductance(const AttentionMatrix& a, bool degree_scaled = true,
                            int dense_limit = kDefaultDenseLimit);

/// Exhaustive conductance minimum over all non-trivial bipartitions.
/// Requires 3 <= n_q + n_k <= 22 (TooSmallError / TooLargeError).
CutResult exact_conductance(const AttentionMatrix& a);

/// Both sides of the conductance / spectral-gap inequality, with 1e-9 slack.
/// lower_ok is only guaranteed for the exact conductance; the sweep value
/// only satisfies upper_ok.
CheegerCheck cheeger_check(double phi, double sigma2);

}  // namespace atd
