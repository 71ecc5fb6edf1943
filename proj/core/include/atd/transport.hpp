#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "atd/attention.hpp"

namespace atd {

/// Degree-normalized operator M = D_q^{-1/2} B D_k^{-1/2}.
///
/// For row-stochastic B with positive column degrees, sigma_1(M) = 1.
struct TransportOperator {
  Eigen::MatrixXd values;
  DegreePair degrees;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  bool square() const { return values.rows() == values.cols(); }
};

/// Symmetric/antisymmetric split M = sym + antisym (square M only).
struct SymSplit {
  Eigen::MatrixXd sym;      // (M + M^T) / 2
  Eigen::MatrixXd antisym;  // (M - M^T) / 2
};

struct DroppedIndices {
  std::vector<int> rows;
  std::vector<int> cols;
};

struct SufficiencyResult {
  double residual;  // |sigma2(M) - sigma2(A)/sqrt(d_bar)|
  double bound;     // max_j |1 - sqrt(d_j/d_bar)|
  double kappa_bound;  // sqrt(kappa) - 1
};

/// Builds the degree-normalized operator.
/// Throws ZeroRowDegreeError / ZeroColumnDegreeError on degenerate degrees.
TransportOperator normalize(const AttentionMatrix& a);

/// Removes zero-degree rows and columns (repeatedly, until stable) and
/// records which indices were dropped. Useful before normalize().
std::pair<AttentionMatrix, DroppedIndices> drop_zero_degrees(const AttentionMatrix& a);

SymSplit sym_antisym(const Eigen::MatrixXd& m);
inline SymSplit sym_antisym(const TransportOperator& m) { return sym_antisym(m.values); }

/// Asymmetry coefficient G = ||antisym||_F / (||M||_F + eps), in [0, 1].
/// With eps = 0, G = 0 iff M is symmetric; the supremum over real matrices
/// is 1/sqrt(2), attained by matrices with disjoint support from their
/// transpose.
double asymmetry_g(const Eigen::MatrixXd& m, double eps = 0.0);
inline double asymmetry_g(const TransportOperator& m, double eps = 0.0) {
  return asymmetry_g(m.values, eps);
}

/// How far sigma2 of the normalized operator deviates from the degree-only
/// prediction sigma2(A)/sqrt(d_bar), together with the a-priori bound.
/// Requires row-stochastic A with positive column degrees.
SufficiencyResult sufficiency_residual(const AttentionMatrix& a);

}  // namespace atd
