#pragma once

#include <Eigen/Dense>

#include "atd/errors.hpp"

namespace atd {

enum class MaskKind { None, Causal, Window };

/// Declared sparsity pattern of an attention matrix.
struct Mask {
  MaskKind kind = MaskKind::None;
  int window = 0;  // only meaningful for MaskKind::Window

  static Mask none() { return {MaskKind::None, 0}; }
  static Mask causal() { return {MaskKind::Causal, 0}; }
  static Mask windowed(int w) { return {MaskKind::Window, w}; }

  /// True when entry (i, j) is allowed to be nonzero.
  bool allows(int i, int j) const;
};

/// A validated non-negative attention matrix with mask metadata.
///
/// Construct through validate(); invariants (non-negativity, mask
/// consistency) hold for every instance obtained that way.
struct AttentionMatrix {
  Eigen::MatrixXd values;
  Mask mask;
  bool row_stochastic = false;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  bool square() const { return values.rows() == values.cols(); }
};

/// Row sums, column sums and the column-degree summary statistics.
struct DegreePair {
  Eigen::VectorXd d_q;  // row sums, length n_q
  Eigen::VectorXd d_k;  // column sums, length n_k
  double d_bar = 0.0;   // mean over strictly positive column degrees
  double kappa = 1.0;   // d_max / d_min over strictly positive column degrees
};

inline constexpr double kRowStochasticTol = 1e-6;

/// Checks non-negativity and mask consistency; sets the row_stochastic flag.
///
/// Throws EmptyMatrixError, NegativeEntryError or MaskViolationError.
AttentionMatrix validate(const Eigen::MatrixXd& values, Mask mask = Mask::none(),
                         double row_tol = kRowStochasticTol);

/// Row/column degree vectors plus mean and ratio over positive column degrees.
/// Zero degrees are allowed here; downstream operations reject them.
DegreePair degrees(const AttentionMatrix& a);

}  // namespace atd
