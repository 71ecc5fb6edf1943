#include "atd/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace atd {

bool Mask::allows(int i, int j) const {
  switch (kind) {
    case MaskKind::None:
      return true;
    case MaskKind::Causal:
      return j <= i;
    case MaskKind::Window:
      return j <= i && j >= std::max(0, i - window + 1);
  }
  return true;
}

AttentionMatrix validate(const Eigen::MatrixXd& values, Mask mask, double row_tol) {
  if (values.rows() == 0 || values.cols() == 0) {
    throw EmptyMatrixError("attention matrix is empty");
  }
  if (mask.kind == MaskKind::Causal || mask.kind == MaskKind::Window) {
    if (values.rows() != values.cols()) {
      throw MaskViolationError("causal/window mask requires a square matrix");
    }
  }
  if (mask.kind == MaskKind::Window && mask.window < 1) {
    throw MaskViolationError("window width must be >= 1");
  }
  for (int i = 0; i < values.rows(); ++i) {
    for (int j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (!std::isfinite(v)) {
        throw NonFiniteValueError("non-finite entry at (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ")");
      }
      if (v < 0.0) {
        throw NegativeEntryError("negative entry at (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ")");
      }
      if (v != 0.0 && !mask.allows(i, j)) {
        throw MaskViolationError("nonzero entry outside mask support at (" +
                                 std::to_string(i) + ", " + std::to_string(j) +
                                 ")");
      }
    }
  }

  AttentionMatrix a;
  a.values = values;
  a.mask = mask;
  a.row_stochastic = true;
  for (int i = 0; i < values.rows(); ++i) {
    if (std::abs(values.row(i).sum() - 1.0) > row_tol) {
      a.row_stochastic = false;
      break;
    }
  }
  return a;
}

DegreePair degrees(const AttentionMatrix& a) {
  DegreePair d;
  d.d_q = a.values.rowwise().sum();
  d.d_k = a.values.colwise().sum();

  double sum = 0.0;
  int positive = 0;
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (int j = 0; j < d.d_k.size(); ++j) {
    const double dj = d.d_k[j];
    if (dj > 0.0) {
      sum += dj;
      ++positive;
      dmin = std::min(dmin, dj);
      dmax = std::max(dmax, dj);
    }
  }
  if (positive > 0) {
    d.d_bar = sum / positive;
    d.kappa = dmax / dmin;
  } else {
    d.d_bar = std::numeric_limits<double>::quiet_NaN();
    d.kappa = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

}  // namespace atd
