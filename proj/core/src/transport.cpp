#include "atd/transport.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace atd {

TransportOperator normalize(const AttentionMatrix& a) {
  DegreePair d = degrees(a);
  for (int i = 0; i < d.d_q.size(); ++i) {
    if (d.d_q[i] <= 0.0) throw ZeroRowDegreeError(i);
  }
  for (int j = 0; j < d.d_k.size(); ++j) {
    if (d.d_k[j] <= 0.0) throw ZeroColumnDegreeError(j);
  }

  TransportOperator m;
  m.values = d.d_q.cwiseSqrt().cwiseInverse().asDiagonal() * a.values *
             d.d_k.cwiseSqrt().cwiseInverse().asDiagonal();
  m.degrees = std::move(d);
  return m;
}

std::pair<AttentionMatrix, DroppedIndices> drop_zero_degrees(const AttentionMatrix& a) {
  Eigen::MatrixXd work = a.values;
  std::vector<int> row_ids(work.rows()), col_ids(work.cols());
  for (int i = 0; i < work.rows(); ++i) row_ids[i] = i;
  for (int j = 0; j < work.cols(); ++j) col_ids[j] = j;

  DroppedIndices dropped;
  bool changed = true;
  while (changed && work.rows() > 0 && work.cols() > 0) {
    changed = false;
    Eigen::VectorXd rs = work.rowwise().sum();
    std::vector<int> keep_rows;
    for (int i = 0; i < work.rows(); ++i) {
      if (rs[i] > 0.0) {
        keep_rows.push_back(i);
      } else {
        dropped.rows.push_back(row_ids[i]);
        changed = true;
      }
    }
    if (changed) {
      Eigen::MatrixXd next(static_cast<int>(keep_rows.size()), work.cols());
      std::vector<int> next_ids;
      for (std::size_t r = 0; r < keep_rows.size(); ++r) {
        next.row(static_cast<int>(r)) = work.row(keep_rows[r]);
        next_ids.push_back(row_ids[keep_rows[r]]);
      }
      work = std::move(next);
      row_ids = std::move(next_ids);
    }

    if (work.rows() == 0) break;
    Eigen::VectorXd cs = work.colwise().sum();
    std::vector<int> keep_cols;
    bool col_changed = false;
    for (int j = 0; j < work.cols(); ++j) {
      if (cs[j] > 0.0) {
        keep_cols.push_back(j);
      } else {
        dropped.cols.push_back(col_ids[j]);
        col_changed = true;
      }
    }
    if (col_changed) {
      Eigen::MatrixXd next(work.rows(), static_cast<int>(keep_cols.size()));
      std::vector<int> next_ids;
      for (std::size_t c = 0; c < keep_cols.size(); ++c) {
        next.col(static_cast<int>(c)) = work.col(keep_cols[c]);
        next_ids.push_back(col_ids[keep_cols[c]]);
      }
      work = std::move(next);
      col_ids = std::move(next_ids);
      changed = true;
    }
  }

  // Masks do not survive index removal; the reduced matrix carries no mask.
  AttentionMatrix reduced;
  if (work.rows() > 0 && work.cols() > 0) {
    reduced = validate(work, Mask::none());
  } else {
    reduced.values = work;
    reduced.mask = Mask::none();
    reduced.row_stochastic = false;
  }
  return {std::move(reduced), std::move(dropped)};
}

SymSplit sym_antisym(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw NotSquareError("symmetric/antisymmetric split requires a square matrix");
  }
  SymSplit s;
  s.sym = 0.5 * (m + m.transpose());
  s.antisym = 0.5 * (m - m.transpose());
  return s;
}

double asymmetry_g(const Eigen::MatrixXd& m, double eps) {
  if (m.rows() != m.cols()) {
    throw NotSquareError("asymmetry coefficient requires a square matrix");
  }
  const double norm = m.norm();
  if (norm + eps <= 0.0) {
    throw DegenerateNormError("zero Frobenius norm with eps = 0");
  }
  const double anti = (0.5 * (m - m.transpose())).norm();
  return anti / (norm + eps);
}

SufficiencyResult sufficiency_residual(const AttentionMatrix& a) {
  TransportOperator m = normalize(a);  // throws on zero degrees
  const DegreePair& d = m.degrees;

  Eigen::BDCSVD<Eigen::MatrixXd> svd_a(a.values);
  Eigen::BDCSVD<Eigen::MatrixXd> svd_m(m.values);
  const auto& sa = svd_a.singularValues();
  const auto& sm = svd_m.singularValues();
  const double sigma2_a = sa.size() > 1 ? sa[1] : 0.0;
  const double sigma2_m = sm.size() > 1 ? sm[1] : 0.0;

  SufficiencyResult r;
  r.residual = std::abs(sigma2_m - sigma2_a / std::sqrt(d.d_bar));
  r.bound = 0.0;
  for (int j = 0; j < d.d_k.size(); ++j) {
    r.bound = std::max(r.bound, std::abs(1.0 - std::sqrt(d.d_k[j] / d.d_bar)));
  }
  r.kappa_bound = std::sqrt(d.kappa) - 1.0;
  return r;
}

}  // namespace atd
