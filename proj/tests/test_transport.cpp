#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "atd/transport.hpp"

namespace {

Eigen::MatrixXd random_nonneg(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

Eigen::MatrixXd random_row_stochastic(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXd m = random_nonneg(rows, cols, rng).array() + 1e-3;
  for (int i = 0; i < rows; ++i) m.row(i) /= m.row(i).sum();
  return m;
}

}  // namespace

TEST_CASE("normalize matches the hand-computed 2x2 example") {
  Eigen::MatrixXd a(2, 2);
  a << 0.5, 0.5, 1, 0;
  const auto m = atd::normalize(atd::validate(a));
  CHECK(m.values(0, 0) == doctest::Approx(0.5 / std::sqrt(1.5)).epsilon(1e-9));
  CHECK(m.values(0, 1) == doctest::Approx(0.5 / std::sqrt(0.5)).epsilon(1e-9));
  CHECK(m.values(1, 0) == doctest::Approx(1.0 / std::sqrt(1.5)).epsilon(1e-9));
  CHECK(m.values(1, 1) == doctest::Approx(0.0));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.values);
  CHECK(svd.singularValues()[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(svd.singularValues()[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("normalize is the identity on doubly-stochastic input") {
  Eigen::MatrixXd a(3, 3);
  a << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  const auto m = atd::normalize(atd::validate(a));
  CHECK((m.values - a).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize rejects zero degrees with the offending index") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 0, 1, 0;
  try {
    atd::normalize(atd::validate(a));
    FAIL("expected an error");
  } catch (const atd::ZeroRowDegreeError& e) {
    CHECK(e.row() == 0);
  }
  Eigen::MatrixXd b(2, 2);
  b << 1, 0, 1, 0;
  try {
    atd::normalize(atd::validate(b));
    FAIL("expected an error");
  } catch (const atd::ZeroColumnDegreeError& e) {
    CHECK(e.col() == 1);
  }
}

TEST_CASE("drop_zero_degrees removes dead rows and columns") {
  Eigen::MatrixXd a(3, 3);
  a << 1, 0, 0, 0, 0, 0, 1, 0, 1;
  const auto [reduced, dropped] = atd::drop_zero_degrees(atd::validate(a));
  CHECK(reduced.rows() == 2);
  CHECK(reduced.cols() == 2);
  REQUIRE(dropped.rows.size() == 1);
  CHECK(dropped.rows[0] == 1);
  REQUIRE(dropped.cols.size() == 1);
  CHECK(dropped.cols[0] == 1);
  CHECK_NOTHROW(atd::normalize(reduced));
}

TEST_CASE("sym_antisym splits and rejects rectangles") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 0, 1, 0;
  const auto s = atd::sym_antisym(m);
  CHECK(s.sym(0, 1) == doctest::Approx(0.5));
  CHECK(s.sym(1, 0) == doctest::Approx(0.5));
  CHECK(s.antisym(0, 1) == doctest::Approx(-0.5));
  CHECK(s.antisym(1, 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(atd::sym_antisym(Eigen::MatrixXd::Zero(2, 3)), atd::NotSquareError);
}

TEST_CASE("Pythagorean split on 500 random matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const Eigen::MatrixXd m = random_nonneg(n, n, rng);
    const auto s = atd::sym_antisym(m);
    const double lhs = m.squaredNorm();
    const double rhs = s.sym.squaredNorm() + s.antisym.squaredNorm();
    CHECK(std::abs(lhs - rhs) < 1e-9);
    CHECK((s.sym + s.antisym - m).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((s.sym - s.sym.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.antisym + s.antisym.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("asymmetry coefficient basics") {
  CHECK(atd::asymmetry_g(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(0.0));
  Eigen::MatrixXd m(2, 2);
  m << 0, 0, 1, 0;
  CHECK(atd::asymmetry_g(m) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(atd::asymmetry_g(Eigen::MatrixXd::Zero(2, 2)),
                  atd::DegenerateNormError);
  CHECK(atd::asymmetry_g(Eigen::MatrixXd::Zero(2, 2), 1e-12) == doctest::Approx(0.0));
}

TEST_CASE("asymmetry is transpose-symmetric and bounded by 1/sqrt(2)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd m = random_nonneg(5, 5, rng);
    const double g = atd::asymmetry_g(m);
    CHECK(atd::asymmetry_g(Eigen::MatrixXd(m.transpose())) == doctest::Approx(g));
    CHECK(g <= 1.0 / std::sqrt(2.0) + 1e-12);
  }
}

TEST_CASE("asymmetry of normalized uniform causal attention") {
  // Frozen from an independent dense-arithmetic oracle.
  const auto g_of = [](int n) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) b(i, j) = 1.0 / (i + 1);
    }
    return atd::asymmetry_g(atd::normalize(atd::validate(b)));
  };
  CHECK(g_of(10) == doctest::Approx(0.504148219020).epsilon(1e-9));
  CHECK(g_of(100) == doctest::Approx(0.637424103526).epsilon(1e-9));
  CHECK(g_of(1000) == doctest::Approx(0.672147187169).epsilon(1e-8));
}

TEST_CASE("causal matrices with sub-diagonal mass have positive asymmetry") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) b(i, j) = u(rng);
      b.row(i) /= b.row(i).sum();
    }
    const auto a = atd::validate(b, atd::Mask::causal());
    CHECK(atd::asymmetry_g(atd::normalize(a)) > 0.0);
  }
}

TEST_CASE("symmetric matrices with balanced degrees have zero asymmetry") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    Eigen::MatrixXd b = random_nonneg(n, n, rng);
    b = 0.5 * (b + b.transpose()).eval();
    CHECK(atd::asymmetry_g(atd::normalize(atd::validate(b))) == doctest::Approx(0.0));
  }
}

TEST_CASE("entry discrepancy is bounded by twice the antisymmetric norm") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::MatrixXd m = random_nonneg(4, 4, rng);
    const auto s = atd::sym_antisym(m);
    CHECK(std::abs(m(0, 1) - m(1, 0)) <= 2.0 * s.antisym.norm() + 1e-12);
  }
}

TEST_CASE("top singular value is 1 for 500 random row-stochastic matrices") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const int rows = 2 + static_cast<int>(rng() % 7);
    const int cols = 2 + static_cast<int>(rng() % 7);
    const Eigen::MatrixXd a = random_row_stochastic(rows, cols, rng);
    const auto m = atd::normalize(atd::validate(a));
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m.values);
    CHECK(std::abs(svd.singularValues()[0] - 1.0) < 1e-9);
  }
}

TEST_CASE("degree residual stays below both bounds on 500 random matrices") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 63);
    const Eigen::MatrixXd a = random_row_stochastic(n, n, rng);
    const auto r = atd::sufficiency_residual(atd::validate(a));
    CHECK(r.residual <= r.bound + 1e-9);
    CHECK(r.bound <= r.kappa_bound + 1e-9);
  }
}

TEST_CASE("degree residual is exactly zero for doubly-stochastic input") {
  Eigen::MatrixXd a(3, 3);
  a << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  const auto r = atd::sufficiency_residual(atd::validate(a));
  CHECK(r.residual < 1e-12);
  CHECK(r.bound < 1e-9);
}

TEST_CASE("degree residual matches the worked 2x2 example") {
  Eigen::MatrixXd a(2, 2);
  a << 0.5, 0.5, 1, 0;
  const auto r = atd::sufficiency_residual(atd::validate(a));
  CHECK(r.residual == doctest::Approx(0.140334244741).epsilon(1e-8));
  CHECK(r.kappa_bound == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-12));
  CHECK(r.residual <= r.bound);
}
