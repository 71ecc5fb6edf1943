// Acceptance checks for the full pipeline. Each criterion prints exactly one
// PASS/FAIL line; the process exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "atd/evalmetrics.hpp"
#include "atd/io.hpp"
#include "atd/landscape.hpp"
#include "atd/spectral.hpp"
#include "atd/transport.hpp"

namespace {

using atd::CanonicalSpec;

int g_failures = 0;

void run_criterion(int number, const std::string& label,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("criterion %2d [%s]: %s (%.2fs)%s%s\n", number, label.c_str(),
              ok ? "PASS" : "FAIL", seconds, detail.empty() ? "" : " — ",
              detail.c_str());
  if (!ok) ++g_failures;
}

Eigen::MatrixXd random_row_stochastic(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

double g_uniform_causal(int n) {
  return atd::asymmetry_g(atd::normalize(atd::generate(CanonicalSpec::uniform_causal(n))));
}

}  // namespace

int main() {
  run_criterion(1, "golden minima", [](std::string& detail) {
    const double expected[3] = {1.0 / 3.0, 5.0 / 17.0, 13.0 / 37.0};
    bool ok = true;
    std::ostringstream why;
    for (int n = 2; n <= 4; ++n) {
      const auto a = atd::generate(CanonicalSpec::uniform_causal(n));
      const double sweep_min = atd::temporal_sweep(a).phi_min;
      const double exact = atd::exact_conductance(a).phi;
      if (std::abs(sweep_min - expected[n - 2]) > 1e-9) {
        ok = false;
        why << "prefix minimum at n=" << n << " is " << sweep_min << "; ";
      }
      if (std::abs(exact - expected[n - 2]) > 1e-9) {
        ok = false;
        why << "exhaustive minimum at n=" << n << " is " << exact
            << ", expected " << expected[n - 2] << "; ";
      }
    }
    detail = why.str();
    return ok;
  });

  run_criterion(2, "conductance floors", [](std::string&) {
    for (int n = 2; n <= 500; ++n) {
      const double asym = 1.0 / (2.0 * std::log(static_cast<double>(n)) + 2.0);
      for (int t = 1; t < n; ++t) {
        const double phi = atd::closed_form_phi_uc(n, t);
        if (phi < 0.2 - 1e-12 || phi < asym - 1e-12) return false;
      }
    }
    return true;
  });

  run_criterion(3, "worst-cut location", [](std::string& detail) {
    const int n = 10000;
    int t_star = 1;
    double best = atd::closed_form_phi_uc(n, 1);
    for (int t = 2; t < n; ++t) {
      const double phi = atd::closed_form_phi_uc(n, t);
      if (phi < best) {
        best = phi;
        t_star = t;
      }
    }
    const double ratio = static_cast<double>(t_star) / n;
    std::ostringstream why;
    why << "t*/n=" << ratio << ", phi_min=" << best;
    detail = why.str();
    return ratio >= 0.30 && ratio <= 0.34 && best >= 0.34 && best <= 0.38;
  });

  run_criterion(4, "cut/volume identities", [](std::string&) {
    for (int n = 2; n <= 200; ++n) {
      const auto g = atd::dilation(atd::generate(CanonicalSpec::uniform_causal(n)));
      for (int t = 1; t < n; ++t) {
        std::vector<bool> members(2 * n, false);
        for (int i = 0; i < t; ++i) {
          members[i] = true;
          members[n + i] = true;
        }
        const auto r = atd::evaluate_cut(g, members);
        const auto [cut, vol] = atd::closed_form_cut_vol(n, t);
        if (std::abs(r.cut_weight - cut) > 1e-10) return false;
        if (std::abs(r.vol_s - vol) > 1e-10) return false;
      }
    }
    return true;
  });

  run_criterion(5, "window piercing", [](std::string& detail) {
    std::ostringstream why;
    bool ok = true;
    for (const auto& [n, w] : std::vector<std::pair<int, int>>{{100, 5}, {100, 20}}) {
      const auto curve = atd::temporal_sweep(atd::generate(CanonicalSpec::windowed(n, w)));
      for (int t = 1; t < n; ++t) {
        if (curve.phi_values[t - 1] > atd::window_bound(n, w, t) + 1e-12) {
          why << "n=" << n << " w=" << w << " t=" << t << " has phi "
              << curve.phi_values[t - 1] << " > bound " << atd::window_bound(n, w, t)
              << " (first violation; bound holds for t >= n/2); ";
          ok = false;
          break;
        }
      }
    }
    detail = why.str();
    if (!ok) return false;
    // Narrow windows (w/n <= 0.05) must dip below the 1/5 floor.
    for (const auto& [n, w] : std::vector<std::pair<int, int>>{{100, 5}, {200, 8}}) {
      if (atd::temporal_sweep(atd::generate(CanonicalSpec::windowed(n, w))).phi_min >= 0.2) {
        return false;
      }
    }
    return true;
  });

  run_criterion(6, "asymmetry magnitude table", [](std::string& detail) {
    const double expected[3] = {0.451, 0.481, 0.489};
    const int sizes[3] = {10, 100, 1000};
    bool ok = true;
    std::ostringstream why;
    for (int i = 0; i < 3; ++i) {
      const double g = g_uniform_causal(sizes[i]);
      if (std::abs(g - expected[i]) > 1e-3) {
        ok = false;
        why << "n=" << sizes[i] << " gives " << g << ", expected " << expected[i]
            << "+-0.001; ";
      }
    }
    detail = why.str();
    return ok;
  });

  run_criterion(7, "asymmetry structure", [](std::string& detail) {
    bool ok = true;
    std::ostringstream why;
    if (atd::asymmetry_g(Eigen::MatrixXd::Identity(8, 8)) != 0.0) {
      ok = false;
      why << "identity not exactly zero; ";
    }
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd b = Eigen::MatrixXd::Random(6, 6).cwiseAbs();
      b = 0.5 * (b + b.transpose()).eval();
      if (atd::asymmetry_g(atd::normalize(atd::validate(b)).values) > 1e-14) {
        ok = false;
        why << "symmetric input gave nonzero asymmetry; ";
        break;
      }
    }
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 6);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
      std::uniform_real_distribution<double> u(0.1, 1.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) b(i, j) = u(rng);
        b.row(i) /= b.row(i).sum();
      }
      if (atd::asymmetry_g(atd::normalize(atd::validate(b, atd::Mask::causal()))) <= 0.0) {
        ok = false;
        why << "causal matrix with off-diagonal mass gave zero; ";
        break;
      }
    }
    for (double alpha : {0.5, 1.0, 2.0}) {
      const double floor = (1.0 - std::exp(-alpha)) / 2.0;
      for (int n : {4, 16, 64}) {
        const double g =
            atd::asymmetry_g(atd::normalize(atd::generate(CanonicalSpec::exp_decay(n, alpha))));
        if (g < floor) {
          ok = false;
          why << "exp decay n=" << n << " alpha=" << alpha << " gives " << g
              << " < floor " << floor << "; ";
        }
      }
    }
    detail = why.str();
    return ok;
  });

  run_criterion(8, "orientation blindness", [](std::string&) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 6);
      const auto a = atd::validate(random_row_stochastic(n, n, rng));
      const auto at = atd::validate(Eigen::MatrixXd(a.values.transpose()));
      const auto m = atd::normalize(a);
      const auto mt = atd::normalize(at);

      Eigen::BDCSVD<Eigen::MatrixXd> s(m.values), st(mt.values);
      if ((s.singularValues() - st.singularValues()).cwiseAbs().maxCoeff() > 1e-10) {
        return false;
      }
      if (std::abs(atd::sweep_conductance(a).phi - atd::sweep_conductance(at).phi) > 1e-9) {
        return false;
      }
      const auto split = atd::sym_antisym(m.values);
      if (std::abs(m.values(0, 1) - m.values(1, 0)) > 2.0 * split.antisym.norm() + 1e-12) {
        return false;
      }
    }
    return true;
  });

  run_criterion(9, "degree sufficiency", [](std::string&) {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 63);
      const auto r = atd::sufficiency_residual(atd::validate(random_row_stochastic(n, n, rng)));
      if (r.residual > r.bound + 1e-9) return false;
      if (r.bound > r.kappa_bound + 1e-9) return false;
    }
    Eigen::MatrixXd ds(3, 3);
    ds << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
    const auto r = atd::sufficiency_residual(atd::validate(ds));
    return r.residual < 1e-12 && r.bound < 1e-9;
  });

  run_criterion(10, "estimator sandwich", [](std::string& detail) {
    std::mt19937_64 rng(109);
    double worst_ratio = 1.0;
    for (int trial = 0; trial < 200; ++trial) {
      const int rows = 2 + static_cast<int>(rng() % 6);
      const int cols = 2 + static_cast<int>(rng() % 6);
      const auto a = atd::validate(random_row_stochastic(rows, cols, rng));
      const double sigma2 = atd::svd_summary(atd::normalize(a), 2).sigma2;
      const double exact = atd::exact_conductance(a).phi;
      const double hat = atd::sweep_conductance(a).phi;
      if ((1.0 - sigma2) / 2.0 > exact + 1e-9) return false;
      if (exact > hat + 1e-9) return false;
      if (hat > std::sqrt(2.0 * (1.0 - sigma2)) + 1e-9) return false;
      if (exact > 1e-12) worst_ratio = std::max(worst_ratio, hat / exact);
    }
    std::ostringstream why;
    why << "worst sweep/exact ratio " << worst_ratio;
    detail = why.str();
    return worst_ratio <= 2.5;
  });

  run_criterion(11, "length collapse", [](std::string& detail) {
    std::mt19937_64 rng(113);
    std::normal_distribution<double> noise(0.0, 20.0);
    std::vector<atd::EvalSample> samples;
    std::vector<double> lengths, labels;
    for (int i = 0; i < 1000; ++i) {
      const int label = static_cast<int>(rng() % 2);
      const int length = std::max(5, static_cast<int>(std::lround(100.0 + 40.0 * label + noise(rng))));
      samples.push_back({static_cast<double>(length), label, length});
      lengths.push_back(length);
      labels.push_back(label);
    }
    const double corr = atd::spearman(lengths, labels).rho;
    const double raw = atd::auroc(samples);
    const double lc = atd::lc_auroc(samples).value;
    std::ostringstream why;
    why << "label-length correlation " << corr << ", raw " << raw
        << ", controlled " << lc;
    detail = why.str();
    return corr > 0.5 && raw >= 0.9 && lc >= 0.45 && lc <= 0.55;
  });

  run_criterion(12, "determinism", [](std::string&) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("atd_accept_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
    atd::run_gen({CanonicalSpec::uniform_causal(24), CanonicalSpec::windowed(24, 6),
                  CanonicalSpec::exp_decay(24, 1.0)},
                 dir.string());
    const auto manifest = atd::load_manifest((dir / "manifest.json").string());
    const std::string a = atd::report_to_string(atd::run_diagnose(manifest));
    const std::string b = atd::report_to_string(atd::run_diagnose(manifest));
    std::error_code ec;
    fs::remove_all(dir, ec);
    return !a.empty() && a == b;
  });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
