// Command-line front end: generate canonical attention families, run
// spectral diagnostics over a manifest, sweep conductance landscapes,
// evaluate features under the length-controlled protocol, and compare the
// sweep estimator against the exhaustive oracle on small instances.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atd/errors.hpp"
#include "atd/io.hpp"
#include "atd/landscape.hpp"
#include "atd/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

atd::CanonicalSpec make_spec(const std::string& kind, int n, int w, double alpha) {
  if (kind == "uniform_causal") return atd::CanonicalSpec::uniform_causal(n);
  if (kind == "window") return atd::CanonicalSpec::windowed(n, w);
  if (kind == "diagonal") return atd::CanonicalSpec::diagonal(n);
  if (kind == "exp_decay") return atd::CanonicalSpec::exp_decay(n, alpha);
  throw atd::OutOfRangeError("unknown family kind: " + kind);
}

void emit(const nlohmann::json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << atd::report_to_string(report);
  } else {
    atd::write_report(out_path, report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral transport diagnostics for attention-like matrices"};
  app.require_subcommand(1);

  std::string kind = "uniform_causal";
  std::vector<int> sizes;
  int window = 1;
  double alpha = 1.0;
  std::string out_path;
  std::string manifest_path;
  std::string matrix_path;
  std::string mask = "none";
  std::string features_path;
  std::string curve_path;
  std::string bins = "auto";
  double eps = 1e-12;
  int dense_limit = 2048;
  double floor = 0.2;
  unsigned long long seed = 0;

  CLI::App* gen = app.add_subcommand("gen", "Write canonical matrices and a manifest");
  gen->add_option("--kind", kind, "uniform_causal|window|diagonal|exp_decay");
  gen->add_option("--n", sizes, "sequence length (repeatable)")->required();
  gen->add_option("--w", window, "window width");
  gen->add_option("--alpha", alpha, "decay rate");
  gen->add_option("--out", out_path, "output directory")->required();

  CLI::App* diagnose = app.add_subcommand("diagnose", "Spectral diagnostics per head");
  diagnose->add_option("--manifest", manifest_path, "manifest JSON")->required();
  diagnose->add_option("--eps", eps, "asymmetry regularizer");
  diagnose->add_option("--dense-limit", dense_limit, "dense SVD size limit");
  diagnose->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* landscape = app.add_subcommand("landscape", "Prefix-cut conductance landscapes");
  landscape->add_option("--manifest", manifest_path, "manifest JSON");
  landscape->add_option("--kind", kind, "generated family kind");
  landscape->add_option("--n", sizes, "sequence length (repeatable)");
  landscape->add_option("--w", window, "window width");
  landscape->add_option("--alpha", alpha, "decay rate");
  landscape->add_option("--floor", floor, "conductance floor");
  landscape->add_option("--curve-out", curve_path, "CSV path for the first head's curve");
  landscape->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* eval = app.add_subcommand("eval", "Length-controlled feature evaluation");
  eval->add_option("--features", features_path, "feature table CSV")->required();
  eval->add_option("--bins", bins, "auto or a fixed bin count");
  eval->add_option("--seed", seed, "bootstrap seed");
  eval->add_option("--out", out_path, "report path (default stdout)");

  CLI::App* oracle = app.add_subcommand("oracle", "Sweep vs exhaustive conductance");
  oracle->add_option("--matrix", matrix_path, "matrix file")->required();
  oracle->add_option("--mask", mask, "none|causal|window:<w>");
  oracle->add_option("--out", out_path, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      std::vector<atd::CanonicalSpec> specs;
      for (int n : sizes) specs.push_back(make_spec(kind, n, window, alpha));
      atd::run_gen(specs, out_path);
      return kExitOk;
    }
    if (diagnose->parsed()) {
      atd::DiagnoseOptions options;
      options.eps = eps;
      options.dense_limit = dense_limit;
      emit(atd::run_diagnose(atd::load_manifest(manifest_path), options), out_path);
      return kExitOk;
    }
    if (landscape->parsed()) {
      nlohmann::json report;
      if (!manifest_path.empty()) {
        report = atd::run_landscape(atd::load_manifest(manifest_path), floor);
      } else {
        if (sizes.empty()) {
          std::cerr << "landscape needs --manifest or --kind/--n\n";
          return kExitUsage;
        }
        std::vector<atd::CanonicalSpec> specs;
        for (int n : sizes) specs.push_back(make_spec(kind, n, window, alpha));
        if (!curve_path.empty()) {
          const atd::AttentionMatrix head = atd::generate(specs.front());
          atd::write_curve_csv(curve_path, atd::temporal_sweep(head), head.rows());
        }
        report = atd::run_landscape(specs, floor);
      }
      emit(report, out_path);
      return kExitOk;
    }
    if (eval->parsed()) {
      atd::EvalOptions options;
      options.seed = seed;
      if (bins != "auto") {
        try {
          options.bins = std::stoi(bins);
        } catch (const std::exception&) {
          std::cerr << "--bins must be 'auto' or an integer\n";
          return kExitUsage;
        }
      }
      emit(atd::run_eval(features_path, options), out_path);
      return kExitOk;
    }
    if (oracle->parsed()) {
      emit(atd::run_oracle(matrix_path, mask), out_path);
      return kExitOk;
    }
  } catch (const atd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
