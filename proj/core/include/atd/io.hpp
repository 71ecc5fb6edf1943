#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "atd/attention.hpp"
#include "atd/landscape.hpp"

namespace atd {

/// One head in a dataset manifest.
struct ManifestEntry {
  std::string sample_id;
  int layer = 0;
  int head = 0;
  std::string path;
  std::string mask = "none";  // "none" | "causal" | "window:<w>"
  std::optional<int> label;
  std::optional<int> length;
};

using Manifest = std::vector<ManifestEntry>;

struct DiagnoseOptions {
  double eps = 1e-12;      // asymmetry-coefficient regularizer
  int dense_limit = 2048;  // dense/iterative SVD threshold
};

struct EvalOptions {
  std::optional<int> bins;  // fixed bin count; unset = automatic selection
  unsigned long long seed = 0;
  int resamples = 1000;
};

/// Binary matrix container: magic "ATM1", two little-endian uint32 dims,
/// one dtype byte (1 = float64, 2 = float32), row-major little-endian
/// payload. Paths ending in .csv read/write a plain numeric grid instead.
Eigen::MatrixXd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const Eigen::MatrixXd& m,
                  int dtype = 1);

Mask parse_mask(const std::string& text);
std::string mask_to_string(const Mask& mask);

Manifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const Manifest& manifest);

/// Per-entry diagnostics (normalize, spectral summary, sweep, asymmetry);
/// entry failures are captured in the report, never fatal.
nlohmann::json run_diagnose(const Manifest& manifest,
                            const DiagnoseOptions& options = {});

/// Prefix-cut landscape per head plus the population summary
/// (mean/std of t*/n, mean/std of the minimum, floor-violation fraction).
nlohmann::json run_landscape(const Manifest& manifest, double floor = 0.2);
nlohmann::json run_landscape(const std::vector<CanonicalSpec>& specs,
                             double floor = 0.2);

/// Raw AUROC, flipped AUROC and length-controlled AUROC with bootstrap CI
/// for each feature column of a CSV with header
/// sample_id,layer,head,phi_hat,sigma2,g,label,length.
nlohmann::json run_eval(const std::string& feature_csv,
                        const EvalOptions& options = {});

/// Exhaustive and sweep conductance of one small matrix, plus their ratio.
nlohmann::json run_oracle(const std::string& path,
                          const std::string& mask = "none");

/// Writes the canonical matrices plus a manifest.json into out_dir.
Manifest run_gen(const std::vector<CanonicalSpec>& specs,
                 const std::string& out_dir);

/// Columns t, t_over_n, phi (skipped cuts omitted).
void write_curve_csv(const std::string& path, const LandscapeCurve& curve, int n);

/// Serialized report text; wraps json dump so every writer agrees.
std::string report_to_string(const nlohmann::json& report);
void write_report(const std::string& path, const nlohmann::json& report);

}  // namespace atd
