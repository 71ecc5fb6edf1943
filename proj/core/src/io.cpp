#include "atd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "atd/evalmetrics.hpp"
#include "atd/spectral.hpp"
#include "atd/transport.hpp"

namespace atd {

namespace {

constexpr char kMagic[4] = {'A', 'T', 'M', '1'};

bool has_csv_extension(const std::string& path) {
  return std::filesystem::path(path).extension() == ".csv";
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailureError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyMatrixError("no numeric rows in " + path);
  const std::size_t cols = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw TruncatedPayloadError("ragged rows in " + path);
    }
  }
  Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
  }
  if (!m.allFinite()) throw NonFiniteValueError("non-finite value in " + path);
  return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw IoFailureError("cannot open " + path + " for writing");
  out.precision(17);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoFailureError("write failed on " + path);
}

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4)) {
    throw TruncatedPayloadError("header ends early");
  }
  return static_cast<std::uint32_t>(buf[0]) |
         (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) |
         (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const unsigned char buf[4] = {
      static_cast<unsigned char>(v & 0xff),
      static_cast<unsigned char>((v >> 8) & 0xff),
      static_cast<unsigned char>((v >> 16) & 0xff),
      static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path) {
  if (has_csv_extension(path)) return read_csv_matrix(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailureError("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw BadMagicError("not a matrix container: " + path);
  }
  const std::uint32_t n_q = read_u32_le(in);
  const std::uint32_t n_k = read_u32_le(in);
  char dtype_c;
  if (!in.get(dtype_c)) throw TruncatedPayloadError("missing dtype byte");
  const int dtype = static_cast<unsigned char>(dtype_c);
  if (dtype != 1 && dtype != 2) {
    throw BadMagicError("unknown dtype code " + std::to_string(dtype));
  }

  Eigen::MatrixXd m(static_cast<int>(n_q), static_cast<int>(n_k));
  const std::size_t count = static_cast<std::size_t>(n_q) * n_k;
  if (dtype == 1) {
    std::vector<double> buf(count);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(count * sizeof(double)))) {
      throw TruncatedPayloadError("payload ends early in " + path);
    }
    for (std::size_t idx = 0; idx < count; ++idx) {
      m(static_cast<int>(idx / n_k), static_cast<int>(idx % n_k)) = buf[idx];
    }
  } else {
    std::vector<float> buf(count);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(count * sizeof(float)))) {
      throw TruncatedPayloadError("payload ends early in " + path);
    }
    for (std::size_t idx = 0; idx < count; ++idx) {
      m(static_cast<int>(idx / n_k), static_cast<int>(idx % n_k)) =
          static_cast<double>(buf[idx]);
    }
  }
  if (!m.allFinite()) throw NonFiniteValueError("non-finite value in " + path);
  return m;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, int dtype) {
  if (has_csv_extension(path)) {
    write_csv_matrix(path, m);
    return;
  }
  if (dtype != 1 && dtype != 2) {
    throw OutOfRangeError("dtype must be 1 (float64) or 2 (float32)");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailureError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  write_u32_le(out, static_cast<std::uint32_t>(m.rows()));
  write_u32_le(out, static_cast<std::uint32_t>(m.cols()));
  out.put(static_cast<char>(dtype));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (dtype == 1) {
        const double v = m(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      } else {
        const float v = static_cast<float>(m(i, j));
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  }
  if (!out) throw IoFailureError("write failed on " + path);
}

Mask parse_mask(const std::string& text) {
  if (text == "none") return Mask::none();
  if (text == "causal") return Mask::causal();
  if (text.rfind("window:", 0) == 0) {
    const int w = std::stoi(text.substr(7));
    if (w < 1) throw OutOfRangeError("window width must be >= 1");
    return Mask::windowed(w);
  }
  throw OutOfRangeError("unknown mask spec: " + text);
}

std::string mask_to_string(const Mask& mask) {
  switch (mask.kind) {
    case MaskKind::None:
      return "none";
    case MaskKind::Causal:
      return "causal";
    case MaskKind::Window:
      return "window:" + std::to_string(mask.window);
  }
  return "none";
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestUnreadableError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ManifestUnreadableError(std::string("manifest parse error: ") + e.what());
  }
  if (!j.is_array()) throw ManifestUnreadableError("manifest must be a JSON array");

  Manifest m;
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  try {
    for (const auto& e : j) {
      ManifestEntry entry;
      entry.sample_id = e.at("sample_id").get<std::string>();
      entry.layer = e.at("layer").get<int>();
      entry.head = e.at("head").get<int>();
      entry.path = e.at("path").get<std::string>();
      if (!base.empty() && std::filesystem::path(entry.path).is_relative()) {
        entry.path = (base / entry.path).string();
      }
      if (e.contains("mask")) entry.mask = e["mask"].get<std::string>();
      if (e.contains("label") && !e["label"].is_null()) {
        entry.label = e["label"].get<int>();
      }
      if (e.contains("length") && !e["length"].is_null()) {
        entry.length = e["length"].get<int>();
      }
      m.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestUnreadableError(std::string("manifest field error: ") + e.what());
  }
  return m;
}

void save_manifest(const std::string& path, const Manifest& manifest) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : manifest) {
    nlohmann::json entry{{"sample_id", e.sample_id}, {"layer", e.layer},
                         {"head", e.head},           {"path", e.path},
                         {"mask", e.mask}};
    if (e.label) entry["label"] = *e.label;
    if (e.length) entry["length"] = *e.length;
    j.push_back(std::move(entry));
  }
  std::ofstream out(path);
  if (!out) throw IoFailureError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoFailureError("write failed on " + path);
}

nlohmann::json run_diagnose(const Manifest& manifest,
                            const DiagnoseOptions& options) {
  nlohmann::json report;
  report["report_version"] = 1;
  report["records"] = nlohmann::json::array();

  std::vector<DiagnosticsRecord> successes;
  for (const auto& entry : manifest) {
    nlohmann::json rec{{"sample_id", entry.sample_id},
                       {"layer", entry.layer},
                       {"head", entry.head}};
    try {
      const Eigen::MatrixXd values = read_matrix(entry.path);
      const AttentionMatrix a = validate(values, parse_mask(entry.mask));
      const TransportOperator m = normalize(a);
      const SpectralSummary s = svd_summary(m, 2, options.dense_limit);
      const CutResult cut = sweep_conductance(a, true, options.dense_limit);

      rec["row_stochastic"] = a.row_stochastic;
      rec["sigma1"] = s.singular_values.size() > 0 ? s.singular_values[0] : 0.0;
      rec["sigma2"] = s.sigma2;
      rec["gap"] = s.gap;
      rec["phi_hat"] = cut.phi;
      rec["cut_size"] = static_cast<int>(
          std::count(cut.members.begin(), cut.members.end(), true));
      rec["degrees"] = {{"d_bar", m.degrees.d_bar},
                        {"kappa", m.degrees.kappa},
                        {"d_q_min", m.degrees.d_q.minCoeff()},
                        {"d_q_max", m.degrees.d_q.maxCoeff()},
                        {"d_k_min", m.degrees.d_k.minCoeff()},
                        {"d_k_max", m.degrees.d_k.maxCoeff()}};

      DiagnosticsRecord d;
      d.sample_id = entry.sample_id;
      d.layer = entry.layer;
      d.head = entry.head;
      d.phi_hat = cut.phi;
      d.sigma2 = s.sigma2;
      d.gap = s.gap;
      if (a.square()) {
        d.g = asymmetry_g(m, options.eps);
        rec["g"] = *d.g;
      } else {
        rec["g"] = nullptr;
        rec["g_reason"] = "asymmetry undefined for rectangular matrices";
      }
      successes.push_back(std::move(d));
    } catch (const Error& e) {
      rec["error"] = e.what();
    }
    report["records"].push_back(std::move(rec));
  }

  if (!successes.empty()) {
    report["aggregates"] = aggregate_heads(successes);
  }
  return report;
}

namespace {

nlohmann::json landscape_report(
    const std::vector<std::tuple<std::string, int, int>>& ids,
    const std::vector<AttentionMatrix>& heads,
    const std::vector<std::string>& load_errors, double floor) {
  nlohmann::json report;
  report["report_version"] = 1;
  report["floor"] = floor;
  report["records"] = nlohmann::json::array();

  std::vector<double> t_ratios, minima;
  for (std::size_t idx = 0; idx < ids.size(); ++idx) {
    const auto& [sample_id, layer, head] = ids[idx];
    nlohmann::json rec{{"sample_id", sample_id}, {"layer", layer}, {"head", head}};
    if (!load_errors[idx].empty()) {
      rec["error"] = load_errors[idx];
      report["records"].push_back(std::move(rec));
      continue;
    }
    try {
      const LandscapeCurve curve = temporal_sweep(heads[idx]);
      const int n = heads[idx].rows();
      rec["t_star"] = curve.t_star;
      rec["t_star_over_n"] = static_cast<double>(curve.t_star) / n;
      rec["phi_min"] = curve.phi_min;
      rec["floor_pierced"] = curve.phi_min < floor;
      t_ratios.push_back(static_cast<double>(curve.t_star) / n);
      minima.push_back(curve.phi_min);
    } catch (const Error& e) {
      rec["error"] = e.what();
    }
    report["records"].push_back(std::move(rec));
  }

  if (minima.empty()) {
    throw EmptyListError("no head produced a landscape curve");
  }
  const FeatureAggregate rt = robust_stats(t_ratios);
  const FeatureAggregate rm = robust_stats(minima);
  report["summary"] = {{"t_star_over_n_mean", rt.mean},
                       {"t_star_over_n_std", rt.std},
                       {"phi_min_mean", rm.mean},
                       {"phi_min_std", rm.std},
                       {"floor_fraction", floor_fraction(minima, floor)}};
  return report;
}

std::string spec_slug(const CanonicalSpec& spec) {
  std::ostringstream name;
  switch (spec.kind) {
    case CanonicalKind::UniformCausal:
      name << "uniform_causal_n" << spec.n;
      break;
    case CanonicalKind::Window:
      name << "window_n" << spec.n << "_w" << spec.window;
      break;
    case CanonicalKind::Diagonal:
      name << "diagonal_n" << spec.n;
      break;
    case CanonicalKind::ExpDecay:
      name << "exp_decay_n" << spec.n << "_a" << spec.alpha;
      break;
  }
  return name.str();
}

}  // namespace

nlohmann::json run_landscape(const Manifest& manifest, double floor) {
  if (manifest.empty()) throw EmptyListError("manifest has no entries");
  std::vector<std::tuple<std::string, int, int>> ids;
  std::vector<AttentionMatrix> heads;
  std::vector<std::string> errors;
  for (const auto& entry : manifest) {
    ids.emplace_back(entry.sample_id, entry.layer, entry.head);
    try {
      heads.push_back(validate(read_matrix(entry.path), parse_mask(entry.mask)));
      errors.emplace_back();
    } catch (const Error& e) {
      heads.emplace_back();
      errors.emplace_back(e.what());
    }
  }
  return landscape_report(ids, heads, errors, floor);
}

nlohmann::json run_landscape(const std::vector<CanonicalSpec>& specs, double floor) {
  if (specs.empty()) throw EmptyListError("no canonical specs given");
  std::vector<std::tuple<std::string, int, int>> ids;
  std::vector<AttentionMatrix> heads;
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    ids.emplace_back(spec_slug(specs[i]), 0, static_cast<int>(i));
    try {
      heads.push_back(generate(specs[i]));
      errors.emplace_back();
    } catch (const Error& e) {
      heads.emplace_back();
      errors.emplace_back(e.what());
    }
  }
  return landscape_report(ids, heads, errors, floor);
}

nlohmann::json run_eval(const std::string& feature_csv, const EvalOptions& options) {
  std::ifstream in(feature_csv);
  if (!in) throw IoFailureError("cannot open " + feature_csv);
  std::string line;
  if (!std::getline(in, line)) throw EmptyListError("empty feature table");

  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) header.push_back(col);
  }
  const auto col_index = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int label_col = col_index("label");
  const int length_col = col_index("length");
  if (label_col < 0) throw MissingColumnError("feature table lacks a label column");
  if (length_col < 0) throw MissingColumnError("feature table lacks a length column");

  std::vector<int> feature_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i];
    if (h != "sample_id" && h != "layer" && h != "head" && h != "label" &&
        h != "length") {
      feature_cols.push_back(static_cast<int>(i));
    }
  }

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (cells.size() < header.size()) cells.emplace_back();
    rows.push_back(std::move(cells));
  }

  nlohmann::json report;
  report["report_version"] = 1;
  report["seed"] = options.seed;
  report["features"] = nlohmann::json::object();

  for (int fc : feature_cols) {
    std::vector<EvalSample> samples;
    for (const auto& cells : rows) {
      const std::string& raw = cells[fc];
      if (raw.empty()) continue;  // feature missing for this row
      EvalSample s;
      try {
        s.score = std::stod(raw);
        s.label = std::stoi(cells[label_col]);
        s.length = std::stoi(cells[length_col]);
      } catch (const std::exception&) {
        throw NonFiniteValueError("unparsable value in column " + header[fc]);
      }
      samples.push_back(s);
    }
    if (samples.empty()) continue;

    const double raw_auroc = auroc(samples);
    LcAurocResult lc;
    if (options.bins) {
      lc = lc_auroc_with_bins(samples, *options.bins);
    } else {
      lc = lc_auroc(samples);
    }
    // The bin count is frozen from the full sample; each resample reruns
    // residualization and aggregation with that count.
    const int bin_count = lc.bin_count;
    const auto metric = [bin_count](const std::vector<EvalSample>& s) {
      return lc_auroc_with_bins(s, bin_count).value;
    };
    const auto [lo, hi] =
        bootstrap_ci(metric, samples, options.resamples, options.seed);

    report["features"][header[fc]] = {
        {"raw_auroc", raw_auroc},
        {"flipped_auroc", flipped_auroc(raw_auroc)},
        {"lc_auroc", lc.value},
        {"lc_bins", lc.bin_count},
        {"lc_fallback", lc.fallback_flag},
        {"lc_flipped", lc.flipped},
        {"lc_ci_lo", lo},
        {"lc_ci_hi", hi},
        {"n_samples", static_cast<int>(samples.size())}};
  }
  return report;
}

nlohmann::json run_oracle(const std::string& path, const std::string& mask) {
  const AttentionMatrix a = validate(read_matrix(path), parse_mask(mask));
  const CutResult exact = exact_conductance(a);
  const CutResult sweep = sweep_conductance(a);
  return {{"report_version", 1},
          {"phi_exact", exact.phi},
          {"phi_hat", sweep.phi},
          {"ratio", exact.phi > 0.0 ? sweep.phi / exact.phi : 1.0}};
}

Manifest run_gen(const std::vector<CanonicalSpec>& specs, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailureError("cannot create " + out_dir + ": " + ec.message());

  Manifest manifest;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const AttentionMatrix a = generate(specs[i]);
    const std::string name = spec_slug(specs[i]) + ".atm1";
    write_matrix((std::filesystem::path(out_dir) / name).string(), a.values);

    ManifestEntry entry;
    entry.sample_id = spec_slug(specs[i]);
    entry.layer = 0;
    entry.head = static_cast<int>(i);
    entry.path = name;  // relative to the manifest location
    entry.mask = mask_to_string(a.mask);
    manifest.push_back(std::move(entry));
  }
  save_manifest((std::filesystem::path(out_dir) / "manifest.json").string(),
                manifest);
  return manifest;
}

void write_curve_csv(const std::string& path, const LandscapeCurve& curve, int n) {
  std::ofstream out(path);
  if (!out) throw IoFailureError("cannot open " + path + " for writing");
  out.precision(17);
  out << "t,t_over_n,phi\n";
  for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
    if (curve.status[i] == CutStatus::Skipped) continue;
    out << curve.t_values[i] << ','
        << static_cast<double>(curve.t_values[i]) / n << ','
        << curve.phi_values[i] << '\n';
  }
  if (!out) throw IoFailureError("write failed on " + path);
}

std::string report_to_string(const nlohmann::json& report) {
  return report.dump(2) + "\n";
}

void write_report(const std::string& path, const nlohmann::json& report) {
  std::ofstream out(path);
  if (!out) throw IoFailureError("cannot open " + path + " for writing");
  out << report_to_string(report);
  if (!out) throw IoFailureError("write failed on " + path);
}

}  // namespace atd
