#pragma once

#include <utility>
#include <vector>

#include "atd/attention.hpp"

namespace atd {

enum class CanonicalKind { UniformCausal, Window, Diagonal, ExpDecay };

/// Parameters of a canonical causal attention family.
struct CanonicalSpec {
  CanonicalKind kind = CanonicalKind::UniformCausal;
  int n = 2;
  int window = 1;      // Window only
  double alpha = 1.0;  // ExpDecay only

  static CanonicalSpec uniform_causal(int n) {
    return {CanonicalKind::UniformCausal, n, 1, 1.0};
  }
  static CanonicalSpec windowed(int n, int w) {
    return {CanonicalKind::Window, n, w, 1.0};
  }
  static CanonicalSpec diagonal(int n) {
    return {CanonicalKind::Diagonal, n, 1, 1.0};
  }
  static CanonicalSpec exp_decay(int n, double alpha) {
    return {CanonicalKind::ExpDecay, n, 1, alpha};
  }
};

enum class CutStatus {
  Ok,
  Disconnected,  // zero cut weight: the temporal cut severs no edges
  Skipped,       // a zero-volume side; excluded from the minimum
};

/// Conductance of every index-aligned prefix cut S_t = {Q_<t, K_<t}.
struct LandscapeCurve {
  std::vector<int> t_values;        // 1 .. n-1
  std::vector<double> phi_values;   // conductance per t (0 when disconnected)
  std::vector<CutStatus> status;    // per t
  int t_star = 0;                   // argmin over non-skipped t, smallest on ties
  double phi_min = 0.0;
  bool floor_pierced = false;       // phi_min < 1/5
};

AttentionMatrix generate(const CanonicalSpec& spec);

/// Harmonic number H_n, summed smallest terms first. H_0 = 0.
double harmonic(int n);

/// Closed-form cut weight and volume of the prefix cut S_t for the
/// uniform causal family: cut = t (H_n - H_t), vol = t (2 + H_n - H_t).
std::pair<double, double> closed_form_cut_vol(int n, int t);

/// Closed-form prefix-cut conductance for the uniform causal family,
/// cut / min(vol, 2n - vol). Requires 0 < t < n (OutOfRangeError).
double closed_form_phi_uc(int n, int t);

/// Evaluates every prefix cut on the dilation of a square matrix (n >= 2).
/// Throws AllSkippedError when every cut has a zero-volume side.
LandscapeCurve temporal_sweep(const AttentionMatrix& a);

/// Upper bound w / (n - t) on the prefix-cut conductance of w-window
/// attention. Requires 0 < t < n (OutOfRangeError).
double window_bound(int n, int w, int t);

/// Fraction of values strictly below the floor (default 1/5).
double floor_fraction(const std::vector<double>& minima, double floor = 0.2);

}  // namespace atd
