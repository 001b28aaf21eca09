#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "fpslab/fpstate.hpp"

namespace fpslab {

enum class Verdict { converged, diverging, inconclusive };
const char* to_string(Verdict v);

struct DiagnosticOptions {
  double tail_tol = 1e-8;
  double decay_floor = 0.1;
  double window_fraction = 0.25;  // top-of-spectrum window for decay checks
  std::size_t min_modes = 10;
  std::size_t record_points = 50;
};

struct SeriesReport {
  int p = 0;
  std::vector<std::pair<std::size_t, double>> partial_sums;  // (N, S_p(N))
  double last_decade_change = 0.0;  // contribution of modes with z > N/10
  double tail_estimate = 0.0;
  double window_max = 0.0;  // largest term over the decay window
  Verdict verdict = Verdict::inconclusive;
  double cutoff = 0.0;
  std::size_t n_modes = 0;
};

// mu_z = |sin theta_{f,z}| per positive mode
std::vector<std::pair<long, double>> sin_theta_sequence(const FPState& state);

// Partial sums of S_p = sum_z lambda_z^p sin^2 theta_{f,z}.
SeriesReport hadamard_series(const FPState& state, int p, const DiagnosticOptions& opt = {});

struct KSpectrumReport {
  std::vector<std::pair<long, double>> eigenvalues;  // (z, +(b'-a') sin theta); - implied
  bool compact = false;
  double window_max = 0.0;
};
KSpectrumReport k_operator_spectrum(const FPState& state, double a_prime, double b_prime,
                                    const DiagnosticOptions& opt = {});

struct ScanRow {
  double b = 0.0;
  double min = 0.0, max = 0.0, mean = 0.0;  // of sin^2(2 b lambda) over the window
  bool flagged = false;                     // non-Hadamard indicated
};
struct ScanReport {
  std::vector<ScanRow> rows;
  double flagged_fraction = 0.0;
  std::size_t window = 0;
};
ScanReport scan_slab_halfwidths(const Spectrum& spectrum, const std::vector<double>& b_grid,
                                std::size_t window, const DiagnosticOptions& opt = {});

// Partial sums of |hhat0|^2 sum_w lambda_w^{4p-2} sin^2 2theta_{f,w}.
SeriesReport fluctuation_squared(const FPState& state, int p, complexd hhat0,
                                 const DiagnosticOptions& opt = {});

struct BridgeReport {
  bool bridge_ok = false;       // 2 sin^2 t <= sin^2 2t <= 4 sin^2 t on every mode
  double worst_margin = 0.0;    // most negative slack observed
  bool verdicts_agree = false;  // fluctuation at p vs series at 4p-2, p in {1,2}
  std::vector<std::pair<Verdict, Verdict>> verdict_pairs;
  bool ok = false;
};
BridgeReport fluctuation_implies_hadamard_check(const FPState& state,
                                                const DiagnosticOptions& opt = {});

}  // namespace fpslab
