#include "fpslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Fit {
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  Fit fit;
  const double n = static_cast<double>(x.size());
  if (x.size() < 5 || x.size() != y.size()) return fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (!(det > 1e-9 * (n * sxx + 1.0))) return fit;  // degenerate abscissae
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.valid = true;
  return fit;
}

// Shared verdict engine for all nonnegative-term spectral series.
SeriesReport analyze_series(const FPState& st, int p_label, int exponent, double weight,
                            bool use_sin2theta_sq, const DiagnosticOptions& opt) {
  const std::size_t n = st.num_modes();
  if (n < opt.min_modes) throw InsufficientModes("too few modes for a series verdict");

  SeriesReport rep;
  rep.p = p_label;
  rep.cutoff = st.cutoff();
  rep.n_modes = n;

  const double lambda_max = st.block(n).lambda;
  const std::size_t decade_start = n / 10;  // last decade of partial sums: z > n/10

  // log-spaced recording indices, always including N
  std::vector<std::size_t> record;
  for (std::size_t i = 1; i <= opt.record_points; ++i) {
    auto idx = static_cast<std::size_t>(
        std::llround(std::exp(std::log(double(n)) * double(i) / double(opt.record_points))));
    idx = std::clamp<std::size_t>(idx, 1, n);
    if (record.empty() || idx > record.back()) record.push_back(idx);
  }
  if (record.back() != n) record.push_back(n);

  const std::size_t win = std::max<std::size_t>(
      1, static_cast<std::size_t>(opt.window_fraction * double(n)));
  const std::size_t win_start = n - win + 1;

  double total = 0.0, decade_sum = 0.0, window_max = 0.0;
  bool all_zero = true;
  std::vector<double> fit_lx, fit_ly;  // log lambda vs log term, last decade
  std::vector<double> cnt_lx, cnt_ly;  // log lambda vs log z, last decade
  std::size_t rec_i = 0;
  for (std::size_t z = 1; z <= n; ++z) {
    const ModeBlock& b = st.block(z);
    const double q = use_sin2theta_sq ? b.sin2theta * b.sin2theta : b.sin_sq();
    const double term = weight * std::pow(b.lambda, exponent) * q;
    total += term;
    if (term != 0.0) all_zero = false;
    if (z > decade_start) {
      decade_sum += term;
      cnt_lx.push_back(std::log(b.lambda));
      cnt_ly.push_back(std::log(double(z)));
      if (term > 0.0) {
        fit_lx.push_back(std::log(b.lambda));
        fit_ly.push_back(std::log(term));
      }
    }
    if (z >= win_start) window_max = std::max(window_max, term);
    if (rec_i < record.size() && z == record[rec_i]) {
      rep.partial_sums.emplace_back(z, total);
      ++rec_i;
    }
  }
  rep.last_decade_change = decade_sum;
  rep.window_max = window_max;

  if (all_zero) {
    rep.tail_estimate = 0.0;
    rep.verdict = Verdict::converged;
    return rep;
  }

  // Tail beyond the cutoff: power-law fit of terms against lambda combined with
  // a power-law fit of the counting function.  When the fitted exponent is
  // nonnegative the last decade is noise- or plateau-dominated; in that regime
  // the decade sum itself is the only defensible proxy.
  const Fit ft = least_squares(fit_lx, fit_ly);
  const Fit fq = least_squares(cnt_lx, cnt_ly);
  double tail = kInf;
  if (ft.valid && fq.valid && fq.slope > 0 && ft.slope + fq.slope < 0) {
    const double s = ft.slope, q = fq.slope;
    tail = std::exp(ft.intercept) * std::exp(fq.intercept) * q *
           std::pow(lambda_max, s + q) / (-(s + q));
  } else if (decade_sum < opt.tail_tol) {
    tail = decade_sum;
  }
  rep.tail_estimate = tail;

  if (window_max > opt.decay_floor)
    rep.verdict = Verdict::diverging;
  else if (decade_sum < opt.tail_tol && tail < opt.tail_tol)
    rep.verdict = Verdict::converged;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverging: return "diverging";
    default: return "inconclusive";
  }
}

std::vector<std::pair<long, double>> sin_theta_sequence(const FPState& state) {
  std::vector<std::pair<long, double>> out;
  out.reserve(state.num_modes());
  for (std::size_t z = 1; z <= state.num_modes(); ++z)
    out.emplace_back(static_cast<long>(z), std::fabs(state.block(z).sin_theta()));
  return out;
}

SeriesReport hadamard_series(const FPState& state, int p, const DiagnosticOptions& opt) {
  if (p < 0) throw InvalidParams("series exponent p must be nonnegative");
  return analyze_series(state, p, p, 1.0, false, opt);
}

KSpectrumReport k_operator_spectrum(const FPState& state, double a_prime, double b_prime,
                                    const DiagnosticOptions& opt) {
  const SlabConfig& slab = state.slab();
  if (!(slab.a < a_prime && a_prime < b_prime && b_prime < slab.b))
    throw InvalidSubslab("need a < a' < b' < b");
  const double width = b_prime - a_prime;
  KSpectrumReport rep;
  rep.eigenvalues.reserve(state.num_modes());
  const std::size_t n = state.num_modes();
  const std::size_t win = std::max<std::size_t>(
      1, static_cast<std::size_t>(opt.window_fraction * double(n)));
  for (std::size_t z = 1; z <= n; ++z) {
    const double v = width * std::fabs(state.block(z).sin_theta());
    rep.eigenvalues.emplace_back(static_cast<long>(z), v);
    if (z > n - win) rep.window_max = std::max(rep.window_max, v);
  }
  rep.compact = rep.window_max < opt.decay_floor;
  return rep;
}

ScanReport scan_slab_halfwidths(const Spectrum& spectrum, const std::vector<double>& b_grid,
                                std::size_t window, const DiagnosticOptions& opt) {
  if (b_grid.empty()) throw InvalidParams("empty halfwidth grid");
  for (std::size_t i = 1; i < b_grid.size(); ++i)
    if (!(b_grid[i] > b_grid[i - 1])) throw NotSorted("halfwidth grid must increase strictly");

  const std::size_t n = spectrum.size();
  const std::size_t win = std::clamp<std::size_t>(window, 1, n);
  ScanReport rep;
  rep.window = win;
  std::size_t flagged = 0;
  for (double b : b_grid) {
    ScanRow row;
    row.b = b;
    row.min = kInf;
    double sum = 0.0;
    for (std::size_t z = n - win + 1; z <= n; ++z) {
      const double s = std::sin(2.0 * b * spectrum.lambda(static_cast<long>(z)));
      const double v = s * s;
      row.min = std::min(row.min, v);
      row.max = std::max(row.max, v);
      sum += v;
    }
    row.mean = sum / double(win);
    row.flagged = row.max > opt.decay_floor;
    if (row.flagged) ++flagged;
    rep.rows.push_back(row);
  }
  rep.flagged_fraction = double(flagged) / double(b_grid.size());
  return rep;
}

SeriesReport fluctuation_squared(const FPState& state, int p, complexd hhat0,
                                 const DiagnosticOptions& opt) {
  if (p < 1) throw InvalidParams("fluctuation order p must be >= 1");
  return analyze_series(state, p, 4 * p - 2, std::norm(hhat0), true, opt);
}

BridgeReport fluctuation_implies_hadamard_check(const FPState& state,
                                                const DiagnosticOptions& opt) {
  BridgeReport rep;
  rep.bridge_ok = true;
  rep.worst_margin = kInf;
  for (std::size_t z = 1; z <= state.num_modes(); ++z) {
    const ModeBlock& b = state.block(z);
    const double s2 = b.sin_sq();
    const double d = b.sin2theta * b.sin2theta;
    const double eps = 1e-12 * std::max(1.0, d);
    const double lo = d - 2.0 * s2;   // >= 0 needs cos^2 theta >= 1/2
    const double hi = 4.0 * s2 - d;   // >= 0 always
    rep.worst_margin = std::min({rep.worst_margin, lo, hi});
    if (lo < -eps || hi < -eps) rep.bridge_ok = false;
  }

  rep.verdicts_agree = true;
  for (int p : {1, 2}) {
    const Verdict vf = fluctuation_squared(state, p, complexd(1.0, 0.0), opt).verdict;
    const Verdict vh = hadamard_series(state, 4 * p - 2, opt).verdict;
    rep.verdict_pairs.emplace_back(vf, vh);
    if (vf != vh) rep.verdicts_agree = false;
  }
  rep.ok = rep.bridge_ok && rep.verdicts_agree;
  return rep;
}

}  // namespace fpslab
