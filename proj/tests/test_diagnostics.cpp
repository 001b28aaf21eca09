#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fpslab/diagnostics.hpp"

using namespace fpslab;

namespace {

std::shared_ptr<const Spectrum> torus(double cutoff, double m = 1.0) {
  return std::make_shared<Spectrum>(
      torus_spectrum(ModelParams{m, {2 * M_PI, 2 * M_PI, 2 * M_PI}}, cutoff));
}

// Shared across cases: the cutoff-50 build dominates runtime.
const FPState& softened_state() {
  static const FPState st = [] {
    const double cutoff = 50.0, halfwidth = 15.0;
    const auto f = std::make_shared<SofteningFunction>(SofteningFunction::bump(0.0, halfwidth));
    return build_fp_state(torus(cutoff), SlabConfig{-halfwidth - 1, halfwidth + 1}, f, cutoff);
  }();
  return st;
}

FPState unsoftened_state(double cutoff, double b = 1.0) {
  const auto sp = torus(cutoff);
  const auto f = std::make_shared<SofteningFunction>(SofteningFunction::indicator(-b, b));
  return build_fp_state(sp, SlabConfig{-b, b}, f, cutoff);
}

constexpr double kSinT = 0.054219462005042004;           // sqrt(2) mode, indicator(-1,1)
constexpr double kFlucTerm = 0.02344886343760192289;     // lambda^2 sin^2 2theta there

}  // namespace

TEST_CASE("sin_theta_sequence") {
  const FPState st = unsoftened_state(3.0);
  const auto seq = sin_theta_sequence(st);
  REQUIRE(seq.size() == st.num_modes());
  for (const auto& [z, mu] : seq) {
    CHECK(mu >= 0.0);
    CHECK(std::fabs(mu - std::fabs(std::sin(st.block(std::size_t(z)).theta))) < 1e-15);
    // explicit formula mu = sqrt((1 - fhat(0) m / (lambda Xi))/2), mixed tolerance
    const ModeBlock& b = st.block(std::size_t(z));
    const double explicit_mu = std::sqrt(std::max(0.0, (1.0 - b.cos2theta) / 2.0));
    CHECK(std::fabs(mu - explicit_mu) < std::max(1e-12, 1e-5 * mu));
  }
  // sqrt(2) shell carries the frozen oracle value
  bool found = false;
  for (const auto& [z, mu] : seq)
    if (std::fabs(st.block(std::size_t(z)).lambda - std::sqrt(2.0)) < 1e-12) {
      CHECK(std::fabs(mu - kSinT) < 1e-12);
      found = true;
    }
  CHECK(found);
  const auto ref = reference_state(torus(3.0));
  for (const auto& [z, mu] : sin_theta_sequence(ref)) CHECK(mu == 0.0);
}

TEST_CASE("hadamard series on the reference state is identically zero") {
  const FPState ref = reference_state(torus(5.0));
  for (int p : {0, 2, 6}) {
    const SeriesReport rep = hadamard_series(ref, p);
    CHECK(rep.verdict == Verdict::converged);
    CHECK(rep.partial_sums.back().second == 0.0);
    CHECK(rep.tail_estimate == 0.0);
  }
}

TEST_CASE("softened state converges") {
  const FPState& st = softened_state();
  for (int p : {0, 2, 6}) {
    const SeriesReport rep = hadamard_series(st, p);
    CHECK(rep.verdict == Verdict::converged);
    double prev = 0.0;
    for (const auto& [n, s] : rep.partial_sums) {
      CHECK(s >= prev);  // nonnegative terms: monotone partial sums
      prev = s;
    }
    CHECK(rep.last_decade_change < 1e-8);
    CHECK(rep.tail_estimate < 1e-8);
  }
}

TEST_CASE("unsoftened generic slab diverges at p=2") {
  const FPState st = unsoftened_state(12.0);
  const SeriesReport rep = hadamard_series(st, 2);
  CHECK(rep.verdict == Verdict::diverging);
  CHECK(rep.window_max > 0.1);
}

TEST_CASE("series exponent monotonicity for softened states") {
  const FPState& st = softened_state();
  const SeriesReport high = hadamard_series(st, 6);
  const SeriesReport low = hadamard_series(st, 0);
  if (high.verdict == Verdict::converged) CHECK(low.verdict == Verdict::converged);
}

TEST_CASE("insufficient modes is reported") {
  const auto sp = std::make_shared<Spectrum>(synthetic_spectrum(1.0, {1.0, 2.0}));
  const FPState ref = reference_state(sp);
  CHECK_THROWS_AS(hadamard_series(ref, 0), InsufficientModes);
  DiagnosticOptions opt;
  opt.min_modes = 1;
  CHECK_NOTHROW(hadamard_series(ref, 0, opt));
}

TEST_CASE("k-operator spectrum") {
  const FPState st = unsoftened_state(3.0);
  CHECK_THROWS_AS(k_operator_spectrum(st, -2.0, 0.5), InvalidSubslab);
  CHECK_THROWS_AS(k_operator_spectrum(st, 0.5, 0.2), InvalidSubslab);
  const KSpectrumReport half = k_operator_spectrum(st, -0.5, 0.5);
  REQUIRE(half.eigenvalues.size() == st.num_modes());
  for (const auto& [z, v] : half.eigenvalues)
    CHECK(std::fabs(v - std::fabs(std::sin(st.block(std::size_t(z)).theta))) < 1e-15);
  // magnitudes scale linearly in (b' - a')
  const KSpectrumReport narrow = k_operator_spectrum(st, -0.25, 0.25);
  for (std::size_t i = 0; i < half.eigenvalues.size(); ++i)
    CHECK(std::fabs(narrow.eigenvalues[i].second - 0.5 * half.eigenvalues[i].second) < 1e-15);
  // theta == 0 state has spectrum {0}
  const FPState ref = reference_state(torus(3.0), SlabConfig{-1, 1});
  const KSpectrumReport flat = k_operator_spectrum(ref, -0.5, 0.5);
  for (const auto& [z, v] : flat.eigenvalues) CHECK(v == 0.0);
  CHECK(flat.compact);
}

TEST_CASE("halfwidth scan: resonance vs generic") {
  // arithmetic spectrum lambda_z = z pi/(2 b0): sin(2 b0 lambda_z) = 0 exactly
  const double b0 = 1.0;
  std::vector<double> branch;
  for (int z = 1; z <= 200; ++z) branch.push_back(z * M_PI / (2 * b0));
  const Spectrum sp = synthetic_spectrum(branch.front(), branch);

  const ScanReport res = scan_slab_halfwidths(sp, {b0}, 50);
  CHECK_FALSE(res.rows[0].flagged);
  CHECK(res.rows[0].max < 1e-10);  // zeros up to sine roundoff

  const ScanReport gen = scan_slab_halfwidths(sp, {b0 * std::sqrt(2.0)}, 50);
  CHECK(gen.rows[0].flagged);
  CHECK(gen.rows[0].max > 0.9);

  CHECK_THROWS_AS(scan_slab_halfwidths(sp, {}, 50), InvalidParams);
  CHECK_THROWS_AS(scan_slab_halfwidths(sp, {2.0, 1.0}, 50), NotSorted);
}

TEST_CASE("scan flags nearly every halfwidth on the torus") {
  const auto sp = torus(6.0);
  std::vector<double> grid;
  for (int i = 0; i < 60; ++i) grid.push_back(0.3 + i * (2.7 / 60.0));
  const ScanReport rep =
      scan_slab_halfwidths(*sp, grid, std::max<std::size_t>(1, sp->size() / 4));
  CHECK(rep.flagged_fraction > 0.95);
}

TEST_CASE("fluctuation series") {
  const auto sp = std::make_shared<Spectrum>(synthetic_spectrum(1.0, {std::sqrt(2.0)}));
  const auto f = std::make_shared<SofteningFunction>(SofteningFunction::indicator(-1, 1));
  const FPState st = build_fp_state(sp, SlabConfig{-1, 1}, f, 2.0);
  DiagnosticOptions opt;
  opt.min_modes = 1;
  const SeriesReport rep = fluctuation_squared(st, 1, complexd(1.0, 0.0), opt);
  CHECK(std::fabs(rep.partial_sums.back().second - kFlucTerm) < 1e-14);
  // |hhat0|^2 scales the series exactly
  const SeriesReport scaled = fluctuation_squared(st, 1, complexd(0.0, 2.0), opt);
  CHECK(std::fabs(scaled.partial_sums.back().second - 4 * kFlucTerm) < 1e-13);
  CHECK_THROWS_AS(fluctuation_squared(st, 0, complexd(1.0, 0.0), opt), InvalidParams);

  const FPState ref = reference_state(torus(5.0));
  CHECK(fluctuation_squared(ref, 1, complexd(1.0, 0.0)).partial_sums.back().second == 0.0);

  for (int pp : {1, 2}) {
    const SeriesReport soft = fluctuation_squared(softened_state(), pp, complexd(1.0, 0.0));
    CHECK(soft.verdict == Verdict::converged);
  }
}

TEST_CASE("bridge inequality and verdict agreement") {
  for (const FPState& st : {softened_state(), unsoftened_state(12.0)}) {
    const BridgeReport rep = fluctuation_implies_hadamard_check(st);
    CHECK(rep.bridge_ok);
    CHECK(rep.verdicts_agree);
    CHECK(rep.ok);
  }
  // golden mode: 2 sin^2 t <= sin^2 2t <= 4 sin^2 t with explicit numbers
  const double s2 = 0.0029397500601161935, d = 0.011724431718800961;
  CHECK(2 * s2 <= d);
  CHECK(d <= 4 * s2);
}
