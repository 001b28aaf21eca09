#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "fpslab/spectrum.hpp"

using namespace fpslab;

namespace {
ModelParams unit_torus(double m = 1.0) {
  ModelParams p;
  p.mass = m;
  p.L = {2 * M_PI, 2 * M_PI, 2 * M_PI};
  return p;
}
}  // namespace

TEST_CASE("torus spectrum at k=0 only") {
  const Spectrum s = torus_spectrum(unit_torus(), 1.2);
  REQUIRE(s.size() == 2);
  CHECK(s.lambda(1) == 1.0);
  CHECK(s.lambda(2) == 1.0);
  CHECK(s.lambda(-1) == -1.0);
  CHECK(s.lambda(-2) == -1.0);
  CHECK(counting_function(s, 1.2) == 4);
}

TEST_CASE("torus spectrum first shell") {
  const Spectrum s = torus_spectrum(unit_torus(), 1.5);
  REQUIRE(s.size() == 14);  // 2 at k=0 plus 12 at |k|=1
  CHECK(s.lambda(1) == 1.0);
  CHECK(s.lambda(2) == 1.0);
  for (long z = 3; z <= 14; ++z) CHECK(s.lambda(z) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("torus spectrum respects the mass gap") {
  CHECK_THROWS_AS(torus_spectrum(unit_torus(), 0.5), EmptySpectrum);
  ModelParams bad = unit_torus();
  bad.mass = -1;
  CHECK_THROWS_AS(torus_spectrum(bad, 2.0), InvalidParams);
  bad = unit_torus();
  bad.L[1] = 0;
  CHECK_THROWS_AS(torus_spectrum(bad, 2.0), InvalidParams);
}

TEST_CASE("torus ordering is deterministic and mirrored") {
  const Spectrum s = torus_spectrum(unit_torus(), 5.0);
  double prev = 0.0;
  for (std::size_t z = 1; z <= s.size(); ++z) {
    CHECK(s.lambda(long(z)) >= prev);
    CHECK(s.lambda(-long(z)) == -s.lambda(long(z)));
    CHECK(s.lambda(long(z)) >= s.mass());
    prev = s.lambda(long(z));
  }
  const Spectrum s2 = torus_spectrum(unit_torus(), 5.0);
  for (std::size_t z = 1; z <= s.size(); ++z) {
    CHECK(s.entry(z).k == s2.entry(z).k);
    CHECK(s.entry(z).spin == s2.entry(z).spin);
  }
}

TEST_CASE("synthetic spectrum construction") {
  const Spectrum s = synthetic_spectrum(1.0, {1, 2, 3});
  CHECK(s.lambda(2) == 2.0);
  CHECK(s.lambda(-3) == -3.0);
  CHECK_THROWS_AS(synthetic_spectrum(1.0, {0.5}), MassGapViolation);
  CHECK_THROWS_AS(synthetic_spectrum(1.0, {2, 1.5}), NotSorted);
  const Spectrum deg = synthetic_spectrum(2.0, {2, 2});
  CHECK(deg.lambda(1) == deg.lambda(2));
}

TEST_CASE("index lookups are guarded") {
  const Spectrum s = synthetic_spectrum(1.0, {1, 2});
  CHECK_THROWS_AS(s.lambda(0), IndexOutOfRange);
  CHECK_THROWS_AS(s.lambda(3), IndexOutOfRange);
  CHECK_THROWS_AS(s.entry(0), IndexOutOfRange);
}

TEST_CASE("eigenspinor residuals and normalization") {
  const ModelParams p = unit_torus();
  const Spectrum s = torus_spectrum(p, 3.0);
  const EigenspinorBasis basis = build_eigenspinor_basis(p, s);
  for (std::size_t i = 1; i <= s.size(); ++i) {
    for (long z : {long(i), -long(i)}) {
      const Eigenspinor& e = basis.at(z);
      const Matrix4cd h = gamma::spatial_symbol(p.physical_momentum(e.k), p.mass);
      CHECK((h * e.u - e.lambda * e.u).norm() < 1e-10);
      CHECK(std::fabs(e.u.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("partner at k=0 is gamma5 chi") {
  const ModelParams p = unit_torus();
  const Spectrum s = torus_spectrum(p, 1.2);
  const EigenspinorBasis basis = build_eigenspinor_basis(p, s);
  const Eigenspinor& chi = basis.at(1);
  // gamma^0 chi = chi exactly at the mass-shell bottom
  CHECK((gamma::g0() * chi.u - chi.u).norm() == 0.0);
  const Eigenspinor& part = basis.at(-1);
  CHECK((part.u - gamma::g5() * chi.u).norm() == 0.0);
  CHECK(part.lambda == -1.0);
}

TEST_CASE("partner matches independent eigenspace projection") {
  const ModelParams p = unit_torus();
  const Spectrum s = torus_spectrum(p, 1.5);
  const EigenspinorBasis basis = build_eigenspinor_basis(p, s);
  // find a mode with k = (1,0,0)
  for (std::size_t i = 1; i <= s.size(); ++i) {
    const SpectrumEntry& e = s.entry(i);
    if (e.k != std::array<std::int16_t, 3>{1, 0, 0}) continue;
    const Eigenspinor& chi = basis.at(long(i));
    const Eigenspinor& part = basis.at(-long(i));
    const Matrix4cd h = gamma::spatial_symbol(p.physical_momentum(e.k), p.mass);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
    // project gamma^0 chi onto the -lambda eigenspace and normalize
    Vector4cd proj = Vector4cd::Zero();
    for (int j = 0; j < 4; ++j) {
      if (std::fabs(es.eigenvalues()[j] + e.lambda) > 1e-12) continue;
      const Vector4cd v = es.eigenvectors().col(j);
      proj += v * (v.adjoint() * (gamma::g0() * chi.u))(0, 0);
    }
    proj.normalize();
    // compare up to the overall phase fixed by the construction
    const complexd phase = (proj.adjoint() * part.u)(0, 0);
    CHECK(std::fabs(std::abs(phase) - 1.0) < 1e-12);
    CHECK((part.u - phase * proj).norm() < 1e-12);
  }
}

TEST_CASE("pairing table") {
  const ModelParams p = unit_torus();
  const Spectrum s = torus_spectrum(p, 3.0);
  const EigenspinorBasis basis = build_eigenspinor_basis(p, s);
  const double m = p.mass;
  for (long w = 1; w <= long(s.size()); ++w) {
    const double lam = s.lambda(w);
    CHECK(std::abs(pairing_value(basis, w, w) - m / lam) < 1e-10);
    CHECK(std::abs(pairing_value(basis, -w, -w) + m / lam) < 1e-10);
    CHECK(std::abs(pairing_value(basis, w, -w) - std::sqrt(1 - m * m / (lam * lam))) < 1e-10);
  }
  // distinct momentum shells pair to zero
  long w100 = 0, w000 = 0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    if (s.entry(i).k == std::array<std::int16_t, 3>{0, 0, 0} && !w000) w000 = long(i);
    if (s.entry(i).k == std::array<std::int16_t, 3>{1, 0, 0} && !w100) w100 = long(i);
  }
  REQUIRE(w000 > 0);
  REQUIRE(w100 > 0);
  CHECK(pairing_value(basis, w000, w100) == complexd(0.0, 0.0));
  CHECK_THROWS_AS(pairing_value(basis, 0, 1), IndexOutOfRange);
}

TEST_CASE("counting function and growth bound") {
  const Spectrum s = torus_spectrum(unit_torus(), 20.0);
  CHECK(counting_function(s, 0.5) == 0);
  CHECK_THROWS_AS(counting_function(s, -1.0), InvalidParams);
  // inclusive tie convention at a stored eigenvalue
  CHECK(counting_function(s, 1.0) == 4);
  std::size_t prev = 0;
  double ratio_max = 0.0;
  for (double L : {5.0, 10.0, 20.0}) {
    const std::size_t d = counting_function(s, L);
    CHECK(d >= prev);
    prev = d;
    ratio_max = std::max(ratio_max, double(d) / std::pow(L, 3));
  }
  // flat-torus Weyl law: d(L)/L^3 bounded, so d(L) <= c L^{21/2} with margin
  CHECK(ratio_max < 20.0);  // 4 states per lattice point: constant ~ (16/3) pi
  const double c = ratio_max;  // valid constant for L >= 5
  for (double L : {5.0, 10.0, 20.0})
    CHECK(double(counting_function(s, L)) <= c * std::pow(L, 10.5));
  // dual form: |lambda_z| >= k |z|^{2/21} for the fitted constant
  const double k = std::pow(1.0 / c, 2.0 / 21.0);
  for (std::size_t z = 1; z <= s.size(); z += 997)
    CHECK(s.lambda(long(z)) >= 0.99 * k * std::pow(double(2 * z), 2.0 / 21.0));
}

TEST_CASE("serialization roundtrip") {
  const Spectrum s = torus_spectrum(unit_torus(), 2.0);
  std::stringstream ss;
  s.save(ss);
  const Spectrum r = Spectrum::load(ss);
  REQUIRE(r.size() == s.size());
  CHECK(r.mass() == s.mass());
  for (std::size_t z = 1; z <= s.size(); ++z) CHECK(r.lambda(long(z)) == s.lambda(long(z)));
  CHECK_FALSE(r.from_torus());
}
