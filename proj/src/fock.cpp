#include "fpslab/fock.hpp"

#include <bit>
#include <cmath>

namespace fpslab {

namespace {

// Jordan-Wigner annihilator on slot j of `slots` fermionic modes.
SpMat jw_annihilator(int j, int slots) {
  const std::size_t dim = std::size_t(1) << slots;
  std::vector<Eigen::Triplet<complexd>> trips;
  trips.reserve(dim / 2);
  const std::size_t bit = std::size_t(1) << j;
  const std::size_t below = bit - 1;
  for (std::size_t s = 0; s < dim; ++s) {
    if (!(s & bit)) continue;
    const double sign = (std::popcount(s & below) % 2) ? -1.0 : 1.0;
    trips.emplace_back(int(s ^ bit), int(s), sign);
  }
  const int nd = int(dim);
  SpMat m(nd, nd);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double max_abs(const SpMat& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

SpMat anticomm(const SpMat& a, const SpMat& b) { return SpMat(a * b) + SpMat(b * a); }

}  // namespace

FockOracle FockOracle::build(const FPState& state, const std::vector<std::size_t>& modes) {
  if (modes.empty()) throw InvalidParams("oracle needs at least one mode");
  if (modes.size() > 6) throw TooManyModes("oracle mode count capped at 6");
  FockOracle o;
  o.n_ = int(modes.size());
  const int slots = 2 * o.n_;
  for (int i = 0; i < o.n_; ++i) {
    o.modes_.push_back(state.block(modes[i]));  // throws IndexOutOfRange
    o.b_.push_back(jw_annihilator(i, slots));
    o.d_.push_back(jw_annihilator(o.n_ + i, slots));
    o.bdag_.push_back(SpMat(o.b_.back().adjoint()));
    o.ddag_.push_back(SpMat(o.d_.back().adjoint()));
  }
  o.vacuum_ = Eigen::VectorXcd::Zero(long(o.dim()));
  o.vacuum_[0] = 1.0;
  return o;
}

double FockOracle::car_residual() const {
  std::vector<const SpMat*> ann;
  for (const auto& m : b_) ann.push_back(&m);
  for (const auto& m : d_) ann.push_back(&m);
  const int nd = int(dim());
  SpMat id(nd, nd);
  id.setIdentity();
  double worst = 0.0;
  for (std::size_t i = 0; i < ann.size(); ++i)
    for (std::size_t j = 0; j < ann.size(); ++j) {
      worst = std::max(worst, max_abs(anticomm(*ann[i], *ann[j])));
      SpMat mixed = anticomm(*ann[i], SpMat(ann[j]->adjoint()));
      if (i == j) mixed = SpMat(mixed - id);
      worst = std::max(worst, max_abs(mixed));
    }
  return worst;
}

std::pair<complexd, complexd> FockOracle::rotate(int i, complexd alpha, complexd beta) const {
  const ModeBlock& m = modes_[i];
  const double c = std::cos(m.theta);
  const double s = std::sin(m.theta);
  const complexd e = std::exp(complexd(0.0, m.phi));
  return {c * alpha + e * s * beta, -std::conj(e) * s * alpha + c * beta};
}

SpMat FockOracle::field(const std::vector<std::pair<complexd, complexd>>& coeffs) const {
  if (coeffs.size() != std::size_t(n_)) throw ModeMismatch("coefficient count != oracle modes");
  const int nd = int(dim());
  SpMat f(nd, nd);
  for (int i = 0; i < n_; ++i) {
    auto [ap, am] = rotate(i, coeffs[i].first, coeffs[i].second);
    f = SpMat(f + SpMat(ap * bdag_[i])) ;
    f = SpMat(f + SpMat(am * d_[i]));
  }
  return f;
}

double two_point_check(const FockOracle& oracle, const FPState& state,
                       const std::vector<std::vector<std::pair<complexd, complexd>>>& smearings) {
  const int n = oracle.n_modes();
  for (const auto& s : smearings)
    if (s.size() != std::size_t(n)) throw ModeMismatch("smearing does not match oracle modes");

  // mode z of the oracle corresponds to state mode oracle.mode(i).z is not
  // retained; the block data attached at build time is authoritative.
  std::vector<Eigen::Matrix2cd> q;
  for (int i = 0; i < n; ++i) {
    const ModeBlock& m = oracle.mode(i);
    q.push_back(fp_projector_block(m).Q);
  }
  (void)state;

  double worst = 0.0;
  std::vector<Eigen::VectorXcd> fdag_omega;
  std::vector<SpMat> fields;
  for (const auto& s : smearings) {
    fields.push_back(oracle.field(s));
    fdag_omega.push_back(SpMat(fields.back().adjoint()) * oracle.vacuum());
  }
  for (std::size_t i = 0; i < smearings.size(); ++i) {
    for (std::size_t j = 0; j < smearings.size(); ++j) {
      // <O| F(psi_j)^dag F(psi_i) |O> vs <psi_j, P psi_i>
      const Eigen::VectorXcd fi = fields[i] * oracle.vacuum();
      const Eigen::VectorXcd fj = fields[j] * oracle.vacuum();
      const complexd v1 = fj.dot(fi);  // conj-linear in first arg
      complexd block1 = 0.0, block2 = 0.0, pairing = 0.0;
      for (int m = 0; m < n; ++m) {
        Eigen::Vector2cd pi(smearings[i][m].first, smearings[i][m].second);
        Eigen::Vector2cd pj(smearings[j][m].first, smearings[j][m].second);
        block1 += (pj.adjoint() * q[m] * pi)(0, 0);
        block2 += (pj.adjoint() * (Eigen::Matrix2cd::Identity() - q[m]) * pi)(0, 0);
        pairing += (pj.adjoint() * pi)(0, 0);
      }
      worst = std::max(worst, std::abs(v1 - block1));

      // <O| F(psi_i) F(psi_j)^dag |O> vs <psi_j, (1-P) psi_i>
      const complexd v2 = fdag_omega[i].dot(fdag_omega[j]);
      worst = std::max(worst, std::abs(v2 - block2));

      // CAR pairing: {F(psi_i), F(psi_j)^dag} = <psi_j, psi_i> 1
      const SpMat fjd(fields[j].adjoint());
      const SpMat car = anticomm(fields[i], fjd);
      const int nd = int(oracle.dim());
      SpMat id(nd, nd);
      id.setIdentity();
      worst = std::max(worst, max_abs(SpMat(car - SpMat(pairing * id))));
    }
  }
  return worst;
}

PurityGaugeReport purity_gauge_check(const FockOracle& oracle, const FPState& state,
                                     const std::vector<double>& alphas) {
  PurityGaugeReport rep;
  for (int i = 0; i < oracle.n_modes(); ++i) {
    const Eigen::Matrix2cd Q = fp_projector_block(oracle.mode(i)).Q;
    rep.projector_residual = std::max(rep.projector_residual, (Q * Q - Q).norm());
    rep.projector_residual =
        std::max(rep.projector_residual, (Q - Q.adjoint()).norm());
    rep.projector_residual =
        std::max(rep.projector_residual, std::abs(Q.trace() - complexd(1.0, 0.0)));
    const Eigen::Matrix2cd dd =
        Q + doubling_partner(Q).conjugate() - Eigen::Matrix2cd::Identity();
    rep.doubling_residual = std::max(rep.doubling_residual, dd.norm());
  }

  // gauge rotation b -> e^{ia} b, d -> e^{-ia} d transports the smeared field
  // to e^{-ia} F; all two-point matrix elements must be unchanged.
  std::vector<std::vector<std::pair<complexd, complexd>>> basis_smearings;
  for (int m = 0; m < oracle.n_modes(); ++m)
    for (int comp = 0; comp < 2; ++comp) {
      std::vector<std::pair<complexd, complexd>> s(oracle.n_modes(), {0.0, 0.0});
      if (comp == 0)
        s[m].first = 1.0;
      else
        s[m].second = 1.0;
      basis_smearings.push_back(std::move(s));
    }
  std::vector<Eigen::VectorXcd> fdag_omega, f_omega;
  for (const auto& s : basis_smearings) {
    const SpMat f = oracle.field(s);
    fdag_omega.push_back(SpMat(f.adjoint()) * oracle.vacuum());
    f_omega.push_back(f * oracle.vacuum());
  }
  for (double alpha : alphas) {
    const complexd phase = std::exp(complexd(0.0, -alpha));
    for (std::size_t i = 0; i < basis_smearings.size(); ++i)
      for (std::size_t j = 0; j < basis_smearings.size(); ++j) {
        const complexd ref = fdag_omega[i].dot(fdag_omega[j]);
        const complexd rot =
            (std::conj(phase) * fdag_omega[i]).dot(std::conj(phase) * fdag_omega[j]);
        rep.gauge_deviation = std::max(rep.gauge_deviation, std::abs(rot - ref));
        // charged elements <O|F_i F_j O> pick up e^{-2ia}; invariance forces 0
        rep.gauge_deviation =
            std::max(rep.gauge_deviation, std::abs(fdag_omega[i].dot(f_omega[j])));
      }
  }

  const double tr = oracle.vacuum().squaredNorm();
  rep.purity_deviation = std::abs(tr - 1.0) + std::abs(tr * tr - 1.0);
  (void)state;
  return rep;
}

double energy_fluctuation_oracle(const FockOracle& oracle, const FPState& state, int p) {
  if (p < 1) throw InvalidParams("fluctuation order p must be >= 1");
  (void)state;
  const int nd = int(oracle.dim());
  SpMat R(nd, nd);
  for (int i = 0; i < oracle.n_modes(); ++i) {
    const ModeBlock& m = oracle.mode(i);
    const double imd = ((p % 2) ? 1.0 : -1.0) * std::pow(m.lambda, 2 * p - 1);
    const double gpp = imd * m.cos2theta;
    const complexd gpm = -imd * std::exp(complexd(0.0, m.phi)) * m.sin2theta;
    R = SpMat(R + SpMat(gpp * SpMat(oracle.bdag(i) * oracle.b(i))));
    R = SpMat(R + SpMat(gpm * SpMat(oracle.bdag(i) * oracle.ddag(i))));
    R = SpMat(R + SpMat(std::conj(gpm) * SpMat(oracle.d(i) * oracle.b(i))));
    R = SpMat(R + SpMat(gpp * SpMat(oracle.ddag(i) * oracle.d(i))));
  }
  const Eigen::VectorXcd r_omega = R * oracle.vacuum();
  return r_omega.squaredNorm();
}

}  // namespace fpslab
