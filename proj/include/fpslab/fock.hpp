#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "fpslab/fpstate.hpp"

namespace fpslab {

using SpMat = Eigen::SparseMatrix<complexd>;

// Finite-mode fermionic Fock space for modes [b_1..b_n, d_1..d_n] on
// dimension 4^n (n <= 6), with the FP-state mode data attached.
class FockOracle {
 public:
  static FockOracle build(const FPState& state, const std::vector<std::size_t>& modes);

  int n_modes() const { return n_; }
  std::size_t dim() const { return std::size_t(1) << (2 * n_); }
  const SpMat& b(int i) const { return b_[i]; }
  const SpMat& d(int i) const { return d_[i]; }
  const SpMat& bdag(int i) const { return bdag_[i]; }
  const SpMat& ddag(int i) const { return ddag_[i]; }
  const Eigen::VectorXcd& vacuum() const { return vacuum_; }
  const ModeBlock& mode(int i) const { return modes_[i]; }

  // max norm over all anticommutator identities on the 2n ladder operators
  double car_residual() const;

  // F(psi) = sum_z a+_z b^dag_z + a-_z d_z for coefficients (alpha, beta)_z
  // against the reference pair (kappa+_z, kappa-_z); the Bogoliubov rotation
  // to (kappa+-_{f,z}) is applied internally.
  SpMat field(const std::vector<std::pair<complexd, complexd>>& coeffs) const;

  // rotated coefficients (a+, a-) for one mode
  std::pair<complexd, complexd> rotate(int i, complexd alpha, complexd beta) const;

 private:
  int n_ = 0;
  std::vector<SpMat> b_, d_, bdag_, ddag_;
  Eigen::VectorXcd vacuum_;
  std::vector<ModeBlock> modes_;
};

// Max deviation between oracle matrix elements and the block formula over the
// supplied smearing coefficient vectors (exhaustive pairs), including the CAR
// pairing of smeared fields.
double two_point_check(const FockOracle& oracle, const FPState& state,
                       const std::vector<std::vector<std::pair<complexd, complexd>>>& smearings);

struct PurityGaugeReport {
  double projector_residual = 0.0;  // max of ||Q^2-Q||, ||Q-Q*||, |tr Q - 1|
  double doubling_residual = 0.0;   // || Q + conj(doubling partner) - I ||
  double gauge_deviation = 0.0;     // two-point drift under b -> e^{ia} b, d -> e^{-ia} d
  double purity_deviation = 0.0;    // |tr rho - 1| + |tr rho^2 - 1| for rho = |O><O|
};
PurityGaugeReport purity_gauge_check(const FockOracle& oracle, const FPState& state,
                                     const std::vector<double>& alphas = {0.0, 1.0471975511965976,
                                                                          1.234});

// ||R Omega||^2 for the normal-ordered order-p density on the truncation
// (hhat(0) = 1); equals sum_w lambda_w^{4p-2} sin^2 2theta_{f,w} over the
// oracle's modes.
double energy_fluctuation_oracle(const FockOracle& oracle, const FPState& state, int p);

}  // namespace fpslab
