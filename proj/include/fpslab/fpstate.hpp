#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <memory>
#include <vector>

#include "fpslab/errors.hpp"
#include "fpslab/softening.hpp"
#include "fpslab/spectrum.hpp"

namespace fpslab {

// Per-mode data of the 2x2 block A_{f,z} in the (kappa+, kappa-) basis.
// sin2theta is stored as a magnitude; phi carries the off-diagonal phase.
struct ModeBlock {
  long z = 0;  // positive index, 0 for standalone blocks
  double lambda = 0.0;
  double xi = 0.0;
  double theta = 0.0;  // in [0, pi/2]; < pi/4 whenever fhat(0) > 0
  double phi = 0.0;    // in [0, 2pi)
  double cos2theta = 1.0;
  double sin2theta = 0.0;  // >= 0
  Eigen::Matrix2cd raw = Eigen::Matrix2cd::Zero();

  // sin^2 theta without the (1 - cos2theta)/2 cancellation
  double sin_sq() const {
    if (cos2theta > -0.5) return sin2theta * sin2theta / (2.0 * (1.0 + cos2theta));
    return 0.5 * (1.0 - cos2theta);
  }
  double cos_sq() const { return 1.0 - sin_sq(); }
  double sin_cos() const { return 0.5 * sin2theta; }
  double sin_theta() const { return std::sin(theta); }
};

struct ProjectorBlock {
  long z = 0;
  Eigen::Matrix2cd Q;
};

// Coefficients of a mode-space vector against (kappa+_z, kappa-_z).
struct ModeVector {
  long z = 0;
  complexd alpha{0.0, 0.0};
  complexd beta{0.0, 0.0};
  double norm() const { return std::sqrt(std::norm(alpha) + std::norm(beta)); }
};

ModeBlock mode_block(const SofteningFunction& f, double lambda, double m,
                     bool allow_signed = false);

// Eigenvectors of A_{f,z}: kappa+_f for +xi, kappa-_f for -xi.
std::pair<ModeVector, ModeVector> diagonalize_block(const ModeBlock& block);

ProjectorBlock fp_projector_block(const ModeBlock& block);

// Cospinor-side block under the doubling relation; the identity
// Q + conj(doubling_partner(Q)) == I is the testable block form of P + +P+ = 1.
Eigen::Matrix2cd doubling_partner(const Eigen::Matrix2cd& Q);

class FPState {
 public:
  enum class Kind { fp, reference, ceiling };

  static FPState build(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                       std::shared_ptr<const SofteningFunction> f, double cutoff,
                       bool allow_signed = false);
  static FPState reference(std::shared_ptr<const Spectrum> spectrum,
                           SlabConfig slab = SlabConfig{},
                           double cutoff = std::numeric_limits<double>::infinity());
  static FPState ceiling(std::shared_ptr<const Spectrum> spectrum,
                         SlabConfig slab = SlabConfig{},
                         double cutoff = std::numeric_limits<double>::infinity());

  Kind kind() const { return kind_; }
  bool anti_hadamard() const { return kind_ == Kind::ceiling || allow_signed_; }
  double cutoff() const { return cutoff_; }
  const SlabConfig& slab() const { return slab_; }
  const Spectrum& spectrum() const { return *spectrum_; }
  std::shared_ptr<const Spectrum> spectrum_ptr() const { return spectrum_; }
  const SofteningFunction* softening() const { return f_.get(); }

  std::size_t num_modes() const { return shell_of_.size(); }
  std::size_t num_shells() const { return shells_.size(); }
  const ModeBlock& block(std::size_t z) const;  // z in [1, num_modes()]
  Eigen::Matrix2cd projector(std::size_t z) const;

  void dump(std::ostream& os) const;
  static FPState load(std::istream& is);

 private:
  FPState() = default;
  static FPState trivial(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                         double cutoff, Kind kind);

  Kind kind_ = Kind::fp;
  bool allow_signed_ = false;
  double cutoff_ = 0.0;
  SlabConfig slab_;
  std::shared_ptr<const Spectrum> spectrum_;
  std::shared_ptr<const SofteningFunction> f_;
  std::vector<ModeBlock> shells_;        // one block per distinct eigenvalue
  std::vector<std::uint32_t> shell_of_;  // mode z -> shell index
};

FPState build_fp_state(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                       std::shared_ptr<const SofteningFunction> f, double cutoff,
                       bool allow_signed = false);
FPState reference_state(std::shared_ptr<const Spectrum> spectrum,
                        SlabConfig slab = SlabConfig{},
                        double cutoff = std::numeric_limits<double>::infinity());
FPState ceiling_state(std::shared_ptr<const Spectrum> spectrum,
                      SlabConfig slab = SlabConfig{},
                      double cutoff = std::numeric_limits<double>::infinity());

// Per-mode Q_{f,z} - Q_z; index 0 of the result is z = 1.
std::vector<Eigen::Matrix2cd> projector_difference(const FPState& state, const FPState& ref);

}  // namespace fpslab
