#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fpslab/errors.hpp"
#include "fpslab/gamma.hpp"

namespace fpslab {

struct ModelParams {
  double mass = 1.0;
  std::array<double, 3> L = {2 * 3.14159265358979323846, 2 * 3.14159265358979323846,
                             2 * 3.14159265358979323846};

  void validate() const;  // throws InvalidParams
  double volume() const { return L[0] * L[1] * L[2]; }
  Eigen::Vector3d physical_momentum(const std::array<std::int16_t, 3>& k) const;
};

// One positive-branch entry; the negative branch is implied by mirroring.
struct SpectrumEntry {
  double lambda;                   // > 0, >= mass
  std::array<std::int16_t, 3> k;   // lattice index (all zero for synthetic spectra)
  std::uint8_t spin;               // 0 or 1
};

// Symmetric eigenvalue list of the spatial Dirac operator, indexed by
// z in Z\{0} with lambda(-z) == -lambda(z).  Positive branch is stored;
// entries are sorted by (lambda, lexicographic k, spin) so indices are
// deterministic across runs.
class Spectrum {
 public:
  static Spectrum torus(const ModelParams& params, double cutoff);
  static Spectrum synthetic(double mass, const std::vector<double>& positive_branch);

  double mass() const { return mass_; }
  std::size_t size() const { return entries_.size(); }  // positive-branch count

  // z in Z\{0}, |z| <= size()
  double lambda(long z) const;
  const SpectrumEntry& entry(std::size_t zpos) const;  // zpos in [1, size()]

  bool from_torus() const { return from_torus_; }
  const ModelParams& params() const;  // valid only for torus spectra

  // positive-branch entries with lambda <= Lambda (inclusive tie convention)
  std::size_t count_leq(double Lambda) const;

  void save(std::ostream& os) const;
  static Spectrum load(std::istream& is);

 private:
  Spectrum() = default;
  double mass_ = 0.0;
  bool from_torus_ = false;
  ModelParams params_;
  std::vector<SpectrumEntry> entries_;
};

Spectrum torus_spectrum(const ModelParams& params, double cutoff);
Spectrum synthetic_spectrum(double mass, const std::vector<double>& positive_branch);

// d(Lambda) = #{z : |lambda_z| <= Lambda}, counting both branches.
std::size_t counting_function(const Spectrum& s, double Lambda);

struct Eigenspinor {
  std::array<std::int16_t, 3> k;  // lattice index
  Vector4cd u;                    // spinor amplitude, unit norm
  double lambda;
};

// Plane-wave eigenspinor basis chi_z(x) = e^{i k.x} u_z / sqrt(V).
// Negative-branch members are the gamma^0 partners of the positive ones.
class EigenspinorBasis {
 public:
  const Eigenspinor& at(long z) const;  // z in Z\{0}
  std::size_t size() const { return pos_.size(); }
  const ModelParams& params() const { return params_; }

 private:
  friend EigenspinorBasis build_eigenspinor_basis(const ModelParams&, const Spectrum&);
  ModelParams params_;
  std::vector<Eigenspinor> pos_;
  std::vector<Eigenspinor> neg_;
};

EigenspinorBasis build_eigenspinor_basis(const ModelParams& params, const Spectrum& spectrum);

// <chi_w | gamma^0 chi_z>; exact zero across distinct momenta.
complexd pairing_value(const EigenspinorBasis& basis, long w, long z);

}  // namespace fpslab
