#include "fpslab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fpslab {

namespace {

constexpr double kTwoPi = 2 * 3.14159265358979323846;

bool entry_less(const SpectrumEntry& a, const SpectrumEntry& b) {
  if (a.lambda != b.lambda) return a.lambda < b.lambda;
  if (a.k != b.k) return a.k < b.k;
  return a.spin < b.spin;
}

// Positive-branch spinor of the symbol [[m, s.k], [s.k, -m]] at physical
// momentum kp: u = N((lambda+m) phi_s, (s.k) phi_s), N = 1/sqrt(2 lambda (lambda+m)).
Vector4cd positive_spinor(const Eigen::Vector3d& kp, double m, int spin, double lambda) {
  const complexd I(0.0, 1.0);
  Eigen::Matrix2cd sk;
  sk << kp[2], kp[0] - I * kp[1], kp[0] + I * kp[1], -kp[2];
  Eigen::Vector2cd phi = Eigen::Vector2cd::Zero();
  phi[spin] = 1.0;
  Vector4cd u;
  const double norm = 1.0 / std::sqrt(2.0 * lambda * (lambda + m));
  u.head<2>() = norm * (lambda + m) * phi;
  u.tail<2>() = norm * (sk * phi);
  return u;
}

}  // namespace

void ModelParams::validate() const {
  if (!(mass > 0)) throw InvalidParams("mass must be positive");
  for (double l : L)
    if (!(l > 0)) throw InvalidParams("torus side lengths must be positive");
}

Eigen::Vector3d ModelParams::physical_momentum(const std::array<std::int16_t, 3>& k) const {
  return {kTwoPi * k[0] / L[0], kTwoPi * k[1] / L[1], kTwoPi * k[2] / L[2]};
}

Spectrum Spectrum::torus(const ModelParams& params, double cutoff) {
  params.validate();
  if (cutoff < params.mass) throw EmptySpectrum("cutoff below the mass gap");

  const double m = params.mass;
  const double r2 = cutoff * cutoff - m * m;  // |k_phys|^2 bound
  std::array<long, 3> kmax;
  for (int i = 0; i < 3; ++i) {
    kmax[i] = static_cast<long>(std::floor(params.L[i] * std::sqrt(std::max(r2, 0.0)) / kTwoPi));
    if (kmax[i] > 32767) throw InvalidParams("cutoff too large for lattice index storage");
  }

  Spectrum s;
  s.mass_ = m;
  s.from_torus_ = true;
  s.params_ = params;
  for (long k1 = -kmax[0]; k1 <= kmax[0]; ++k1)
    for (long k2 = -kmax[1]; k2 <= kmax[1]; ++k2)
      for (long k3 = -kmax[2]; k3 <= kmax[2]; ++k3) {
        const std::array<std::int16_t, 3> k = {static_cast<std::int16_t>(k1),
                                               static_cast<std::int16_t>(k2),
                                               static_cast<std::int16_t>(k3)};
        const Eigen::Vector3d kp = params.physical_momentum(k);
        const double lambda = std::sqrt(m * m + kp.squaredNorm());
        if (lambda > cutoff) continue;
        s.entries_.push_back({lambda, k, 0});
        s.entries_.push_back({lambda, k, 1});
      }
  std::sort(s.entries_.begin(), s.entries_.end(), entry_less);
  if (s.entries_.empty()) throw EmptySpectrum("no eigenvalues below cutoff");
  return s;
}

Spectrum Spectrum::synthetic(double mass, const std::vector<double>& positive_branch) {
  if (!(mass > 0)) throw InvalidParams("mass must be positive");
  if (positive_branch.empty()) throw EmptySpectrum("positive branch is empty");
  Spectrum s;
  s.mass_ = mass;
  s.entries_.reserve(positive_branch.size());
  double prev = mass;
  for (double v : positive_branch) {
    if (v < mass) throw MassGapViolation("eigenvalue below the mass gap");
    if (v < prev) throw NotSorted("positive branch must be nondecreasing");
    prev = v;
    s.entries_.push_back({v, {0, 0, 0}, 0});
  }
  return s;
}

double Spectrum::lambda(long z) const {
  if (z == 0 || static_cast<std::size_t>(std::labs(z)) > entries_.size())
    throw IndexOutOfRange("spectrum index out of range");
  const double v = entries_[std::labs(z) - 1].lambda;
  return z > 0 ? v : -v;
}

const SpectrumEntry& Spectrum::entry(std::size_t zpos) const {
  if (zpos < 1 || zpos > entries_.size()) throw IndexOutOfRange("spectrum index out of range");
  return entries_[zpos - 1];
}

const ModelParams& Spectrum::params() const {
  if (!from_torus_) throw SpectrumMismatch("synthetic spectrum carries no model params");
  return params_;
}

std::size_t Spectrum::count_leq(double Lambda) const {
  SpectrumEntry probe{Lambda, {32767, 32767, 32767}, 255};
  auto it = std::upper_bound(entries_.begin(), entries_.end(), probe, entry_less);
  return static_cast<std::size_t>(it - entries_.begin());
}

void Spectrum::save(std::ostream& os) const {
  os.precision(17);
  os << "# mass=" << mass_ << "\n";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const SpectrumEntry& e = entries_[i];
    os << (i + 1) << " " << e.lambda << " ";
    if (from_torus_)
      os << "k=" << e.k[0] << "," << e.k[1] << "," << e.k[2] << ";s=" << int(e.spin);
    else
      os << "-";
    os << "\n";
  }
}

Spectrum Spectrum::load(std::istream& is) {
  double mass = 0.0;
  bool have_mass = false;
  std::vector<double> branch;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("mass=");
      if (pos != std::string::npos) {
        mass = std::stod(line.substr(pos + 5));
        have_mass = true;
      }
      continue;
    }
    std::istringstream ls(line);
    long z;
    double lambda;
    if (!(ls >> z >> lambda)) throw InvalidParams("malformed spectrum line: " + line);
    if (z != static_cast<long>(branch.size()) + 1)
      throw NotSorted("spectrum indices must run 1..N in order");
    branch.push_back(lambda);
  }
  if (!have_mass) throw InvalidParams("spectrum file lacks a mass header");
  return synthetic(mass, branch);
}

Spectrum torus_spectrum(const ModelParams& params, double cutoff) {
  return Spectrum::torus(params, cutoff);
}

Spectrum synthetic_spectrum(double mass, const std::vector<double>& positive_branch) {
  return Spectrum::synthetic(mass, positive_branch);
}

std::size_t counting_function(const Spectrum& s, double Lambda) {
  if (!(Lambda > 0)) throw InvalidParams("Lambda must be positive");
  return 2 * s.count_leq(Lambda);
}

const Eigenspinor& EigenspinorBasis::at(long z) const {
  if (z == 0 || static_cast<std::size_t>(std::labs(z)) > pos_.size())
    throw IndexOutOfRange("basis index out of range");
  return z > 0 ? pos_[z - 1] : neg_[-z - 1];
}

EigenspinorBasis build_eigenspinor_basis(const ModelParams& params, const Spectrum& spectrum) {
  params.validate();
  if (!spectrum.from_torus()) throw SpectrumMismatch("eigenspinor basis needs a torus spectrum");
  const ModelParams& sp = spectrum.params();
  if (sp.mass != params.mass || sp.L != params.L)
    throw SpectrumMismatch("spectrum was built from different model params");

  const double m = params.mass;
  EigenspinorBasis basis;
  basis.params_ = params;
  basis.pos_.reserve(spectrum.size());
  basis.neg_.reserve(spectrum.size());

  const Matrix4cd g0 = gamma::g0();
  const Matrix4cd g5 = gamma::g5();
  for (std::size_t i = 1; i <= spectrum.size(); ++i) {
    const SpectrumEntry& e = spectrum.entry(i);
    const Eigen::Vector3d kp = params.physical_momentum(e.k);
    const Vector4cd u = positive_spinor(kp, m, e.spin, e.lambda);
    basis.pos_.push_back({e.k, u, e.lambda});

    Vector4cd partner;
    if (e.lambda > m) {
      // eta = (1 - m^2/lambda^2)^{-1/2} (gamma^0 - m/lambda) chi
      const double ml = m / e.lambda;
      partner = (g0 * u - ml * u) / std::sqrt(1.0 - ml * ml);
    } else {
      // lambda == m: gamma^0 chi = chi, partner is gamma^5 chi
      partner = g5 * u;
    }
    basis.neg_.push_back({e.k, partner, -e.lambda});
  }
  return basis;
}

complexd pairing_value(const EigenspinorBasis& basis, long w, long z) {
  const Eigenspinor& ew = basis.at(w);
  const Eigenspinor& ez = basis.at(z);
  if (ew.k != ez.k) return 0.0;  // distinct Fourier modes integrate to zero
  return (ew.u.adjoint() * gamma::g0() * ez.u)(0, 0);
}

}  // namespace fpslab
