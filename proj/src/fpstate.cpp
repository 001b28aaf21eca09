#include "fpslab/fpstate.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace fpslab {

namespace {

constexpr double kTwoPi = 2 * 3.14159265358979323846;

ModeBlock block_from_angles(long z, double lambda, double xi, double theta, double phi) {
  ModeBlock b;
  b.z = z;
  b.lambda = lambda;
  b.xi = xi;
  b.theta = theta;
  b.phi = phi;
  b.cos2theta = std::cos(2 * theta);
  b.sin2theta = std::sin(2 * theta);
  const complexd off = xi * b.sin2theta * std::exp(complexd(0.0, phi));
  b.raw << xi * b.cos2theta, off, std::conj(off), -xi * b.cos2theta;
  return b;
}

}  // namespace

ModeBlock mode_block(const SofteningFunction& f, double lambda, double m, bool allow_signed) {
  if (!(m > 0)) throw InvalidParams("mass must be positive");
  if (lambda < m) throw BelowMassGap("mode eigenvalue below the mass gap");
  const double f0 = f.f0();
  if (f0 <= 0 && !allow_signed)
    throw InvalidParams("softening must have fhat(0) > 0 (signed f needs the experiment flag)");

  const double ml = m / lambda;
  const double r = lambda > m ? std::sqrt((1.0 - ml) * (1.0 + ml)) : 0.0;
  const complexd f2 = r > 0 ? f.fourier(2 * lambda) : complexd(0.0, 0.0);

  ModeBlock b;
  b.lambda = lambda;
  const double diag = f0 * ml;
  const complexd off = f2 * r;
  b.raw << diag, off, std::conj(off), -diag;
  b.xi = std::hypot(std::abs(off), diag);
  if (!(b.xi > 0)) throw InvalidParams("degenerate mode block: A_{f,z} vanishes");
  b.cos2theta = diag / b.xi;
  b.sin2theta = std::abs(off) / b.xi;
  b.theta = 0.5 * std::atan2(b.sin2theta, b.cos2theta);
  b.phi = b.sin2theta == 0.0 ? 0.0 : std::arg(f2);
  if (b.phi < 0) b.phi += kTwoPi;
  return b;
}

std::pair<ModeVector, ModeVector> diagonalize_block(const ModeBlock& block) {
  const double c = std::cos(block.theta);
  const double s = std::sin(block.theta);
  const complexd em = std::exp(complexd(0.0, -block.phi));
  ModeVector plus{block.z, c, em * s};
  ModeVector minus{block.z, -std::conj(em) * s, c};
  return {plus, minus};
}

ProjectorBlock fp_projector_block(const ModeBlock& block) {
  const double s2 = block.sin_sq();
  const complexd off = std::exp(complexd(0.0, block.phi)) * block.sin_cos();
  ProjectorBlock p;
  p.z = block.z;
  p.Q << 1.0 - s2, off, std::conj(off), s2;
  return p;
}

Eigen::Matrix2cd doubling_partner(const Eigen::Matrix2cd& Q) {
  return Eigen::Matrix2cd::Identity() - Q.conjugate();
}

FPState FPState::build(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                       std::shared_ptr<const SofteningFunction> f, double cutoff,
                       bool allow_signed) {
  if (!spectrum) throw InvalidParams("null spectrum");
  if (!f) throw InvalidParams("null softening function");
  slab.validate();
  const std::size_t n = spectrum->count_leq(cutoff);
  if (n == 0) throw EmptySpectrum("no eigenvalues within cutoff");

  FPState st;
  st.kind_ = Kind::fp;
  st.allow_signed_ = allow_signed;
  st.cutoff_ = cutoff;
  st.slab_ = slab;
  st.spectrum_ = std::move(spectrum);
  st.f_ = std::move(f);
  st.shell_of_.reserve(n);

  std::map<std::uint64_t, std::uint32_t> shell_index;
  for (std::size_t z = 1; z <= n; ++z) {
    const double lambda = st.spectrum_->lambda(static_cast<long>(z));
    const std::uint64_t key = std::bit_cast<std::uint64_t>(lambda);
    auto it = shell_index.find(key);
    if (it == shell_index.end()) {
      ModeBlock b = mode_block(*st.f_, lambda, st.spectrum_->mass(), allow_signed);
      b.z = static_cast<long>(z);  // first index in the shell
      it = shell_index.emplace(key, static_cast<std::uint32_t>(st.shells_.size())).first;
      st.shells_.push_back(b);
    }
    st.shell_of_.push_back(it->second);
  }
  return st;
}

FPState FPState::trivial(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                         double cutoff, Kind kind) {
  if (!spectrum) throw InvalidParams("null spectrum");
  slab.validate();
  const std::size_t n = spectrum->count_leq(cutoff);
  if (n == 0) throw EmptySpectrum("no eigenvalues within cutoff");

  FPState st;
  st.kind_ = kind;
  st.cutoff_ = cutoff;
  st.slab_ = slab;
  st.spectrum_ = std::move(spectrum);
  st.shell_of_.reserve(n);
  const double theta = kind == Kind::ceiling ? 0.5 * 3.14159265358979323846 : 0.0;
  std::map<std::uint64_t, std::uint32_t> shell_index;
  for (std::size_t z = 1; z <= n; ++z) {
    const double lambda = st.spectrum_->lambda(static_cast<long>(z));
    const std::uint64_t key = std::bit_cast<std::uint64_t>(lambda);
    auto it = shell_index.find(key);
    if (it == shell_index.end()) {
      ModeBlock b = block_from_angles(static_cast<long>(z), lambda, 1.0, theta, 0.0);
      if (kind == Kind::ceiling) {
        b.cos2theta = -1.0;  // exact, avoids cos(pi) roundoff
        b.sin2theta = 0.0;
        b.raw << -1.0, 0.0, 0.0, 1.0;
      }
      it = shell_index.emplace(key, static_cast<std::uint32_t>(st.shells_.size())).first;
      st.shells_.push_back(b);
    }
    st.shell_of_.push_back(it->second);
  }
  return st;
}

FPState FPState::reference(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                           double cutoff) {
  return trivial(std::move(spectrum), slab, cutoff, Kind::reference);
}

FPState FPState::ceiling(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                         double cutoff) {
  return trivial(std::move(spectrum), slab, cutoff, Kind::ceiling);
}

const ModeBlock& FPState::block(std::size_t z) const {
  if (z < 1 || z > shell_of_.size()) throw IndexOutOfRange("mode index out of range");
  return shells_[shell_of_[z - 1]];
}

Eigen::Matrix2cd FPState::projector(std::size_t z) const {
  const ModeBlock& b = block(z);
  if (kind_ == Kind::reference) {
    Eigen::Matrix2cd q;
    q << 1, 0, 0, 0;
    return q;
  }
  if (kind_ == Kind::ceiling) {
    Eigen::Matrix2cd q;
    q << 0, 0, 0, 1;
    return q;
  }
  return fp_projector_block(b).Q;
}

void FPState::dump(std::ostream& os) const {
  os.precision(17);
  os << "# fpstate v1\n";
  os << "# mass=" << spectrum_->mass() << "\n";
  os << "# slab=" << slab_.a << " " << slab_.b << "\n";
  os << "# cutoff=" << cutoff_ << "\n";
  os << "# kind="
     << (kind_ == Kind::fp ? "fp" : kind_ == Kind::reference ? "reference" : "ceiling") << "\n";
  if (f_) os << "# softening=" << f_->descriptor() << "\n";
  os << "# modes=" << shell_of_.size() << " shells=" << shells_.size() << "\n";
  os << "# columns: z lambda xi theta phi\n";
  for (std::size_t z = 1; z <= shell_of_.size(); ++z) {
    const ModeBlock& b = shells_[shell_of_[z - 1]];
    os << z << " " << b.lambda << " " << b.xi << " " << b.theta << " " << b.phi << "\n";
  }
}

FPState FPState::load(std::istream& is) {
  double mass = 0.0, cutoff = 0.0;
  SlabConfig slab;
  std::string kind_str = "fp", soften_desc;
  bool have_mass = false;
  std::vector<double> lambdas, xis, thetas, phis;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto grab = [&](const char* key) -> std::string {
        auto pos = line.find(key);
        if (pos == std::string::npos) return {};
        return line.substr(pos + std::string(key).size());
      };
      if (auto v = grab("mass="); !v.empty()) mass = std::stod(v), have_mass = true;
      if (auto v = grab("slab="); !v.empty()) {
        std::istringstream vs(v);
        vs >> slab.a >> slab.b;
      }
      if (auto v = grab("cutoff="); !v.empty()) cutoff = std::stod(v);
      if (auto v = grab("kind="); !v.empty()) kind_str = v;
      if (auto v = grab("softening="); !v.empty()) soften_desc = v;
      continue;
    }
    std::istringstream ls(line);
    long z;
    double lambda, xi, theta, phi;
    if (!(ls >> z >> lambda >> xi >> theta >> phi))
      throw InvalidParams("malformed fpstate line: " + line);
    if (z != static_cast<long>(lambdas.size()) + 1)
      throw NotSorted("fpstate indices must run 1..N in order");
    lambdas.push_back(lambda);
    xis.push_back(xi);
    thetas.push_back(theta);
    phis.push_back(phi);
  }
  if (!have_mass) throw InvalidParams("fpstate dump lacks a mass header");
  if (lambdas.empty()) throw EmptySpectrum("fpstate dump holds no modes");

  FPState st;
  st.kind_ = kind_str == "reference" ? Kind::reference
             : kind_str == "ceiling" ? Kind::ceiling
                                     : Kind::fp;
  st.cutoff_ = cutoff > 0 ? cutoff : lambdas.back();
  st.slab_ = slab;
  st.spectrum_ = std::make_shared<Spectrum>(Spectrum::synthetic(mass, lambdas));
  if (!soften_desc.empty()) {
    try {
      st.f_ = std::make_shared<SofteningFunction>(SofteningFunction::from_descriptor(soften_desc));
    } catch (const Error&) {
      // tabulated descriptors are not reconstructible; blocks below suffice
    }
  }
  std::map<std::uint64_t, std::uint32_t> shell_index;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(lambdas[i]);
    auto it = shell_index.find(key);
    if (it == shell_index.end()) {
      it = shell_index
               .emplace(key, static_cast<std::uint32_t>(st.shells_.size()))
               .first;
      st.shells_.push_back(block_from_angles(static_cast<long>(i) + 1, lambdas[i], xis[i],
                                             thetas[i], phis[i]));
    }
    st.shell_of_.push_back(it->second);
  }
  return st;
}

FPState build_fp_state(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                       std::shared_ptr<const SofteningFunction> f, double cutoff,
                       bool allow_signed) {
  return FPState::build(std::move(spectrum), slab, std::move(f), cutoff, allow_signed);
}

FPState reference_state(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab,
                        double cutoff) {
  return FPState::reference(std::move(spectrum), slab, cutoff);
}

FPState ceiling_state(std::shared_ptr<const Spectrum> spectrum, SlabConfig slab, double cutoff) {
  return FPState::ceiling(std::move(spectrum), slab, cutoff);
}

std::vector<Eigen::Matrix2cd> projector_difference(const FPState& state, const FPState& ref) {
  if (state.num_modes() != ref.num_modes())
    throw CutoffMismatch("states hold different mode counts");
  std::vector<Eigen::Matrix2cd> diff;
  diff.reserve(state.num_modes());
  for (std::size_t z = 1; z <= state.num_modes(); ++z) {
    if (state.block(z).lambda != ref.block(z).lambda)
      throw CutoffMismatch("states built over different spectra");
    diff.push_back(state.projector(z) - ref.projector(z));
  }
  return diff;
}

}  // namespace fpslab
