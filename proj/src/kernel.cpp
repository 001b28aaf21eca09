#include "fpslab/kernel.hpp"

#include <cmath>
#include <random>

namespace fpslab {

namespace {

void check_mode(const FPState& state, const EigenspinorBasis& basis, std::size_t z) {
  if (z < 1 || z > state.num_modes()) throw IndexOutOfRange("kernel mode index out of range");
  if (z > basis.size()) throw IndexOutOfRange("eigenspinor basis does not cover mode");
}

void check_point(const FPState& state, const SpacetimePoint& p) {
  if (p.t < state.slab().a || p.t > state.slab().b)
    throw PointOutsideSlab("time coordinate outside the slab");
}

// kappa^{s}_z(t,x) for s = +1 (positive frequency) or -1, as a 4-vector.
Vector4cd kappa(const EigenspinorBasis& basis, long z, int s, double lambda,
                const SpacetimePoint& pt, double inv_sqrt_v) {
  const Eigenspinor& chi = basis.at(s > 0 ? z : -z);
  const Eigen::Vector3d kp = basis.params().physical_momentum(chi.k);
  const double phase = -s * lambda * pt.t + kp[0] * pt.x[0] + kp[1] * pt.x[1] + kp[2] * pt.x[2];
  return std::exp(complexd(0.0, phase)) * inv_sqrt_v * chi.u;
}

}  // namespace

Matrix4cd sigma_term(const FPState& state, const EigenspinorBasis& basis, std::size_t z,
                     const SpacetimePoint& p, const SpacetimePoint& q) {
  check_mode(state, basis, z);
  check_point(state, p);
  check_point(state, q);

  const ModeBlock& b = state.block(z);
  const double inv_sqrt_v = 1.0 / std::sqrt(basis.params().volume());
  const long zi = static_cast<long>(z);

  const Vector4cd kp_p = kappa(basis, zi, +1, b.lambda, p, inv_sqrt_v);
  const Vector4cd kp_q = kappa(basis, zi, +1, b.lambda, q, inv_sqrt_v);
  const Vector4cd km_p = kappa(basis, zi, -1, b.lambda, p, inv_sqrt_v);
  const Vector4cd km_q = kappa(basis, zi, -1, b.lambda, q, inv_sqrt_v);

  const double c = std::cos(b.theta);
  const double s = std::sin(b.theta);
  const complexd em = std::exp(complexd(0.0, -b.phi));
  const Vector4cd kf_p = c * kp_p + em * s * km_p;
  const Vector4cd kf_q = c * kp_q + em * s * km_q;

  return gamma::g0() * (kf_p * kf_q.conjugate().transpose() -
                        kp_p * kp_q.conjugate().transpose());
}

double sigma_l2_norm_sq(const FPState& state, std::size_t z) {
  if (z < 1 || z > state.num_modes()) throw IndexOutOfRange("kernel mode index out of range");
  const ModeBlock& b = state.block(z);
  return 2.0 * state.slab().width() * b.sin_sq();
}

double sigma_l2_norm_sq_mc(const FPState& state, const EigenspinorBasis& basis, std::size_t z,
                           std::size_t samples, std::uint64_t seed) {
  check_mode(state, basis, z);
  const SlabConfig& slab = state.slab();
  const ModelParams& mp = basis.params();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(slab.a, slab.b);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double acc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    SpacetimePoint p{ut(rng), {u01(rng) * mp.L[0], u01(rng) * mp.L[1], u01(rng) * mp.L[2]}};
    SpacetimePoint q{ut(rng), {u01(rng) * mp.L[0], u01(rng) * mp.L[1], u01(rng) * mp.L[2]}};
    acc += sigma_term(state, basis, z, p, q).squaredNorm();
  }
  // 4D integral = mean * (b-a)^2 V^2; one slab time factor is divided out to
  // match the closed-form normalization.
  return acc / double(samples) * slab.width() * mp.volume() * mp.volume();
}

complexd sigma_inner_product(const FPState& state, const EigenspinorBasis& basis, std::size_t w,
                             std::size_t z) {
  check_mode(state, basis, w);
  check_mode(state, basis, z);
  const ModeBlock& bw = state.block(w);
  const ModeBlock& bz = state.block(z);
  const SlabConfig& slab = state.slab();
  const SofteningFunction slab_ind = SofteningFunction::indicator(slab.a, slab.b);

  // sigma = g0 sum_ab c_ab kappa^a(p) kappa^b(q)^*T with
  // c_++ = -s^2, c_+- = e^{i phi} s c, c_-+ = e^{-i phi} s c, c_-- = s^2.
  auto coeffs = [](const ModeBlock& b) {
    const double s2 = b.sin_sq();
    const double sc = b.sin_cos();
    const complexd e = std::exp(complexd(0.0, b.phi));
    return std::array<complexd, 4>{-s2, e * sc, std::conj(e) * sc, s2};  // ++, +-, -+, --
  };
  const auto cw = coeffs(bw);
  const auto cz = coeffs(bz);
  const int sgn[2] = {+1, -1};

  // I_{ac} = int kappa^a_w(p)^dag kappa^c_z(p) dp over slab x Sigma
  auto overlap = [&](int a, int c) -> complexd {
    const Eigenspinor& ew = basis.at(sgn[a] > 0 ? long(w) : -long(w));
    const Eigenspinor& ez = basis.at(sgn[c] > 0 ? long(z) : -long(z));
    if (ew.k != ez.k) return 0.0;
    const complexd spatial = (ew.u.adjoint() * ez.u)(0, 0);
    if (spatial == complexd(0.0, 0.0)) return 0.0;
    return slab_ind.fourier(sgn[a] * bw.lambda - sgn[c] * bz.lambda) * spatial;
  };

  complexd acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          acc += std::conj(cw[2 * a + b]) * cz[2 * c + d] * overlap(a, c) *
                 std::conj(overlap(b, d));
  return acc / slab.width();
}

KernelSumResult difference_kernel(const FPState& state, const EigenspinorBasis& basis,
                                  const std::vector<std::pair<SpacetimePoint, SpacetimePoint>>& pairs,
                                  std::size_t N) {
  if (N > state.num_modes()) throw IndexOutOfRange("truncation exceeds the cutoff");
  KernelSumResult res;
  res.values.assign(pairs.size(), Matrix4cd::Zero());
  for (std::size_t z = 1; z <= N; ++z)
    for (std::size_t i = 0; i < pairs.size(); ++i)
      res.values[i] += sigma_term(state, basis, z, pairs[i].first, pairs[i].second);
  for (std::size_t z = N + 1; z <= state.num_modes(); ++z)
    res.tail_indicator += sigma_l2_norm_sq(state, z);
  return res;
}

}  // namespace fpslab
