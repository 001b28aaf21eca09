#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fpslab/fpstate.hpp"
#include "fpslab/spectrum.hpp"

namespace fpslab {

struct SpacetimePoint {
  double t = 0.0;
  std::array<double, 3> x = {0.0, 0.0, 0.0};
};

// Per-mode difference-kernel term
//   sigma_z(p,q) = g0 [ kappa+_{f,z}(p) kappa+_{f,z}(q)^*T - kappa+_z(p) kappa+_z(q)^*T ]
// with kappa+-_z(t,x) = e^{-+ i lambda_z t} chi_{+-z}(x).
Matrix4cd sigma_term(const FPState& state, const EigenspinorBasis& basis, std::size_t z,
                     const SpacetimePoint& p, const SpacetimePoint& q);

// Closed form 2(b-a) sin^2 theta_{f,z}.  The companion quadrature below uses the
// matching normalization (one slab time factor divided out of the 4D integral).
double sigma_l2_norm_sq(const FPState& state, std::size_t z);
double sigma_l2_norm_sq_mc(const FPState& state, const EigenspinorBasis& basis, std::size_t z,
                           std::size_t samples, std::uint64_t seed);

// Semi-analytic L2 inner product <sigma_w, sigma_z>, same normalization.
complexd sigma_inner_product(const FPState& state, const EigenspinorBasis& basis, std::size_t w,
                             std::size_t z);

struct KernelSumResult {
  std::vector<Matrix4cd> values;  // truncated sum per requested point pair
  double tail_indicator = 0.0;    // sum of 2(b-a) sin^2 theta over (N, cutoff]
};
KernelSumResult difference_kernel(const FPState& state, const EigenspinorBasis& basis,
                                  const std::vector<std::pair<SpacetimePoint, SpacetimePoint>>& pairs,
                                  std::size_t N);

}  // namespace fpslab
