#pragma once

// Dirac gamma matrices in the Pauli realisation, signature (+,-,-,-).

#include <Eigen/Dense>
#include <complex>

namespace fpslab {

using complexd = std::complex<double>;
using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;

namespace gamma {

inline Matrix4cd g0() {
  Matrix4cd g = Matrix4cd::Zero();
  g(0, 0) = g(1, 1) = 1.0;
  g(2, 2) = g(3, 3) = -1.0;
  return g;
}

// Spatial gammas, i = 1,2,3: [[0, sigma_i], [-sigma_i, 0]].
inline Matrix4cd gi(int i) {
  const complexd I(0.0, 1.0);
  Eigen::Matrix2cd s;
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: s.setZero(); break;
  }
  Matrix4cd g = Matrix4cd::Zero();
  g.block<2, 2>(0, 2) = s;
  g.block<2, 2>(2, 0) = -s;
  return g;
}

// gamma^5 = gamma^0 gamma^1 gamma^2 gamma^3 = -i [[0, 1], [1, 0]].
inline Matrix4cd g5() {
  const complexd I(0.0, 1.0);
  Matrix4cd g = Matrix4cd::Zero();
  g.block<2, 2>(0, 2) = -I * Eigen::Matrix2cd::Identity();
  g.block<2, 2>(2, 0) = -I * Eigen::Matrix2cd::Identity();
  return g;
}

// Fourier symbol of the spatial Dirac operator at physical momentum k:
// gamma^0 gamma^i k_i + m gamma^0.  Block form [[m, sigma.k], [sigma.k, -m]].
inline Matrix4cd spatial_symbol(const Eigen::Vector3d& k, double m) {
  const complexd I(0.0, 1.0);
  Eigen::Matrix2cd sk;
  sk << k[2], k[0] - I * k[1], k[0] + I * k[1], -k[2];
  Matrix4cd h = Matrix4cd::Zero();
  h.block<2, 2>(0, 0) = m * Eigen::Matrix2cd::Identity();
  h.block<2, 2>(2, 2) = -m * Eigen::Matrix2cd::Identity();
  h.block<2, 2>(0, 2) = sk;
  h.block<2, 2>(2, 0) = sk;
  return h;
}

}  // namespace gamma
}  // namespace fpslab
