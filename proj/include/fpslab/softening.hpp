#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fpslab/errors.hpp"

namespace fpslab {

using complexd = std::complex<double>;

struct SlabConfig {
  double a = -1.0;
  double b = 1.0;
  void validate() const;  // throws InvalidInterval
  double width() const { return b - a; }
};

// Nonnegative integrable weight f with an evaluator for the
// nonstandard-convention transform fhat(lambda) = int f(t) e^{i lambda t} dt.
// A negative scale is admitted only for the anti-Hadamard experiment.
class SofteningFunction {
 public:
  enum class Kind { indicator, bump, tabulated };

  static SofteningFunction indicator(double a, double b);
  static SofteningFunction bump(double center, double halfwidth);
  static SofteningFunction tabulated(std::vector<double> t, std::vector<double> f);
  static SofteningFunction tabulated_from_file(const std::string& path);

  Kind kind() const { return kind_; }
  double support_lo() const { return s0_; }
  double support_hi() const { return s1_; }
  double scale() const { return scale_; }
  double f0() const { return scale_ * f0_; }  // fhat(0)

  double eval(double t) const;
  complexd fourier(double lambda) const;  // cached per lambda bit pattern

  // Positive c rescales trivially; negative c flips the sign of f.
  SofteningFunction scaled(double c) const;

  std::string descriptor() const;
  static SofteningFunction from_descriptor(const std::string& desc);

  double quad_tol = 1e-10;

 private:
  SofteningFunction() = default;
  complexd fourier_uncached(double lambda) const;
  complexd quadrature(double lambda, double tol) const;

  Kind kind_ = Kind::indicator;
  double s0_ = 0.0, s1_ = 0.0;   // support
  double c0_ = 0.0, c1_ = 0.0;   // shape params (a,b or center,halfwidth)
  std::vector<double> ts_, fs_;  // tabulated samples
  double scale_ = 1.0;
  double f0_ = 0.0;  // unscaled fhat(0)

  struct Cache {
    std::mutex mu;
    std::unordered_map<std::uint64_t, complexd> map;
  };
  std::shared_ptr<Cache> cache_;
};

}  // namespace fpslab
