#include "fpslab/softening.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fpslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 15-point Kronrod extension of 7-point Gauss (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// sin(x)/x and (sin x - x cos x)/x^2 with Taylor branches near 0.
double sinc(double x) {
  if (std::fabs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double g2(double x) {
  if (std::fabs(x) < 1e-3) {
    const double x2 = x * x;
    return x / 3.0 * (1.0 - x2 / 10.0 + x2 * x2 / 280.0);
  }
  return (std::sin(x) - x * std::cos(x)) / (x * x);
}

}  // namespace

void SlabConfig::validate() const {
  if (!(a < b)) throw InvalidInterval("slab requires a < b");
}

SofteningFunction SofteningFunction::indicator(double a, double b) {
  if (!(a < b)) throw InvalidInterval("indicator requires a < b");
  SofteningFunction f;
  f.kind_ = Kind::indicator;
  f.s0_ = f.c0_ = a;
  f.s1_ = f.c1_ = b;
  f.f0_ = b - a;
  f.cache_ = std::make_shared<Cache>();
  return f;
}

SofteningFunction SofteningFunction::bump(double center, double halfwidth) {
  if (!(halfwidth > 0)) throw InvalidParams("bump halfwidth must be positive");
  SofteningFunction f;
  f.kind_ = Kind::bump;
  f.c0_ = center;
  f.c1_ = halfwidth;
  f.s0_ = center - halfwidth;
  f.s1_ = center + halfwidth;
  f.cache_ = std::make_shared<Cache>();
  f.f0_ = f.quadrature(0.0, 1e-13).real();
  return f;
}

SofteningFunction SofteningFunction::tabulated(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 2)
    throw InvalidParams("tabulated softening needs at least two samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1])) throw NotSorted("tabulated abscissae must increase");
    if (v[i] < 0) throw InvalidParams("tabulated softening must be nonnegative");
  }
  SofteningFunction f;
  f.kind_ = Kind::tabulated;
  f.s0_ = t.front();
  f.s1_ = t.back();
  f.ts_ = std::move(t);
  f.fs_ = std::move(v);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.ts_.size(); ++i)
    acc += 0.5 * (f.fs_[i] + f.fs_[i + 1]) * (f.ts_[i + 1] - f.ts_[i]);
  if (!(acc > 0)) throw InvalidParams("tabulated softening integrates to zero");
  f.f0_ = acc;
  f.cache_ = std::make_shared<Cache>();
  return f;
}

SofteningFunction SofteningFunction::tabulated_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open softening file: " + path);
  std::vector<double> t, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double ti, vi;
    if (!(ls >> ti >> vi)) throw InvalidParams("malformed softening line: " + line);
    t.push_back(ti);
    v.push_back(vi);
  }
  return tabulated(std::move(t), std::move(v));
}

double SofteningFunction::eval(double t) const {
  double v = 0.0;
  switch (kind_) {
    case Kind::indicator:
      v = (t >= s0_ && t <= s1_) ? 1.0 : 0.0;
      break;
    case Kind::bump: {
      const double u = (t - c0_) / c1_;
      if (std::fabs(u) < 1.0) v = std::exp(-1.0 / (1.0 - u * u));
      break;
    }
    case Kind::tabulated: {
      if (t < s0_ || t > s1_) break;
      auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
      if (it == ts_.begin()) {
        v = fs_.front();
        break;
      }
      std::size_t i = static_cast<std::size_t>(it - ts_.begin());
      if (i >= ts_.size()) {
        v = fs_.back();
        break;
      }
      const double w = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
      v = (1.0 - w) * fs_[i - 1] + w * fs_[i];
      break;
    }
  }
  return scale_ * v;
}

complexd SofteningFunction::quadrature(double lambda, double tol) const {
  const double width = s1_ - s0_;
  long n = std::max<long>(16, static_cast<long>(std::ceil(width * std::fabs(lambda) / kPi)));
  if (n > (1L << 21)) throw QuadratureFailure("oscillation too fast for the panel budget");

  for (; n <= (1L << 21); n *= 2) {
    complexd total = 0.0;
    double err = 0.0;
    const double h = width / n;
    for (long p = 0; p < n; ++p) {
      const double lo = s0_ + p * h;
      const double mid = lo + 0.5 * h;
      const double hh = 0.5 * h;
      complexd k15 = 0.0, g7 = 0.0;
      for (int j = 0; j < 8; ++j) {
        const double dx = hh * kXgk[j];
        auto integrand = [&](double t) {
          // unscaled f; the overall scale multiplies the result
          double fv;
          if (kind_ == Kind::bump) {
            const double u = (t - c0_) / c1_;
            fv = std::fabs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
          } else {
            fv = eval(t) / (scale_ != 0.0 ? scale_ : 1.0);
          }
          return fv * std::exp(complexd(0.0, lambda * t));
        };
        if (j == 7) {
          const complexd fm = integrand(mid);
          k15 += kWgk[7] * fm;
          g7 += kWg[3] * fm;
        } else {
          const complexd fp = integrand(mid + dx) + integrand(mid - dx);
          k15 += kWgk[j] * fp;
          if (j % 2 == 1) g7 += kWg[j / 2] * fp;
        }
      }
      total += hh * k15;
      err += std::abs(hh * (k15 - g7));
    }
    if (err <= tol) return total;
  }
  throw QuadratureFailure("requested tolerance not reached within the panel budget");
}

complexd SofteningFunction::fourier_uncached(double lambda) const {
  switch (kind_) {
    case Kind::indicator: {
      if (lambda == 0.0) return scale_ * (s1_ - s0_);
      const complexd il(0.0, lambda);
      return scale_ * (std::exp(il * s1_) - std::exp(il * s0_)) / il;
    }
    case Kind::bump:
      if (lambda == 0.0) return scale_ * f0_;
      return scale_ * quadrature(lambda, quad_tol);
    case Kind::tabulated: {
      // exact transform of the linear interpolant, segment by segment
      complexd acc = 0.0;
      for (std::size_t i = 0; i + 1 < ts_.size(); ++i) {
        const double t0 = ts_[i], t1 = ts_[i + 1];
        const double hh = 0.5 * (t1 - t0);
        const double tm = 0.5 * (t0 + t1);
        const double fm = 0.5 * (fs_[i] + fs_[i + 1]);
        const double slope = (fs_[i + 1] - fs_[i]) / (t1 - t0);
        const double x = lambda * hh;
        // int_{-h}^{h} (fm + s u) e^{i lambda u} du
        const complexd seg(2.0 * hh * fm * sinc(x), 2.0 * hh * hh * slope * g2(x));
        acc += std::exp(complexd(0.0, lambda * tm)) * seg;
      }
      return scale_ * acc;
    }
  }
  return 0.0;
}

complexd SofteningFunction::fourier(double lambda) const {
  if (lambda == 0.0) lambda = 0.0;  // collapse -0.0 onto +0.0 for the cache key
  if (kind_ == Kind::indicator) return fourier_uncached(lambda);
  const std::uint64_t key = std::bit_cast<std::uint64_t>(lambda);
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->map.find(key);
  if (it != cache_->map.end()) return it->second;
  const complexd v = fourier_uncached(lambda);
  cache_->map.emplace(key, v);
  return v;
}

SofteningFunction SofteningFunction::scaled(double c) const {
  if (c == 0.0) throw InvalidParams("scale must be nonzero");
  SofteningFunction f = *this;
  f.scale_ = scale_ * c;
  f.cache_ = std::make_shared<Cache>();
  return f;
}

std::string SofteningFunction::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::indicator:
      os << "indicator a=" << c0_ << " b=" << c1_;
      break;
    case Kind::bump:
      os << "bump center=" << c0_ << " halfwidth=" << c1_;
      break;
    case Kind::tabulated:
      os << "tabulated n=" << ts_.size() << " lo=" << s0_ << " hi=" << s1_;
      break;
  }
  os << " scale=" << scale_;
  return os.str();
}

SofteningFunction SofteningFunction::from_descriptor(const std::string& desc) {
  std::istringstream is(desc);
  std::string kind;
  is >> kind;
  auto value = [&](const std::string& token) {
    auto pos = token.find('=');
    if (pos == std::string::npos) throw InvalidParams("bad softening descriptor: " + desc);
    return std::stod(token.substr(pos + 1));
  };
  std::vector<std::string> tokens;
  for (std::string t; is >> t;) tokens.push_back(t);
  double scale = 1.0;
  for (const auto& t : tokens)
    if (t.rfind("scale=", 0) == 0) scale = value(t);
  if (kind == "indicator" && tokens.size() >= 2)
    return indicator(value(tokens[0]), value(tokens[1])).scaled(scale);
  if (kind == "bump" && tokens.size() >= 2)
    return bump(value(tokens[0]), value(tokens[1])).scaled(scale);
  throw InvalidParams("cannot reconstruct softening from descriptor: " + desc);
}

}  // namespace fpslab
