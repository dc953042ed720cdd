#pragma once

// Symbols on the unit circle: finite Laurent series sum_n c_n z^n, z = e^{i theta},
// together with equispaced grid samplings used for sup-norms, winding numbers,
// essential ranges and zero-set measures.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "circleop/error.hpp"

namespace circleop {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Coefficientwise equality tolerance for symbols.
inline constexpr double kEqTol = 1e-10;
/// Minimum distance between a curve and the point it winds around.
inline constexpr double kWindGuard = 1e-6;

class Symbol {
 public:
  Symbol() = default;

  static Symbol constant(cplx c) { return monomial(0, c); }
  static Symbol monomial(int mode, cplx c = 1.0) {
    Symbol s;
    if (c != cplx{}) s.c_[mode] = c;
    return s;
  }
  static Symbol one() { return constant(1.0); }
  static Symbol z() { return monomial(1); }
  static Symbol zbar() { return monomial(-1); }

  const std::map<int, cplx>& coeffs() const noexcept { return c_; }

  cplx operator[](int mode) const {
    auto it = c_.find(mode);
    return it == c_.end() ? cplx{} : it->second;
  }

  bool is_zero() const noexcept { return c_.empty(); }
  int lo() const noexcept { return c_.empty() ? 0 : c_.begin()->first; }
  int hi() const noexcept { return c_.empty() ? 0 : c_.rbegin()->first; }
  /// max(|lo|, |hi|): the largest mode magnitude carried by the symbol.
  int radius() const noexcept { return std::max(std::abs(lo()), std::abs(hi())); }

  cplx operator()(double theta) const {
    cplx acc{};
    for (const auto& [n, c] : c_) acc += c * std::polar(1.0, n * theta);
    return acc;
  }

  /// Pointwise complex conjugate: coefficient n becomes conj(c_{-n}).
  Symbol conj() const {
    Symbol s;
    for (const auto& [n, c] : c_) s.c_[-n] = std::conj(c);
    return s;
  }

  /// Drops coefficients with |c| <= tol.
  Symbol chopped(double tol) const {
    Symbol s;
    for (const auto& [n, c] : c_)
      if (std::abs(c) > tol) s.c_[n] = c;
    return s;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [n, c] : c_) m = std::max(m, std::abs(c));
    return m;
  }

  /// L2 norm with respect to normalized arc length, i.e. the l2 norm of the coefficients.
  double l2_norm() const {
    double s = 0.0;
    for (const auto& [n, c] : c_) s += std::norm(c);
    return std::sqrt(s);
  }

  bool approx_equal(const Symbol& other, double tol = kEqTol) const {
    for (const auto& [n, c] : c_)
      if (std::abs(c - other[n]) > tol) return false;
    for (const auto& [n, c] : other.c_)
      if (std::abs(c - (*this)[n]) > tol) return false;
    return true;
  }

  /// Equality within kEqTol.
  friend bool operator==(const Symbol& a, const Symbol& b) { return a.approx_equal(b); }

  friend Symbol operator+(const Symbol& a, const Symbol& b) {
    Symbol s = a;
    for (const auto& [n, c] : b.c_) s.accumulate(n, c);
    return s;
  }
  friend Symbol operator-(const Symbol& a) { return cplx{-1.0} * a; }
  friend Symbol operator-(const Symbol& a, const Symbol& b) { return a + (-b); }
  friend Symbol operator*(cplx k, const Symbol& a) {
    Symbol s;
    if (k == cplx{}) return s;
    for (const auto& [n, c] : a.c_) s.c_[n] = k * c;
    return s;
  }
  /// Pointwise product on the circle = coefficient convolution.
  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    Symbol s;
    for (const auto& [n, c] : a.c_)
      for (const auto& [m, d] : b.c_) s.accumulate(n + m, c * d);
    return s;
  }

 private:
  friend Symbol make_symbol(const std::vector<std::pair<int, cplx>>& terms);

  void accumulate(int mode, cplx c) {
    auto [it, inserted] = c_.try_emplace(mode, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) c_.erase(it);
    } else if (c == cplx{}) {
      c_.erase(it);
    }
  }

  std::map<int, cplx> c_;  // nonzero coefficients only
};

/// Builds a symbol from (mode, coefficient) pairs. Zero coefficients are dropped.
inline Symbol make_symbol(const std::vector<std::pair<int, cplx>>& terms) {
  Symbol s;
  std::set<int> seen;
  for (const auto& [n, c] : terms) {
    if (!seen.insert(n).second) throw PreconditionError("make_symbol: duplicate mode " + std::to_string(n));
    if (c != cplx{}) s.c_[n] = c;
  }
  return s;
}

/// Samples of a symbol (or of a closed-form function) at theta_j = 2 pi j / N.
struct GridSampling {
  int n_points = 0;
  std::vector<cplx> values;

  double theta(int j) const { return kTwoPi * j / n_points; }

  double max_abs() const {
    double m = 0.0;
    for (auto v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline void check_grid(int n_points, int radius) {
  if (n_points < 16 || !is_power_of_two(n_points))
    throw PreconditionError("grid size must be a power of two >= 16, got " + std::to_string(n_points));
  if (n_points <= 2 * radius)
    throw PreconditionError("grid size " + std::to_string(n_points) + " too small for symbol support radius " +
                            std::to_string(radius));
}

/// Smallest admissible power-of-two grid that is at least `floor_points` and resolves the symbol.
inline int default_grid(const Symbol& s, int floor_points = 1024) {
  int n = 16;
  while (n < floor_points || n <= 8 * s.radius()) n *= 2;
  return n;
}

inline GridSampling sample(const Symbol& s, int n_points) {
  check_grid(n_points, s.radius());
  GridSampling g{n_points, std::vector<cplx>(static_cast<std::size_t>(n_points))};
  for (int j = 0; j < n_points; ++j) g.values[j] = s(g.theta(j));
  return g;
}

/// Samples an arbitrary function of theta; used for continuous symbols that are not trigonometric polynomials.
inline GridSampling sample_function(int n_points, const std::function<cplx(double)>& f) {
  check_grid(n_points, 0);
  GridSampling g{n_points, std::vector<cplx>(static_cast<std::size_t>(n_points))};
  for (int j = 0; j < n_points; ++j) g.values[j] = f(g.theta(j));
  return g;
}

/// Band-limited reconstruction: coefficients |n| <= degree from the discrete Fourier transform.
inline Symbol from_samples(const GridSampling& g, int degree) {
  const int n_points = g.n_points;
  if (degree < 0 || 2 * degree >= n_points)
    throw PreconditionError("from_samples: degree " + std::to_string(degree) + " aliases on " +
                            std::to_string(n_points) + " points");
  std::vector<std::pair<int, cplx>> terms;
  const double scale = std::max(g.max_abs(), 1e-300);
  for (int n = -degree; n <= degree; ++n) {
    cplx acc{};
    for (int j = 0; j < n_points; ++j) {
      // exact index reduction keeps the twiddle factors accurate for large n*j
      const long long r = (static_cast<long long>(n) * j) % n_points;
      acc += g.values[j] * std::polar(1.0, -kTwoPi * static_cast<double>(r) / n_points);
    }
    acc /= static_cast<double>(n_points);
    if (std::abs(acc) > 1e-15 * scale) terms.emplace_back(n, acc);
  }
  return make_symbol(terms);
}

inline double sup_norm(const GridSampling& g) { return g.max_abs(); }
inline double sup_norm(const Symbol& s, int n_points) { return sample(s, n_points).max_abs(); }

inline bool is_analytic(const Symbol& s, double tol = kEqTol) {
  for (const auto& [n, c] : s.coeffs())
    if (n < 0 && std::abs(c) > tol) return false;
  return true;
}

inline bool is_coanalytic(const Symbol& s, double tol = kEqTol) {
  for (const auto& [n, c] : s.coeffs())
    if (n > 0 && std::abs(c) > tol) return false;
  return true;
}

inline double min_distance(const GridSampling& g, cplx a) {
  double d = std::numeric_limits<double>::infinity();
  for (auto v : g.values) d = std::min(d, std::abs(v - a));
  return d;
}

/// Winding number of the sampled closed curve around `a`.
inline int winding_number(const GridSampling& g, cplx a) {
  if (min_distance(g, a) <= kWindGuard) throw WindingError(WindingError::Kind::CurveTouchesPoint, "curve touches point");
  double total = 0.0;
  const int n = g.n_points;
  for (int j = 0; j < n; ++j) {
    const cplx u = g.values[j] - a;
    const cplx v = g.values[(j + 1) % n] - a;
    const double step = std::arg(v / u);
    if (std::abs(step) >= std::numbers::pi / 2)
      throw WindingError(WindingError::Kind::GridTooCoarse, "grid too coarse for winding number");
    total += step;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

inline int winding_number(const Symbol& s, cplx a, int n_points) { return winding_number(sample(s, n_points), a); }

/// Winding number with grid doubling until the phase increments are resolved.
inline int winding_number_adaptive(const Symbol& s, cplx a, int n_start = 0, int n_max = 1 << 20) {
  int n = n_start > 0 ? n_start : default_grid(s, 256);
  for (;; n *= 2) {
    try {
      return winding_number(s, a, n);
    } catch (const WindingError& e) {
      if (e.kind() == WindingError::Kind::CurveTouchesPoint || n >= n_max) throw;
    }
  }
}

inline bool in_essential_range(const GridSampling& g, cplx lambda, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("in_essential_range: eps must be positive");
  return std::any_of(g.values.begin(), g.values.end(), [&](cplx v) { return std::abs(v - lambda) < eps; });
}

inline bool in_essential_range(const Symbol& s, cplx lambda, double eps, int n_points) {
  return in_essential_range(sample(s, n_points), lambda, eps);
}

/// Fraction of grid points where |value| < tol: a grid-level estimate of the normalized measure of the zero set.
inline double zero_set_measure(const GridSampling& g, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("zero_set_measure: tol must be positive");
  const auto hits = std::count_if(g.values.begin(), g.values.end(), [&](cplx v) { return std::abs(v) < tol; });
  return static_cast<double>(hits) / g.n_points;
}

inline double zero_set_measure(const Symbol& s, double tol, int n_points) {
  if (s.is_zero()) return 1.0;
  return zero_set_measure(sample(s, n_points), tol);
}

// Smooth (C-infinity) building blocks for continuous symbols vanishing on arcs.

/// 0 for x <= 0, 1 for x >= 1, smooth in between.
inline double smooth_step(double x) {
  auto h = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return h(x) / (h(x) + h(1.0 - x));
}

/// Identically 0 on the arc [start, end] (counterclockwise), 1 at arc distance >= transition, smooth in between.
inline double arc_vanishing_profile(double theta, double start, double end, double transition) {
  const double length = std::fmod(std::fmod(end - start, kTwoPi) + kTwoPi, kTwoPi);
  const double t = std::fmod(std::fmod(theta - start, kTwoPi) + kTwoPi, kTwoPi);
  if (t <= length) return 0.0;
  const double dist = std::min(t - length, kTwoPi - t);
  return smooth_step(dist / transition);
}

}  // namespace circleop
