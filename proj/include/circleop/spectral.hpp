#pragma once

// Spectra of S_{alpha,beta} for continuous (band-limited) symbols: essential ranges,
// winding numbers, a resolvent smallest-singular-value oracle, approximate eigenvectors,
// index by polynomial roots, and the resolvent solver for S*_{alpha,0}.

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "circleop/linalg.hpp"
#include "circleop/operator.hpp"
#include "circleop/parallel.hpp"
#include "circleop/symbol.hpp"

namespace circleop {

inline constexpr double kRootGuard = 1e-6;
inline constexpr double kSolveTol = 1e-8;
inline constexpr double kIllConditioned = 1e12;

/// Smallest singular value of the square truncation of S_{alpha - lambda, beta - lambda} on [-M, M].
inline double resolvent_min_sv(const Symbol& alpha, const Symbol& beta, cplx lambda, int M) {
  const int r = std::max(alpha.radius(), beta.radius());
  if (M < 4 * r || M < 1) throw PreconditionError("resolvent_min_sv: M below 4x support radius");
  const Symbol shift = Symbol::constant(lambda);
  return smallest_singular_value(build_matrix(alpha - shift, beta - shift, M, Truncation::square).entries);
}

struct GridSpec {
  double re0 = -2, re1 = 2, im0 = -2, im1 = 2;
  int n = 41;         ///< points per axis
  double eps = 1e-3;  ///< essential-range tolerance

  cplx point(int i, int j) const {
    const double x = n > 1 ? re0 + (re1 - re0) * i / (n - 1) : re0;
    const double y = n > 1 ? im0 + (im1 - im0) * j / (n - 1) : im0;
    return {x, y};
  }
};

struct SpectrumPoint {
  cplx lambda;
  bool in_range_a = false;
  bool in_range_b = false;
  std::optional<int> ind_a;  ///< undefined when the curve passes within the winding guard of lambda
  std::optional<int> ind_b;
  bool in_spectrum = false;
  bool flagged = false;  ///< off both ranges but a winding number was undefined: classified by range only
  std::optional<double> min_sv;
};

struct SpectrumReport {
  GridSpec grid;
  int n_points = 0;  ///< circle samples
  std::vector<SpectrumPoint> points;  ///< row-major: real part varies fastest
};

namespace detail {

inline std::optional<int> guarded_winding(const Symbol& s, const GridSampling& g, cplx lambda, double guard) {
  if (min_distance(g, lambda) <= guard) return std::nullopt;
  try {
    return winding_number(g, lambda);
  } catch (const WindingError& e) {
    if (e.kind() == WindingError::Kind::CurveTouchesPoint) return std::nullopt;
  }
  // a point that still defeats a 64x finer grid sits on the curve to within sampling accuracy
  try {
    return winding_number_adaptive(s, lambda, 2 * g.n_points, 64 * g.n_points);
  } catch (const WindingError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Classifies grid points by range(alpha) U range(beta) U {lambda off both ranges : ind alpha != ind beta}.
/// When probe_M > 0 every point also carries the resolvent oracle value at that truncation.
inline SpectrumReport spectrum_continuous(const Symbol& alpha, const Symbol& beta, const GridSpec& grid, int n_points,
                                          int probe_M = 0) {
  if (grid.n < 1) throw PreconditionError("spectrum_continuous: empty grid");
  if (!(grid.eps > 0.0)) throw PreconditionError("spectrum_continuous: eps must be positive");
  const GridSampling ga = sample(alpha, n_points);
  const GridSampling gb = sample(beta, n_points);
  const double guard = std::max(kWindGuard, 0.1 * grid.eps);

  SpectrumReport report{grid, n_points, std::vector<SpectrumPoint>(static_cast<std::size_t>(grid.n) * grid.n)};
  parallel_for(report.points.size(), [&](std::size_t k) {
    SpectrumPoint& p = report.points[k];
    p.lambda = grid.point(static_cast<int>(k % grid.n), static_cast<int>(k / grid.n));
    p.in_range_a = in_essential_range(ga, p.lambda, grid.eps);
    p.in_range_b = in_essential_range(gb, p.lambda, grid.eps);
    p.ind_a = detail::guarded_winding(alpha, ga, p.lambda, guard);
    p.ind_b = detail::guarded_winding(beta, gb, p.lambda, guard);
    const bool in_range = p.in_range_a || p.in_range_b;
    if (p.ind_a && p.ind_b)
      p.in_spectrum = in_range || *p.ind_a != *p.ind_b;
    else {
      p.in_spectrum = in_range;
      p.flagged = !in_range;
    }
    if (probe_M > 0) p.min_sv = resolvent_min_sv(alpha, beta, p.lambda, probe_M);
  });
  return report;
}

enum class HalfSide { AlphaZeroBeta, BetaZeroAlpha };

/// Spectrum of S_{alpha,0} (AlphaZeroBeta) or S_{0,beta} (BetaZeroAlpha): range(s) U {ind s != 0} U {0}.
inline SpectrumReport half_spectrum(const Symbol& s, HalfSide side, const GridSpec& grid, int n_points,
                                    int probe_M = 0) {
  return side == HalfSide::AlphaZeroBeta ? spectrum_continuous(s, Symbol{}, grid, n_points, probe_M)
                                         : spectrum_continuous(Symbol{}, s, grid, n_points, probe_M);
}

/// min ||(S - lambda) f|| / ||f|| over peaked test vectors f located where a symbol is closest to lambda.
/// For alpha the vectors are analytic, f = sum_{n<=M} r^n e^{-in theta*} z^n, so (S - lambda) f = (alpha - lambda) f;
/// for beta they are the co-analytic mirror images. Radii r = 1 - k/M, k < trials.
inline double essential_range_in_approx_spectrum(const Symbol& alpha, const Symbol& beta, cplx lambda, int M,
                                                 int trials = 8, double eps = 1e-3) {
  if (M < 1 || trials < 1) throw PreconditionError("essential_range_in_approx_spectrum: empty search");
  const int n_points = default_grid(alpha.radius() > beta.radius() ? alpha : beta, 4096);
  const GridSampling ga = sample(alpha, n_points);
  const GridSampling gb = sample(beta, n_points);
  const bool use_a = in_essential_range(ga, lambda, eps);
  const bool use_b = in_essential_range(gb, lambda, eps);
  if (!use_a && !use_b) throw PreconditionError("essential_range_in_approx_spectrum: lambda is in neither range");

  auto closest_theta = [&](const GridSampling& g) {
    int best = 0;
    for (int j = 1; j < g.n_points; ++j)
      if (std::abs(g.values[j] - lambda) < std::abs(g.values[best] - lambda)) best = j;
    return g.theta(best);
  };

  double best = std::numeric_limits<double>::infinity();
  const Symbol shift = Symbol::constant(lambda);
  for (int side = 0; side < 2; ++side) {
    if ((side == 0 && !use_a) || (side == 1 && !use_b)) continue;
    const double theta = closest_theta(side == 0 ? ga : gb);
    for (int k = 0; k < trials; ++k) {
      const double r = 1.0 - static_cast<double>(k) / M;
      CoeffVector f(side == 0 ? ModeWindow{0, M} : ModeWindow{-M - 1, -1});
      for (int n = 0; n <= M; ++n) {
        const int mode = side == 0 ? n : -n - 1;
        f.at(mode) = std::pow(r, n) * std::polar(1.0, -mode * theta);
      }
      const double ratio = apply(alpha - shift, beta - shift, f).norm() / f.norm();
      best = std::min(best, ratio);
    }
  }
  return best;
}

enum class Invertibility { Invertible, NotInvertible, CurveThroughZero };

inline const char* to_string(Invertibility v) {
  switch (v) {
    case Invertibility::Invertible: return "Invertible";
    case Invertibility::NotInvertible: return "NotInvertible";
    default: return "CurveThroughZero";
  }
}

/// S_{alpha,beta} with continuous nonvanishing symbols is invertible iff ind_0 alpha = ind_0 beta.
inline Invertibility invertible_by_index(const Symbol& alpha, const Symbol& beta, int n_points) {
  const GridSampling ga = sample(alpha, n_points);
  const GridSampling gb = sample(beta, n_points);
  if (min_distance(ga, 0.0) <= kWindGuard || min_distance(gb, 0.0) <= kWindGuard)
    return Invertibility::CurveThroughZero;
  const int ia = winding_number_adaptive(alpha, 0.0, n_points);
  const int ib = winding_number_adaptive(beta, 0.0, n_points);
  return ia == ib ? Invertibility::Invertible : Invertibility::NotInvertible;
}

/// Roots of sum_k c_k z^k (c given lowest degree first, leading coefficient nonzero) from the
/// eigenvalues of the balanced companion matrix.
inline std::vector<cplx> polynomial_roots(const std::vector<cplx>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return {};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) C(i, d - 1) = -c[i] / c[d];

  // Parlett-Reinsch balancing by powers of two
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < d; ++i) {
      double col = 0.0, row = 0.0;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        col += std::abs(C(j, i));
        row += std::abs(C(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      double f = 1.0;
      const double s = col + row;
      while (col < row / 2.0) {
        col *= 2.0;
        row /= 2.0;
        f *= 2.0;
      }
      while (col >= row * 2.0) {
        col /= 2.0;
        row *= 2.0;
        f /= 2.0;
      }
      if (col + row < 0.95 * s) {
        done = false;
        C.row(i) /= f;
        C.col(i) *= f;
      }
    }
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// ind_0 s = (roots of z^{-lo} s inside the unit disk) + lo.
inline int index_via_roots(const Symbol& s) {
  if (s.is_zero()) throw PreconditionError("index_via_roots: zero symbol");
  std::vector<cplx> c(static_cast<std::size_t>(s.hi() - s.lo() + 1));
  for (const auto& [n, v] : s.coeffs()) c[n - s.lo()] = v;
  int inside = 0;
  for (cplx r : polynomial_roots(c)) {
    if (std::abs(std::abs(r) - 1.0) < kRootGuard)
      throw PreconditionError("index_via_roots: root within guard band of the unit circle");
    if (std::abs(r) < 1.0) ++inside;
  }
  return inside + s.lo();
}

/// Power series of 1/s for analytic s with s(0) != 0, to the given degree.
inline Symbol analytic_reciprocal(const Symbol& s, int degree) {
  if (!is_analytic(s, 0.0) || s[0] == cplx{}) throw PreconditionError("analytic_reciprocal: need analytic s with s(0) != 0");
  std::vector<cplx> inv(static_cast<std::size_t>(degree + 1));
  inv[0] = 1.0 / s[0];
  for (int n = 1; n <= degree; ++n) {
    cplx acc{};
    for (int k = 1; k <= std::min(n, s.hi()); ++k) acc += s[k] * inv[n - k];
    inv[n] = -acc * inv[0];
  }
  std::vector<std::pair<int, cplx>> terms;
  for (int n = 0; n <= degree; ++n) terms.emplace_back(n, inv[n]);
  return make_symbol(terms);
}

struct ShiftedAdjointSolution {
  CoeffVector f;
  double condition = 0.0;  ///< 2-norm condition number of the truncated Toeplitz system
  bool flagged = false;    ///< condition number above 1e12
  double residual = 0.0;   ///< ||(S*_{alpha,0} - lambda) f - g|| on modes <= M
};

/// Solves (S*_{alpha,0} - lambda) f = g: Qf = -Qg / lambda, then (T_{conj alpha} - lambda) Pf = Pg + P(conj(alpha) Qg) / lambda
/// with the Toeplitz operator truncated to modes [0, M].
inline ShiftedAdjointSolution solve_shifted_adjoint(const Symbol& alpha, cplx lambda, const CoeffVector& g, int M) {
  if (lambda == cplx{}) throw PreconditionError("solve_shifted_adjoint: lambda must be nonzero");
  if (M < 0 || g.window().hi > M) throw PreconditionError("solve_shifted_adjoint: g must live on modes <= M");
  const Symbol abar = alpha.conj();
  const CoeffVector qf = (-1.0 / lambda) * riesz_q(g);
  const CoeffVector rhs_full = riesz_p(g) + (1.0 / lambda) * riesz_p(multiply(abar, riesz_q(g)));

  const int n = M + 1;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m <= M; ++m)
    for (int k = 0; k <= M; ++k) A(m, k) = abar[m - k];
  A.diagonal().array() -= lambda;
  Eigen::VectorXcd rhs(n);
  for (int m = 0; m <= M; ++m) rhs(m) = rhs_full[m];

  ShiftedAdjointSolution out;
  const Eigen::VectorXd sv = singular_values(A);
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  out.flagged = out.condition > kIllConditioned;
  const Eigen::VectorXcd pf = A.partialPivLu().solve(rhs);
  out.f = qf + CoeffVector({0, M}, pf);

  const CoeffVector res = apply_adjoint(alpha, Symbol{}, out.f) - lambda * out.f - g;
  double sq = 0.0;
  for (int m = res.window().lo; m <= std::min(M, res.window().hi); ++m) sq += std::norm(res[m]);
  out.residual = std::sqrt(sq);
  return out;
}

}  // namespace circleop
