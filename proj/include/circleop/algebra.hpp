#pragma once

// Products, zero products and commutativity of S_{alpha,beta} operators, and
// membership in the commutant of the shifts.

#include <Eigen/SVD>
#include <optional>
#include <random>
#include <string>

#include "circleop/linalg.hpp"
#include "circleop/operator.hpp"

namespace circleop {

inline constexpr double kCommuteTol = 1e-10;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kNonCommuteCert = 1e-3;

/// Exact matrix of S_{a1,b1} S_{a2,b2} on input modes [-M, M].
inline OperatorMatrix product_matrix(const Symbol& a1, const Symbol& b1, const Symbol& a2, const Symbol& b2, int M) {
  return matrix_from_columns(ModeWindow::symmetric(M), [&](int n) {
    return apply(a1, b1, apply(a2, b2, CoeffVector::monomial(n)));
  });
}

struct ProductVerdict {
  bool is_product = false;  ///< the product is S_{alpha,beta} with the symbols below
  Symbol alpha;
  Symbol beta;
};

/// S_{a1,b1} S_{a2,b2} = S_{a1 a2, b1 b2} iff a1 = b1, or a2 is analytic and b2 is co-analytic.
inline ProductVerdict product_form(const Symbol& a1, const Symbol& b1, const Symbol& a2, const Symbol& b2) {
  if (a1.approx_equal(b1) || (is_analytic(a2) && is_coanalytic(b2))) return {true, a1 * a2, b1 * b2};
  return {};
}

enum class ZeroClass { ZeroByI, ZeroByII, ZeroByIII, ZeroByIV, NonZero };

inline const char* to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::ZeroByI: return "ZeroByI";
    case ZeroClass::ZeroByII: return "ZeroByII";
    case ZeroClass::ZeroByIII: return "ZeroByIII";
    case ZeroClass::ZeroByIV: return "ZeroByIV";
    default: return "NonZero";
  }
}

struct ZeroProductVerdict {
  ZeroClass verdict = ZeroClass::NonZero;
  /// ||S1 S2 f|| for a random unit vector f; only computed for NonZero.
  double witness_norm = 0.0;
  bool certified = false;
};

/// The product vanishes iff (i) a1 = b1 and a1 a2 = b1 b2 = 0, (ii) a1 = b2 = 0 and a2 analytic,
/// (iii) a2 = b1 = 0 and b2 co-analytic, or (iv) a2 = b2 = 0. The lowest satisfied clause is reported.
inline ZeroProductVerdict zero_product_class(const Symbol& a1, const Symbol& b1, const Symbol& a2, const Symbol& b2,
                                             unsigned seed = 42) {
  auto zero = [](const Symbol& s) { return s.approx_equal(Symbol{}); };
  if (a1.approx_equal(b1) && zero(a1 * a2) && zero(b1 * b2)) return {ZeroClass::ZeroByI, 0.0, true};
  if (zero(a1) && zero(b2) && is_analytic(a2)) return {ZeroClass::ZeroByII, 0.0, true};
  if (zero(a2) && zero(b1) && is_coanalytic(b2)) return {ZeroClass::ZeroByIII, 0.0, true};
  if (zero(a2) && zero(b2)) return {ZeroClass::ZeroByIV, 0.0, true};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  const int R = 8 + std::max({a1.radius(), b1.radius(), a2.radius(), b2.radius()});
  CoeffVector f(ModeWindow::symmetric(R));
  for (int m = -R; m <= R; ++m) f.at(m) = {d(rng), d(rng)};
  f = (1.0 / f.norm()) * f;
  ZeroProductVerdict v;
  v.witness_norm = apply(a1, b1, apply(a2, b2, f)).norm();
  v.certified = v.witness_norm > 1e-8;
  return v;
}

/// sigma_max of S1 S2 - S2 S1 on input modes |n| <= M/2, each column computed exactly.
inline double commutator_residual(const Symbol& a1, const Symbol& b1, const Symbol& a2, const Symbol& b2, int M) {
  const int r = std::max({a1.radius(), b1.radius(), a2.radius(), b2.radius()});
  if (M < 4 * r || M < 2)
    throw PreconditionError("commutator_residual: M=" + std::to_string(M) + " below 4x support radius");
  const OperatorMatrix C = matrix_from_columns(ModeWindow::symmetric(M / 2), [&](int n) {
    const CoeffVector e = CoeffVector::monomial(n);
    return apply(a1, b1, apply(a2, b2, e)) - apply(a2, b2, apply(a1, b1, e));
  });
  return largest_singular_value(C.entries);
}

enum class CommuteKind { ByI, ByII, ByIII, NonCommuting, Unclassified };

inline const char* to_string(CommuteKind k) {
  switch (k) {
    case CommuteKind::ByI: return "ByI";
    case CommuteKind::ByII: return "ByII";
    case CommuteKind::ByIII: return "ByIII";
    case CommuteKind::NonCommuting: return "NonCommuting";
    default: return "Unclassified";
  }
}

struct ClauseIIIWitness {
  cplx a, b, c;  ///< a alpha1 + b alpha2 = a beta1 + b beta2 = c
};

struct CommuteVerdict {
  CommuteKind verdict = CommuteKind::Unclassified;
  /// Set whenever clause (iii) holds, even if a higher-priority clause decided the verdict.
  std::optional<ClauseIIIWitness> clause_iii;
  double smallest_sv = 0;  ///< of the stacked clause (iii) coefficient system
  double residual = 0;     ///< commutator_residual (NonCommuting / Unclassified only)
};

/// Solves clause (iii): a (a1 - b1) + b (a2 - b2) = 0 at every mode and a a1 + b a2 has no
/// nonconstant modes. The pair (a, b) is the smallest right singular vector of the stacked system.
inline std::optional<ClauseIIIWitness> solve_clause_iii(const Symbol& a1, const Symbol& b1, const Symbol& a2,
                                                        const Symbol& b2, double* smallest_sv = nullptr) {
  const Symbol d1 = a1 - b1;
  const Symbol d2 = a2 - b2;
  const int r = std::max({a1.radius(), b1.radius(), a2.radius(), b2.radius()});
  Eigen::MatrixXcd A(2 * (2 * r + 1), 2);
  int row = 0;
  for (int n = -r; n <= r; ++n) {
    A.row(row++) << d1[n], d2[n];
    if (n != 0) A.row(row++) << a1[n], a2[n];
  }
  A.conservativeResize(row, 2);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  const double sv = svd.singularValues().size() == 2 ? svd.singularValues()(1) : 0.0;
  if (smallest_sv) *smallest_sv = sv;
  if (sv >= kRankTol) return std::nullopt;
  Eigen::Vector2cd ab = svd.matrixV().col(1);
  ab /= std::abs(ab(0)) > kRankTol ? ab(0) : ab(1);
  const Symbol lhs = ab(0) * a1 + ab(1) * a2;
  const Symbol rhs = ab(0) * b1 + ab(1) * b2;
  const cplx c = lhs[0];
  const double tol = kRankTol * std::max(1.0, std::max(lhs.max_abs_coeff(), rhs.max_abs_coeff()));
  if (!lhs.approx_equal(Symbol::constant(c), tol) || !rhs.approx_equal(Symbol::constant(c), tol)) return std::nullopt;
  return ClauseIIIWitness{ab(0), ab(1), c};
}

/// Commutativity: (i) a1, a2 analytic and b1, b2 co-analytic, (ii) a1 = b1 and a2 = b2,
/// (iii) constants a, b (not both 0) with a a1 + b a2 = a b1 + b b2 = c. Reported in the order II, I, III.
inline CommuteVerdict commute_check(const Symbol& a1, const Symbol& b1, const Symbol& a2, const Symbol& b2) {
  CommuteVerdict v;
  v.clause_iii = solve_clause_iii(a1, b1, a2, b2, &v.smallest_sv);
  if (a1.approx_equal(b1) && a2.approx_equal(b2)) {
    v.verdict = CommuteKind::ByII;
  } else if (is_analytic(a1) && is_analytic(a2) && is_coanalytic(b1) && is_coanalytic(b2)) {
    v.verdict = CommuteKind::ByI;
  } else if (v.clause_iii) {
    v.verdict = CommuteKind::ByIII;
  } else {
    const int r = std::max({a1.radius(), b1.radius(), a2.radius(), b2.radius()});
    v.residual = commutator_residual(a1, b1, a2, b2, std::max(32, 4 * r));
    v.verdict = v.residual > kNonCommuteCert ? CommuteKind::NonCommuting : CommuteKind::Unclassified;
  }
  return v;
}

struct IntertwiningResidual {
  double q = 0.0;  ///< max ||psi1 Q(phi2 f) - psi2 Q(phi1 f)|| over random unit analytic f
  double p = 0.0;  ///< max ||psi1 P(phi2 g) - psi2 P(phi1 g)|| over random unit co-analytic g
  double max() const { return std::max(q, p); }
};

/// Residuals of the two commutation equations for general (phi, psi) pairs.
inline IntertwiningResidual intertwining_residual(const Symbol& phi1, const Symbol& psi1, const Symbol& phi2, const Symbol& psi2,
                                      int trials, unsigned seed = 42, int degree = 8) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  IntertwiningResidual out;
  for (int t = 0; t < trials; ++t) {
    CoeffVector f({0, degree});
    CoeffVector g({-degree - 1, -1});
    for (int m = 0; m <= degree; ++m) f.at(m) = {d(rng), d(rng)};
    for (int m = -degree - 1; m <= -1; ++m) g.at(m) = {d(rng), d(rng)};
    f = (1.0 / f.norm()) * f;
    g = (1.0 / g.norm()) * g;
    const CoeffVector eq_q =
        multiply(psi1, riesz_q(multiply(phi2, f))) - multiply(psi2, riesz_q(multiply(phi1, f)));
    const CoeffVector eq_p =
        multiply(psi1, riesz_p(multiply(phi2, g))) - multiply(psi2, riesz_p(multiply(phi1, g)));
    out.q = std::max(out.q, eq_q.norm());
    out.p = std::max(out.p, eq_p.norm());
  }
  return out;
}

/// The commutation equations themselves: phi = alpha on H^2, phi = beta on the complement, psi = alpha - beta.
/// Both residuals vanish iff the two operators commute.
inline IntertwiningResidual commutation_equations_residual(const Symbol& a1, const Symbol& b1, const Symbol& a2,
                                                    const Symbol& b2, int trials, unsigned seed = 42) {
  const IntertwiningResidual on_h2 = intertwining_residual(a1, a1 - b1, a2, a2 - b2, trials, seed);
  const IntertwiningResidual on_complement = intertwining_residual(b1, a1 - b1, b2, a2 - b2, trials, seed);
  return {on_h2.q, on_complement.p};
}

/// S_{alpha,beta} commutes with S_{z,zbar} iff alpha is analytic and beta co-analytic.
inline bool shift_commutant_check(const Symbol& alpha, const Symbol& beta) {
  return is_analytic(alpha) && is_coanalytic(beta);
}

struct TwoShiftVerdict {
  bool is_singular_integral = false;  ///< T = S_{alpha,beta} with alpha analytic, beta co-analytic
  double residual_forward = 0.0;      ///< interior commutator with S_{z,0}
  double residual_backward = 0.0;     ///< interior commutator with S_{0,zbar}
  Symbol alpha;
  Symbol beta;
  std::string reason;
};

/// T commutes with both S_{z,0} and S_{0,zbar} iff T = S_{alpha,beta} with alpha analytic and beta co-analytic.
inline TwoShiftVerdict two_shift_commutant_check(const OperatorMatrix& T, double tol = kCommuteTol) {
  if (!T.is_square() || T.in_window.lo != -T.in_window.hi || T.in_window.hi < 4)
    throw PreconditionError("two_shift_commutant_check: need a square symmetric window of radius >= 4");
  const int M = T.in_window.hi;
  TwoShiftVerdict v;
  v.residual_forward = interior_commutator(T, build_matrix(Symbol::z(), Symbol{}, M, Truncation::square));
  v.residual_backward = interior_commutator(T, build_matrix(Symbol{}, Symbol::zbar(), M, Truncation::square));
  if (v.residual_forward > tol || v.residual_backward > tol) {
    v.reason = v.residual_forward > tol ? "does not commute with S_{z,0}" : "does not commute with S_{0,zbar}";
    return v;
  }
  const StructureVerdict s = verify_structure(T);
  if (!s.is_singular_integral) {
    v.reason = "not of the form S_{alpha,beta}";
    return v;
  }
  if (!is_analytic(s.alpha) || !is_coanalytic(s.beta)) {
    v.reason = "reconstructed symbols have the wrong analyticity";
    return v;
  }
  v.is_singular_integral = true;
  v.alpha = s.alpha;
  v.beta = s.beta;
  return v;
}

}  // namespace circleop
