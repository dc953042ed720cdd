#pragma once

// Operator norm of S_{alpha,beta}: truncation SVD oracle, sup-norm bounds, and the
// infimum formula over analytic k (the "ny" objective), minimized by Nelder-Mead.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "circleop/linalg.hpp"
#include "circleop/operator.hpp"
#include "circleop/parallel.hpp"
#include "circleop/symbol.hpp"

namespace circleop {

inline constexpr double kNormConvTol = 1e-4;
inline constexpr double kNyTol = 1e-2;

struct NormEstimate {
  double value = 0.0;
  int M = 0;
  bool converged = false;  ///< |value_M - value_{M/2}| < kNormConvTol
};

/// Largest singular value of the square truncation on [-M, M].
inline NormEstimate operator_norm(const Symbol& alpha, const Symbol& beta, int M) {
  const int r = std::max(alpha.radius(), beta.radius());
  if (M < 4 * r || M < 1)
    throw PreconditionError("operator_norm: M=" + std::to_string(M) + " must be at least 4x support radius " +
                            std::to_string(r));
  NormEstimate e;
  e.M = M;
  e.value = largest_singular_value(build_matrix(alpha, beta, M, Truncation::square).entries);
  const double half = largest_singular_value(build_matrix(alpha, beta, M / 2, Truncation::square).entries);
  e.converged = std::abs(e.value - half) < kNormConvTol;
  return e;
}

struct NormBounds {
  double lower = 0.0;  ///< max(|alpha|_inf, |beta|_inf)
  double upper = 0.0;  ///< sqrt(|alpha|_inf^2 + |beta|_inf^2)
};

inline NormBounds norm_bounds(const Symbol& alpha, const Symbol& beta, int n_points) {
  const double a = sup_norm(alpha, n_points);
  const double b = sup_norm(beta, n_points);
  return {std::max(a, b), std::hypot(a, b)};
}

namespace detail {

// Precomputed grid data for the infimum objective.
struct NyProblem {
  int deg = 0;
  std::vector<double> half_sum;   // (|a|^2 + |b|^2) / 2
  std::vector<double> half_diff;  // (|a|^2 - |b|^2) / 2
  std::vector<cplx> product;      // a conj(b)
  std::vector<cplx> powers;       // z_j^p, row-major by grid point

  NyProblem(const Symbol& alpha, const Symbol& beta, int deg_, int n_points) : deg(deg_) {
    const GridSampling a = sample(alpha, n_points);
    const GridSampling b = sample(beta, n_points);
    check_grid(n_points, deg);
    const auto n = static_cast<std::size_t>(n_points);
    half_sum.resize(n);
    half_diff.resize(n);
    product.resize(n);
    powers.resize(n * (deg + 1));
    for (std::size_t j = 0; j < n; ++j) {
      const double na = std::norm(a.values[j]);
      const double nb = std::norm(b.values[j]);
      half_sum[j] = 0.5 * (na + nb);
      half_diff[j] = 0.5 * (na - nb);
      product[j] = a.values[j] * std::conj(b.values[j]);
      for (int p = 0; p <= deg; ++p) powers[j * (deg + 1) + p] = std::polar(1.0, p * a.theta(static_cast<int>(j)));
    }
  }

  double value(const std::vector<cplx>& k) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < product.size(); ++j) {
      cplx kv{};
      for (int p = 0; p <= deg; ++p) kv += k[p] * powers[j * (deg + 1) + p];
      worst = std::max(worst, half_sum[j] + std::hypot(std::abs(product[j] - kv), half_diff[j]));
    }
    return worst;
  }

  double value(const gsl_vector* x) const {
    std::vector<cplx> k(static_cast<std::size_t>(deg + 1));
    for (int p = 0; p <= deg; ++p) k[p] = {gsl_vector_get(x, 2 * p), gsl_vector_get(x, 2 * p + 1)};
    return value(k);
  }
};

}  // namespace detail

/// sup over the grid of (|a|^2+|b|^2)/2 + sqrt(|a conj(b) - k|^2 + ((|a|^2-|b|^2)/2)^2).
/// Its infimum over analytic k equals ||S_{alpha,beta}||^2.
inline double ny_objective(const Symbol& alpha, const Symbol& beta, const Symbol& k, int n_points) {
  if (!is_analytic(k)) throw PreconditionError("ny_objective: k must be analytic");
  std::vector<cplx> coeffs(static_cast<std::size_t>(k.hi() + 1));
  for (const auto& [n, c] : k.coeffs())
    if (n >= 0) coeffs[n] = c;
  return detail::NyProblem(alpha, beta, k.hi(), n_points).value(coeffs);
}

struct NyEstimate {
  double value = 0.0;  ///< approximate infimum, comparable with ||S||^2
  Symbol k;            ///< minimizing analytic polynomial
  double initial = 0.0;  ///< objective at the starting point P(alpha conj(beta)) truncated to degree deg
  bool certified = false;  ///< every restart stalled before exhausting its iteration budget
  int evaluations = 0;
};

struct NyOptions {
  int restarts = 6;         ///< independent starts; the first is the unperturbed k0
  int rounds = 20;          ///< Nelder-Mead re-runs from the best point within a restart
  double perturbation = 0.1;
  double step = 0.1;        ///< initial simplex edge
  double size_tol = 1e-10;
  unsigned seed = 42;
};

/// Minimizes ny_objective over analytic polynomials of degree <= deg.
inline NyEstimate ny_norm_estimate(const Symbol& alpha, const Symbol& beta, int deg, int n_points, int iters,
                                   const NyOptions& opt = {}) {
  gsl_set_error_handler_off();
  if (deg < 0) throw PreconditionError("ny_norm_estimate: deg must be nonnegative");
  if (iters < 1 || opt.restarts < 1 || opt.rounds < 1) throw PreconditionError("ny_norm_estimate: empty budget");
  const detail::NyProblem problem(alpha, beta, deg, n_points);
  const Symbol target = alpha * beta.conj();
  const std::size_t dim = 2 * static_cast<std::size_t>(deg + 1);

  auto to_k = [deg](const std::vector<double>& x) {
    std::vector<cplx> k(static_cast<std::size_t>(deg + 1));
    for (int p = 0; p <= deg; ++p) k[p] = {x[2 * p], x[2 * p + 1]};
    return k;
  };

  std::vector<double> x0(dim, 0.0);
  for (int p = 0; p <= deg; ++p) {
    x0[2 * p] = target[p].real();
    x0[2 * p + 1] = target[p].imag();
  }

  struct Outcome {
    std::vector<double> x;
    double value = 0.0;
    bool stalled = true;
    int evaluations = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(opt.restarts));

  auto objective = [](const gsl_vector* x, void* params) {
    return static_cast<const detail::NyProblem*>(params)->value(x);
  };

  parallel_for(outcomes.size(), [&](std::size_t r) {
    Outcome& out = outcomes[r];
    out.x = x0;
    if (r > 0) {
      std::mt19937_64 rng(opt.seed + 7919u * static_cast<unsigned>(r));
      std::normal_distribution<double> noise(0.0, opt.perturbation);
      for (auto& v : out.x) v += noise(rng);
    }
    gsl_multimin_function fn{objective, dim, const_cast<detail::NyProblem*>(&problem)};
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), gsl_vector_free);
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> nm(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), gsl_multimin_fminimizer_free);
    gsl_vector_set_all(step.get(), opt.step);
    out.value = problem.value(to_k(out.x));

    for (int round = 0; round < opt.rounds; ++round) {
      for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x.get(), i, out.x[i]);
      gsl_multimin_fminimizer_set(nm.get(), &fn, x.get(), step.get());
      int status = GSL_CONTINUE;
      int it = 0;
      for (; it < iters && status == GSL_CONTINUE; ++it) {
        if (gsl_multimin_fminimizer_iterate(nm.get())) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(nm.get()), opt.size_tol);
      }
      out.evaluations += it;
      const double prev = out.value;
      const double found = gsl_multimin_fminimizer_minimum(nm.get());
      if (found < out.value) {
        out.value = found;
        const gsl_vector* best = gsl_multimin_fminimizer_x(nm.get());
        for (std::size_t i = 0; i < dim; ++i) out.x[i] = gsl_vector_get(best, i);
      }
      out.stalled = status == GSL_SUCCESS;
      if (out.stalled && prev - out.value < 1e-13) break;
    }
  });

  NyEstimate est;
  est.initial = problem.value(to_k(x0));
  std::size_t best = 0;
  est.certified = true;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].value < outcomes[best].value) best = r;
    est.certified = est.certified && outcomes[r].stalled;
    est.evaluations += outcomes[r].evaluations;
  }
  est.value = outcomes[best].value;
  const auto k = to_k(outcomes[best].x);
  std::vector<std::pair<int, cplx>> terms;
  for (int p = 0; p <= deg; ++p) terms.emplace_back(p, k[p]);
  est.k = make_symbol(terms);
  return est;
}

enum class NormCase { CaseIII, CaseIV, Unclassified };

inline const char* to_string(NormCase c) {
  switch (c) {
    case NormCase::CaseIII: return "CaseIII";
    case NormCase::CaseIV: return "CaseIV";
    default: return "Unclassified";
  }
}

struct NormCaseVerdict {
  NormCase verdict = NormCase::Unclassified;
  double implied_norm = std::numeric_limits<double>::quiet_NaN();  ///< exact norm the verdict implies
};

/// CaseIII: alpha conj(beta) analytic, norm = max of sup-norms.
/// CaseIV: |alpha| = |beta| = constant and alpha conj(beta) in the orthogonal complement of H^2,
/// norm = sqrt(|alpha|^2 + |beta|^2). Only this sufficient form of the quotient condition is tested.
inline NormCaseVerdict norm_case_classifier(const Symbol& alpha, const Symbol& beta, int n_points = 0) {
  const Symbol prod = alpha * beta.conj();
  const int n = n_points > 0 ? n_points : default_grid(prod, 1024);
  const NormBounds b = norm_bounds(alpha, beta, n);
  if (is_analytic(prod)) return {NormCase::CaseIII, b.lower};

  auto modulus_stats = [n](const Symbol& s) {
    const GridSampling g = sample(s, n);
    double mean = 0.0;
    for (auto v : g.values) mean += std::abs(v);
    mean /= n;
    double var = 0.0;
    for (auto v : g.values) var += (std::abs(v) - mean) * (std::abs(v) - mean);
    return std::pair{mean, var / n};
  };
  const auto [ma, va] = modulus_stats(alpha);
  const auto [mb, vb] = modulus_stats(beta);
  bool coanalytic_strict = true;
  for (const auto& [k, c] : prod.coeffs())
    if (k >= 0 && std::abs(c) > kEqTol) coanalytic_strict = false;
  if (va < 1e-10 && vb < 1e-10 && std::abs(ma - mb) < 1e-8 && coanalytic_strict)
    return {NormCase::CaseIV, std::hypot(ma, mb)};
  return {};
}

}  // namespace circleop
