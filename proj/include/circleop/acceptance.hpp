#pragma once

// End-to-end acceptance checks, one per criterion, shared by the test driver and `circleop selftest`.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circleop/algebra.hpp"
#include "circleop/norm.hpp"
#include "circleop/spectral.hpp"
#include "circleop/structure.hpp"

namespace circleop {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace acceptance {

inline constexpr double kPi = std::numbers::pi;

inline cplx rand_c(std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return {d(rng), d(rng)};
}

inline Symbol rand_symbol(std::mt19937_64& rng, int lo, int hi) {
  std::vector<std::pair<int, cplx>> t;
  for (int n = lo; n <= hi; ++n) t.emplace_back(n, rand_c(rng));
  return make_symbol(t);
}

inline CoeffVector rand_vector(std::mt19937_64& rng, ModeWindow w) {
  CoeffVector v(w);
  for (int m = w.lo; m <= w.hi; ++m) v.at(m) = rand_c(rng);
  return v;
}

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Detail {
  std::ostringstream os;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      os << "FAIL[" << what << "] ";
    }
  }
  void note(const std::string& s) { os << s << ' '; }
};

struct Quad {
  Symbol a1, b1, a2, b2;
};

inline const Symbol Z = Symbol::z();
inline const Symbol ZB = Symbol::zbar();
inline const Symbol ONE = Symbol::one();
inline Symbol mono(int n) { return Symbol::monomial(n); }

inline CriterionResult matrix_structure() {
  Detail d;
  std::mt19937_64 rng(101);
  double worst_entry = 0.0, worst_round = 0.0;
  for (int t = 0; t < 50; ++t) {
    std::uniform_int_distribution<int> deg(0, 5);
    const int da = deg(rng), db = deg(rng);
    const Symbol a = rand_symbol(rng, -da, da), b = rand_symbol(rng, -db, db);
    const int M = 12;
    const OperatorMatrix T = build_matrix(a, b, M, Truncation::exact);
    for (int n = -M; n <= M; ++n)
      for (int m = T.out_window.lo; m <= T.out_window.hi; ++m)
        worst_entry = std::max(worst_entry, std::abs(T.entry(m, n) - (n >= 0 ? a : b)[m - n]));
    const StructureVerdict v = verify_structure(T);
    d.check(v.is_singular_integral, "verify_structure rejected pair " + std::to_string(t));
    worst_round = std::max({worst_round, (v.alpha - a).max_abs_coeff(), (v.beta - b).max_abs_coeff()});
  }
  d.check(worst_entry <= 1e-12, "entry");
  d.check(worst_round <= 1e-12, "round trip");
  d.note("max entry error " + fmt("%.2e", worst_entry) + ", round trip " + fmt("%.2e", worst_round));
  return {1, "matrix structure", d.ok, d.os.str()};
}

inline CriterionResult isometry() {
  Detail d;
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CoeffVector f = rand_vector(rng, ModeWindow::symmetric(20));
    worst = std::max(worst, std::abs(apply(Z, ZB, f).norm() - f.norm()) / f.norm());
  }
  d.check(worst <= 1e-12, "norm defect");
  d.note("max relative defect " + fmt("%.2e", worst));
  return {2, "isometry of S_{z,zbar}", d.ok, d.os.str()};
}

inline CriterionResult norm_endpoints() {
  Detail d;
  const double n1 = operator_norm(ONE, ZB, 64).value, n2 = operator_norm(ONE, Z, 64).value;
  const NormBounds b1 = norm_bounds(ONE, ZB, 1024), b2 = norm_bounds(ONE, Z, 1024);
  d.check(std::abs(n1 - 1.0) <= 1e-6, "|S_{1,zbar}| = 1");
  d.check(std::abs(n2 - std::sqrt(2.0)) <= 1e-6, "|S_{1,z}| = sqrt2");
  d.check(b1.lower - 1e-8 <= n1 && n1 <= b1.upper + 1e-8, "bounds (1,zbar)");
  d.check(b2.lower - 1e-8 <= n2 && n2 <= b2.upper + 1e-8, "bounds (1,z)");
  d.note("|S_{1,zbar}| = " + fmt("%.10f", n1) + " |S_{1,z}| = " + fmt("%.10f", n2));
  return {3, "norm endpoints", d.ok, d.os.str()};
}

inline CriterionResult strict_middle() {
  Detail d;
  const Symbol c = 0.5 * (Z + ZB);
  const double v128 = operator_norm(ONE, c, 128).value, v256 = operator_norm(ONE, c, 256).value;
  d.check(v256 >= 1.001 && v256 <= 1.4132, "range");
  d.check(std::abs(v256 - v128) < 1e-4, "M=128 -> 256 change");
  d.note("M=256: " + fmt("%.8f", v256) + ", change " + fmt("%.2e", std::abs(v256 - v128)));
  return {4, "strict-middle norm", d.ok, d.os.str()};
}

inline CriterionResult ny_reading() {
  Detail d;
  const std::vector<std::pair<std::string, Symbol>> cases = {{"zbar", ZB}, {"z", Z}, {"(z+zbar)/2", 0.5 * (Z + ZB)}};
  for (const auto& [name, beta] : cases) {
    const double svd = operator_norm(ONE, beta, 256).value;
    const NyEstimate e = ny_norm_estimate(ONE, beta, 8, 256, 4000);
    d.check(std::abs(e.value - svd * svd) <= kNyTol, name);
    d.note("beta=" + name + ": inf " + fmt("%.5f", e.value) + " vs norm^2 " + fmt("%.5f", svd * svd) + ";");
  }
  return {5, "squared-norm reading of the infimum formula", d.ok, d.os.str()};
}

inline CriterionResult products() {
  Detail d;
  std::mt19937_64 rng(106);
  const std::vector<Quad> suite = {
      {Z, ZB, Z, ZB},
      {ONE, 2.0 * ONE, ZB, ONE},
      {ONE + Z, ONE + Z, ZB, Z},
      {ZB, Z, ONE + Z, ZB},
      {Z, ONE, ZB, Z},
      {Z + ZB, Z + ZB, mono(2), mono(-2)},
      {mono(2), ZB, ONE + ZB, ONE + Z},
      {rand_symbol(rng, -2, 2), rand_symbol(rng, -2, 2), rand_symbol(rng, 0, 2), rand_symbol(rng, -2, 0)},
      {rand_symbol(rng, -2, 2), rand_symbol(rng, -2, 2), rand_symbol(rng, -2, 2), rand_symbol(rng, -2, 2)},
      {rand_symbol(rng, -1, 1), Symbol{}, rand_symbol(rng, -1, 1), rand_symbol(rng, -1, 1)},
  };
  int products = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Quad& q = suite[i];
    const auto v = product_form(q.a1, q.b1, q.a2, q.b2);
    const auto s = verify_structure(product_matrix(q.a1, q.b1, q.a2, q.b2, 12));
    d.check(v.is_product == s.is_singular_integral, "case " + std::to_string(i));
    products += v.is_product;
  }
  d.check(products > 0 && products < static_cast<int>(suite.size()), "both outcomes");
  const std::vector<std::pair<Quad, ZeroClass>> zero = {
      {{Symbol{}, Symbol{}, Z, ZB}, ZeroClass::ZeroByI},
      {{Symbol{}, ONE + ZB, Z + mono(2), Symbol{}}, ZeroClass::ZeroByII},
      {{Z + ONE, Symbol{}, Symbol{}, ZB + mono(-3)}, ZeroClass::ZeroByIII},
      {{Z, ZB, Symbol{}, Symbol{}}, ZeroClass::ZeroByIV},
  };
  for (const auto& [q, cls] : zero) {
    d.check(zero_product_class(q.a1, q.b1, q.a2, q.b2).verdict == cls, std::string("class ") + to_string(cls));
    d.check(product_matrix(q.a1, q.b1, q.a2, q.b2, 10).entries.cwiseAbs().maxCoeff() <= 1e-12,
            std::string("zero matrix ") + to_string(cls));
  }
  d.note(std::to_string(products) + "/10 products, 4 zero-product clauses exhibited");
  return {6, "products and zero products", d.ok, d.os.str()};
}

inline CriterionResult commutativity() {
  Detail d;
  const std::vector<Quad> suite = {
      {Z, ZB, mono(2), mono(-3)},
      {ONE + Z, ZB, mono(3), 2.0 * ONE + mono(-2)},
      {ONE + ZB, ONE + ZB, Z, Z},
      {Z + ZB, Z + ZB, 2.0 * ZB, 2.0 * ZB},
      {Z, ZB, ONE - Z, ONE - ZB},
      {ZB, Z, 3.0 * ONE + 2.0 * ZB, 3.0 * ONE + 2.0 * Z},
      {Symbol{}, Symbol{}, ZB, Z},
      {ZB + mono(2), 2.0 * Z, 5.0 * ONE - ZB - mono(2), 5.0 * ONE - 2.0 * Z},
      {Z, ZB, ZB, Z},
      {ONE, Z, ZB, ONE},
      {Z, Z, ZB, ONE},
      {ONE + Z, ZB, ONE, Z},
  };
  int negatives = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Quad& q = suite[i];
    const auto v = commute_check(q.a1, q.b1, q.a2, q.b2);
    const double r = commutator_residual(q.a1, q.b1, q.a2, q.b2, 32);
    const bool commutes = v.verdict == CommuteKind::ByI || v.verdict == CommuteKind::ByII || v.verdict == CommuteKind::ByIII;
    d.check(commutes == (r <= kCommuteTol), "case " + std::to_string(i));
    if (!commutes) {
      ++negatives;
      d.check(r >= 1e-3, "negative residual " + std::to_string(i));
    }
  }
  d.check(negatives == 4, "four negatives");
  d.note(std::to_string(12 - negatives) + " commuting, " + std::to_string(negatives) + " non-commuting");
  return {7, "commutativity", d.ok, d.os.str()};
}

inline CriterionResult shift_commutant() {
  Detail d;
  const int M = 20;
  const OperatorMatrix shift = build_matrix(Z, ZB, M, Truncation::square);
  const OperatorMatrix R = build_remark_operator(M);
  const double rr = interior_commutator(R, shift);
  d.check(rr <= 1e-12, "remark operator commutes with S_{z,zbar}");
  d.check(!verify_structure(R).is_singular_integral, "remark operator is not S_{alpha,beta}");
  d.check(!two_shift_commutant_check(R).is_singular_integral, "remark operator fails two-shift check");
  const OperatorMatrix T = build_matrix(mono(2), ZB, M, Truncation::square);
  const double tr = interior_commutator(T, shift);
  d.check(tr <= 1e-12, "S_{z^2,zbar} commutes");
  d.check(verify_structure(T).is_singular_integral, "S_{z^2,zbar} structure");
  d.check(two_shift_commutant_check(T).is_singular_integral, "S_{z^2,zbar} two-shift");
  d.note("commutator residuals " + fmt("%.1e", rr) + " / " + fmt("%.1e", tr));
  return {8, "shift commutant", d.ok, d.os.str()};
}

inline CriterionResult invariant_subspaces() {
  Detail d;
  const int M = 32;
  const BlaschkeProduct half{1.0, 0, {0.5}}, trivial{1.0, 0, {}};
  const double r = invariance_residual(invariant_subspace_basis(half, BlaschkeProduct{1.0, 1, {}}, M), Z, ZB);
  d.check(r <= 1e-10, "Blaschke invariance");
  const std::vector<std::pair<SubspaceBasis, bool>> suite = {
      {zero_subspace(M), true},
      {hardy_basis(M), true},
      {hardy_perp_basis(M), true},
      {full_basis(M), true},
      {invariant_subspace_basis(half, trivial, M), false},
      {invariant_subspace_basis(BlaschkeProduct{1.0, 1, {}}, BlaschkeProduct{1.0, 0, {cplx(0, -0.4)}}, M), false},
  };
  int accepted = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const bool red = reducing_check(suite[i].first).reducing;
    accepted += red;
    d.check(red == suite[i].second, "subspace " + std::to_string(i));
  }
  d.note("invariance residual " + fmt("%.1e", r) + ", " + std::to_string(accepted) + "/6 reducing");
  return {9, "invariant and reducing subspaces", d.ok, d.os.str()};
}

inline CriterionResult compactness() {
  Detail d;
  double spread = 0.0;
  const std::vector<std::pair<Symbol, Symbol>> pairs = {
      {Z, ZB}, {make_symbol({{0, 2.0}, {1, 1.0}}), ZB}, {ZB, ONE}, {Symbol{}, Symbol{}}};
  for (const auto& [a, b] : pairs) {
    const auto w = noncompactness_witness(a, b, 16);
    for (double x : w.analytic) spread = std::max(spread, std::abs(x - w.analytic.front()));
    for (double x : w.coanalytic) spread = std::max(spread, std::abs(x - w.coanalytic.front()));
    d.check(std::abs(w.analytic.front() - a.l2_norm()) <= 1e-12, "analytic level");
    d.check(std::abs(w.coanalytic.front() - b.l2_norm()) <= 1e-12, "co-analytic level");
  }
  d.check(spread <= 1e-12, "constant sequences");
  const OperatorMatrix K{{0, 0}, {-1, -1}, Eigen::MatrixXcd::Ones(1, 1)};
  const double ratio = compact_distance_ratio(ZB, ONE, K, 16);
  const double norm = largest_singular_value(build_matrix(ZB, ONE, 16, Truncation::exact).entries);
  d.check(std::abs(ratio - 1.0 / std::sqrt(2.0)) <= 1e-6, "ratio 1/sqrt2");
  d.check(std::abs(norm - std::sqrt(2.0)) <= 1e-6, "|S_{zbar,1}| = sqrt2");
  d.note("ratio " + fmt("%.10f", ratio) + ", norm " + fmt("%.10f", norm));
  return {10, "compactness obstructions", d.ok, d.os.str()};
}

inline CriterionResult spectrum() {
  Detail d;
  const GridSpec grid{-2, 2, -2, 2, 41, 1e-3};
  const SpectrumReport rep = spectrum_continuous(Z, ZB, grid, 1024);
  int off_band = 0, disk_ok = 0, agree = 0;
  std::vector<std::size_t> off;
  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    const auto& p = rep.points[k];
    if (std::abs(std::abs(p.lambda) - 1.0) < 0.05) continue;
    ++off_band;
    off.push_back(k);
    disk_ok += p.in_spectrum == (std::abs(p.lambda) < 1.0);
  }
  std::vector<double> sv(off.size());
  parallel_for(off.size(), [&](std::size_t i) { sv[i] = resolvent_min_sv(Z, ZB, rep.points[off[i]].lambda, 128); });
  for (std::size_t i = 0; i < off.size(); ++i) agree += rep.points[off[i]].in_spectrum == (sv[i] <= 0.1);
  const double share = static_cast<double>(agree) / off_band;
  d.check(disk_ok == off_band, "formula gives the closed disk");
  d.check(share >= 0.99, "oracle agreement >= 99%");

  const SpectrumReport half = half_spectrum(Z, HalfSide::AlphaZeroBeta, grid, 1024);
  int half_ok = 0, half_n = 0;
  bool zero_in = false;
  for (const auto& p : half.points) {
    if (std::abs(p.lambda) == 0.0) zero_in = p.in_spectrum;
    if (std::abs(std::abs(p.lambda) - 1.0) < 0.05) continue;
    ++half_n;
    half_ok += p.in_spectrum == (std::abs(p.lambda) < 1.0);
  }
  d.check(half_ok == half_n && zero_in, "half spectrum of S_{z,0}");
  d.note("disk " + std::to_string(disk_ok) + "/" + std::to_string(off_band) + ", oracle agreement " +
         std::to_string(agree) + "/" + std::to_string(off_band) + " = " + fmt("%.2f%%", 100.0 * share) +
         ", half spectrum " + std::to_string(half_ok) + "/" + std::to_string(half_n));
  return {11, "spectrum", d.ok, d.os.str()};
}

inline CriterionResult index_equivalence() {
  Detail d;
  std::mt19937_64 rng(112);
  std::uniform_int_distribution<int> lo(-4, 0), hi(0, 4);
  int tested = 0, mismatches = 0;
  while (tested < 50) {
    const Symbol s = rand_symbol(rng, lo(rng), hi(rng));
    if (s.is_zero() || min_distance(sample(s, 4096), 0.0) < 1e-2) continue;
    mismatches += index_via_roots(s) != winding_number_adaptive(s, 0.0, 1024);
    ++tested;
  }
  d.check(mismatches == 0, "mismatch");
  d.note(std::to_string(tested - mismatches) + "/50 equal");
  return {12, "index via roots equals winding number", d.ok, d.os.str()};
}

inline CriterionResult shifted_adjoint_solver() {
  Detail d;
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), extra(0.5, 2.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Symbol a = rand_symbol(rng, -2, 2);
    const cplx lambda = std::polar(sup_norm(a, 1024) + extra(rng), ang(rng));
    const CoeffVector g = rand_vector(rng, {-8, 8});
    const auto s = solve_shifted_adjoint(a, lambda, g, 48);
    worst = std::max(worst, s.residual / g.norm());
  }
  d.check(worst <= kSolveTol, "residual");
  d.note("max relative residual " + fmt("%.2e", worst));
  return {13, "shifted adjoint solver", d.ok, d.os.str()};
}

inline GridSampling arc_zero(int N, double start, double end, std::function<cplx(double)> carrier) {
  return sample_function(N, [=](double t) { return arc_vanishing_profile(t, start, end, 0.3) * carrier(t); });
}

inline CriterionResult injectivity() {
  Detail d;
  const auto alpha = [](int N) { return arc_zero(N, kPi / 4, 3 * kPi / 4, [](double t) { return cplx(2.0 + std::cos(t)); }); };
  const auto beta_same = [](int N) { return arc_zero(N, kPi / 4, 3 * kPi / 4, [](double t) { return 1.5 * std::polar(1.0, t); }); };
  const auto beta_other = [](int N) { return arc_zero(N, 5 * kPi / 4, 7 * kPi / 4, [](double t) { return 1.5 * std::polar(1.0, t); }); };
  const int N = 1024;
  d.check(injectivity_classifier(sample(Z, N), sample(2.0 * ONE + ZB, N), 1e-3).verdict == InjectivityCase::CaseI,
          "clause (i) scenario");
  d.check(injectivity_classifier(alpha(N), beta_other(N), 1e-3).verdict == InjectivityCase::CaseII_SInjective,
          "clause (ii) scenario");
  std::vector<double> ratios;
  for (int n : {256, 512, 1024}) {
    const auto v = injectivity_classifier(alpha(n), beta_same(n), 1e-3);
    d.check(v.verdict == InjectivityCase::CaseIII_AdjointNotInjective, "clause (iii) scenario N=" + std::to_string(n));
    ratios.push_back(v.witness_ratio.value_or(1.0));
  }
  d.check(ratios.back() <= 1e-2, "witness ratio at N=1024");
  d.check(ratios[0] > ratios[1] && ratios[1] > ratios[2], "ratio decreasing in N");
  d.note("witness ratios " + fmt("%.4f", ratios[0]) + " / " + fmt("%.4f", ratios[1]) + " / " + fmt("%.5f", ratios[2]) +
         " at N = 256/512/1024");
  return {14, "injectivity", d.ok, d.os.str()};
}

}  // namespace acceptance

inline std::vector<std::function<CriterionResult()>> acceptance_criteria() {
  using namespace acceptance;
  return {matrix_structure, isometry,       norm_endpoints,   strict_middle, ny_reading,  products,
          commutativity,    shift_commutant, invariant_subspaces, compactness, spectrum,   index_equivalence,
          shifted_adjoint_solver, injectivity};
}

/// Runs the selected criteria (all when `ids` is empty); exceptions count as failures.
inline std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {},
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
  const auto all = acceptance_criteria();
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = all[i]();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace circleop
