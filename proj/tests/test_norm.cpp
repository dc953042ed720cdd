#include <gtest/gtest.h>

#include "circleop/norm.hpp"
#include "support.hpp"

using namespace circleop;

namespace {

const Symbol kCos = 0.5 * (Symbol::z() + Symbol::zbar());

Symbol beta_c(double c) { return c * Symbol::z() + (1.0 - c) * Symbol::zbar(); }

// Square truncations approach the norm from below with an M^-2 tail, so the distance to the
// limit is about a third of the last doubling increment; 4x that increment bounds the tail.
double limit_slack(const Symbol& a, const Symbol& b, int M) {
  return 4.0 * (operator_norm(a, b, M).value - operator_norm(a, b, M / 2).value);
}

}  // namespace

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(Symbol::one(), Symbol::one(), 16).value, 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(Symbol::one(), Symbol::zbar(), 64).value, 1.0, 1e-6);
  EXPECT_NEAR(operator_norm(Symbol::one(), Symbol::z(), 64).value, std::sqrt(2.0), 1e-6);
}

TEST(OperatorNorm, RejectsSmallWindow) {
  EXPECT_THROW(operator_norm(Symbol::monomial(3), Symbol::one(), 8), PreconditionError);
}

TEST(OperatorNorm, StrictMiddleConverges) {
  const NormEstimate e = operator_norm(Symbol::one(), kCos, 128);
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(e.value, 2.0 / std::sqrt(3.0), 1e-6);
}

TEST(OperatorNorm, SandwichAndMonotone) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 50; ++t) {
    const Symbol a = fixtures::random_symbol(rng, 4);
    const Symbol b = fixtures::random_symbol(rng, 4);
    const NormBounds bounds = norm_bounds(a, b, 2048);
    double prev = 0.0;
    for (int M : {16, 32, 64}) {
      const double v = operator_norm(a, b, M).value;
      EXPECT_GE(v, prev - 1e-12);
      EXPECT_LE(v, bounds.upper + 1e-8);
      prev = v;
    }
    EXPECT_GE(prev + limit_slack(a, b, 64), bounds.lower - 1e-8);
  }
}

TEST(OperatorNorm, SandwichAtConvergence) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 5; ++t) {
    const Symbol a = fixtures::random_symbol(rng, 2);
    const Symbol b = fixtures::random_symbol(rng, 2);
    const NormBounds bounds = norm_bounds(a, b, 4096);
    const double v = operator_norm(a, b, 256).value;
    EXPECT_GE(v + limit_slack(a, b, 256), bounds.lower - 1e-8);
    EXPECT_LE(v, bounds.upper + 1e-8);
  }
}

TEST(NormBounds, Examples) {
  const NormBounds b1 = norm_bounds(Symbol::one(), Symbol::z(), 256);
  EXPECT_NEAR(b1.lower, 1.0, 1e-14);
  EXPECT_NEAR(b1.upper, std::sqrt(2.0), 1e-14);
  const NormBounds b0 = norm_bounds(Symbol{}, Symbol{}, 64);
  EXPECT_EQ(b0.lower, 0.0);
  EXPECT_EQ(b0.upper, 0.0);
  const NormBounds b2 = norm_bounds(make_symbol({{0, 2.0}, {1, 1.0}}), Symbol::zbar(), 256);
  EXPECT_NEAR(b2.lower, 3.0, 1e-12);
  EXPECT_NEAR(b2.upper, std::sqrt(10.0), 1e-12);
}

TEST(ContinuitySweep, LipschitzAndStrictlyInside) {
  double prev = operator_norm(Symbol::one(), beta_c(0.0), 128).value;
  bool strictly_inside = false;
  for (int i = 1; i <= 20; ++i) {
    const double c = i / 20.0;
    const double v = operator_norm(Symbol::one(), beta_c(c), 128).value;
    EXPECT_LE(std::abs(v - prev), 2.0 * 0.05 + 1e-12) << "c=" << c;
    if (v > 1.0 + 1e-3 && v < std::sqrt(2.0) - 1e-3) strictly_inside = true;
    prev = v;
  }
  EXPECT_TRUE(strictly_inside);
}

TEST(NyObjective, Examples) {
  EXPECT_NEAR(ny_objective(Symbol::one(), Symbol::zbar(), Symbol::z(), 256), 1.0, 1e-12);
  EXPECT_NEAR(ny_objective(Symbol::one(), Symbol::z(), Symbol{}, 256), 2.0, 1e-12);
  EXPECT_NEAR(ny_objective(Symbol::one(), Symbol::one(), Symbol::one(), 256), 1.0, 1e-12);
  EXPECT_THROW(ny_objective(Symbol::one(), Symbol::one(), Symbol::zbar(), 256), PreconditionError);
}

TEST(NyEstimate, Cases) {
  const NyEstimate e1 = ny_norm_estimate(Symbol::one(), Symbol::zbar(), 2, 256, 2000);
  EXPECT_NEAR(e1.value, 1.0, 1e-6);
  const NyEstimate e2 = ny_norm_estimate(Symbol::one(), Symbol::z(), 4, 256, 2000);
  EXPECT_NEAR(e2.value, 2.0, 1e-3);
  const NyEstimate e3 = ny_norm_estimate(Symbol::one(), kCos, 8, 256, 4000);
  EXPECT_GT(std::sqrt(e3.value), 1.0);
  EXPECT_LT(std::sqrt(e3.value), std::sqrt(2.0));
  const double oracle = operator_norm(Symbol::one(), kCos, 256).value;
  EXPECT_NEAR(e3.value, oracle * oracle, kNyTol);
  EXPECT_GE(e3.initial, e3.value);
  EXPECT_NEAR(e3.initial, 1.5, 1e-12);
}

TEST(NyEstimate, Deterministic) {
  const NyEstimate a = ny_norm_estimate(Symbol::one(), kCos, 3, 128, 300);
  const NyEstimate b = ny_norm_estimate(Symbol::one(), kCos, 3, 128, 300);
  EXPECT_EQ(a.value, b.value);
  EXPECT_TRUE(a.k.approx_equal(b.k, 0.0));
}

TEST(NyEstimate, BudgetExhaustionFlagged) {
  NyOptions opt;
  opt.restarts = 1;
  opt.rounds = 1;
  const NyEstimate e = ny_norm_estimate(Symbol::one(), kCos, 8, 256, 3, opt);
  EXPECT_FALSE(e.certified);
  EXPECT_LE(e.value, e.initial);
  EXPECT_THROW(ny_norm_estimate(Symbol::one(), kCos, -1, 256, 10), PreconditionError);
}

TEST(NormCase, Examples) {
  EXPECT_EQ(norm_case_classifier(Symbol::one(), Symbol::zbar()).verdict, NormCase::CaseIII);
  const NormCaseVerdict iv = norm_case_classifier(Symbol::one(), Symbol::z());
  EXPECT_EQ(iv.verdict, NormCase::CaseIV);
  EXPECT_NEAR(iv.implied_norm, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(norm_case_classifier(Symbol::one(), kCos).verdict, NormCase::Unclassified);
}

TEST(NormCase, VerdictImpliesNorm) {
  const std::vector<std::pair<Symbol, Symbol>> cases = {
      {Symbol::one(), Symbol::zbar()},
      {Symbol::one(), Symbol::z()},
      {make_symbol({{0, 2.0}, {1, 1.0}}), Symbol::zbar()},
      {Symbol::monomial(2), Symbol::monomial(3, cplx(0, 1))},
      {Symbol::monomial(-1, 2.0), Symbol::monomial(1, 2.0)},
  };
  for (const auto& [a, b] : cases) {
    const NormCaseVerdict v = norm_case_classifier(a, b);
    ASSERT_NE(v.verdict, NormCase::Unclassified);
    const double est = operator_norm(a, b, 256).value;
    EXPECT_LE(est, v.implied_norm + 1e-8);
    EXPECT_GE(est + limit_slack(a, b, 256), v.implied_norm - 1e-8);
  }
}
