#include <gtest/gtest.h>

#include "circleop/literal.hpp"
#include "circleop/symbol.hpp"
#include "support.hpp"

using namespace circleop;

TEST(Symbol, ArithmeticAndConjugate) {
  const Symbol a = make_symbol({{0, 2.0}, {1, 1.0}});
  EXPECT_EQ(a[0], cplx(2.0));
  EXPECT_EQ(a.radius(), 1);
  EXPECT_TRUE((Symbol::z() * Symbol::zbar()) == Symbol::one());
  EXPECT_TRUE(((Symbol::z() + Symbol::zbar()) - Symbol::z()) == Symbol::zbar());
  const Symbol c = make_symbol({{2, cplx(1.0, 2.0)}});
  EXPECT_EQ(c.conj()[-2], cplx(1.0, -2.0));
  EXPECT_TRUE((Symbol::z() - Symbol::z()).is_zero());
}

TEST(Symbol, DuplicateModeRejected) {
  EXPECT_THROW(make_symbol({{1, 0.0}, {1, 2.0}}), PreconditionError);
  EXPECT_THROW(make_symbol({{1, 1.0}, {1, 2.0}}), PreconditionError);
}

TEST(Symbol, EvaluationMatchesSamples) {
  std::mt19937_64 rng(1);
  const Symbol s = fixtures::random_symbol(rng, 3);
  const GridSampling g = sample(s, 64);
  for (int j = 0; j < 64; j += 7) EXPECT_NEAR(std::abs(g.values[j] - s(g.theta(j))), 0.0, 1e-14);
}

TEST(Symbol, GridPreconditions) {
  EXPECT_THROW(sample(Symbol::z(), 48), PreconditionError);
  EXPECT_THROW(sample(Symbol::z(), 8), PreconditionError);
  EXPECT_THROW(sample(Symbol::monomial(10), 16), PreconditionError);
  EXPECT_NO_THROW(sample(Symbol::monomial(7), 16));
}

TEST(Symbol, FromSamplesRoundTrip) {
  std::mt19937_64 rng(2);
  const Symbol s = fixtures::random_symbol(rng, 6);
  EXPECT_TRUE(from_samples(sample(s, 64), 10).approx_equal(s, 1e-12));
  EXPECT_THROW(from_samples(sample(s, 64), 32), PreconditionError);
}

TEST(Symbol, SupNorm) {
  EXPECT_NEAR(sup_norm(make_symbol({{0, 2.0}, {1, 1.0}}), 256), 3.0, 1e-12);
  EXPECT_NEAR(sup_norm(Symbol{}, 64), 0.0, 0.0);
  // (z + zbar)/2 = cos theta
  EXPECT_NEAR(sup_norm(0.5 * (Symbol::z() + Symbol::zbar()), 256), 1.0, 1e-12);
}

TEST(Symbol, AnalyticPredicates) {
  EXPECT_TRUE(is_analytic(make_symbol({{0, 1.0}, {3, 1.0}})));
  EXPECT_FALSE(is_analytic(Symbol::zbar()));
  EXPECT_TRUE(is_coanalytic(Symbol::zbar()));
  EXPECT_TRUE(is_analytic(Symbol::one()) && is_coanalytic(Symbol::one()));
  EXPECT_TRUE(is_analytic(make_symbol({{-1, 1e-13}, {1, 1.0}})));
}

TEST(Symbol, WindingNumbers) {
  EXPECT_EQ(winding_number(Symbol::z(), 0.0, 64), 1);
  EXPECT_EQ(winding_number(Symbol::zbar(), 0.0, 64), -1);
  EXPECT_EQ(winding_number(Symbol::monomial(3), 0.0, 64), 3);
  EXPECT_EQ(winding_number(make_symbol({{0, -0.5}, {1, 1.0}}), 0.0, 64), 1);
  EXPECT_EQ(winding_number(Symbol::z(), 2.0, 64), 0);
  EXPECT_EQ(winding_number(make_symbol({{0, 2.0}, {1, 1.0}}), 0.0, 64), 0);
}

TEST(Symbol, WindingErrors) {
  try {
    winding_number(Symbol::z(), 1.0, 64);
    FAIL() << "expected CurveTouchesPoint";
  } catch (const WindingError& e) {
    EXPECT_EQ(e.kind(), WindingError::Kind::CurveTouchesPoint);
  }
  // z^7 on 16 points advances 7/16 of a turn per step
  try {
    winding_number(Symbol::monomial(7), 0.0, 16);
    FAIL() << "expected GridTooCoarse";
  } catch (const WindingError& e) {
    EXPECT_EQ(e.kind(), WindingError::Kind::GridTooCoarse);
  }
  EXPECT_EQ(winding_number_adaptive(Symbol::monomial(7), 0.0, 16), 7);
}

TEST(Symbol, EssentialRange) {
  EXPECT_TRUE(in_essential_range(Symbol::z(), cplx(0.0, 1.0), 1e-3, 1024));
  EXPECT_FALSE(in_essential_range(Symbol::z(), 0.5, 1e-3, 1024));
  EXPECT_TRUE(in_essential_range(Symbol::one(), 1.0, 1e-3, 64));
  EXPECT_THROW(in_essential_range(Symbol::one(), 1.0, 0.0, 64), PreconditionError);
}

TEST(Symbol, ZeroSetMeasure) {
  EXPECT_EQ(zero_set_measure(Symbol::z(), 1e-6, 1024), 0.0);
  EXPECT_EQ(zero_set_measure(Symbol{}, 1e-6, 1024), 1.0);
  const GridSampling g = sample_function(1024, [](double t) {
    return cplx(arc_vanishing_profile(t, 0.0, std::numbers::pi / 2, 0.3));
  });
  EXPECT_NEAR(zero_set_measure(g, 1e-6), 0.25, 0.01);
}

TEST(Symbol, SmoothProfile) {
  EXPECT_EQ(smooth_step(-1.0), 0.0);
  EXPECT_EQ(smooth_step(2.0), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
  EXPECT_EQ(arc_vanishing_profile(1.0, 0.5, 1.5, 0.2), 0.0);
  EXPECT_EQ(arc_vanishing_profile(3.0, 0.5, 1.5, 0.2), 1.0);
  const double mid = arc_vanishing_profile(1.6, 0.5, 1.5, 0.2);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
}

TEST(Literal, ParsesNamesAndTerms) {
  EXPECT_TRUE(parse_symbol("one") == Symbol::one());
  EXPECT_TRUE(parse_symbol(" zbar ") == Symbol::zbar());
  EXPECT_TRUE(parse_symbol("zero").is_zero());
  EXPECT_TRUE(parse_symbol("0:2;1:1") == make_symbol({{0, 2.0}, {1, 1.0}}));
  EXPECT_TRUE(parse_symbol("0:-0.5;1:1") == make_symbol({{0, -0.5}, {1, 1.0}}));
  EXPECT_TRUE(parse_symbol("1:0.5-2i") == make_symbol({{1, cplx(0.5, -2.0)}}));
  EXPECT_TRUE(parse_symbol("-1:i; +2:1e-3+1e+2i") == make_symbol({{-1, cplx(0, 1)}, {2, cplx(1e-3, 1e2)}}));
  EXPECT_TRUE(parse_symbol("3:-i") == make_symbol({{3, cplx(0, -1)}}));
}

TEST(Literal, ErrorsCarryPosition) {
  try {
    parse_symbol("0:1;1:abc");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
  try {
    parse_symbol("0:1;x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_symbol(""), ParseError);
  EXPECT_THROW(parse_symbol("0:1;0:2"), ParseError);
  EXPECT_THROW(parse_symbol("0:1;"), ParseError);
  EXPECT_THROW(parse_symbol("1.5:1"), ParseError);
}

TEST(Literal, FormatRoundTrip) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Symbol s = fixtures::random_symbol(rng, 4);
    const Symbol back = parse_symbol(format_symbol(s));
    for (const auto& [n, c] : s.coeffs()) EXPECT_EQ(back[n], c);
  }
  EXPECT_EQ(format_symbol(Symbol{}), "zero");
  EXPECT_EQ(format_complex(cplx(1.0, -0.0)), "1+0i");
}
