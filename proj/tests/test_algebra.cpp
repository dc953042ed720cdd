#include <gtest/gtest.h>

#include "circleop/algebra.hpp"
#include "support.hpp"

using namespace circleop;

namespace {

const Symbol z = Symbol::z();
const Symbol zb = Symbol::zbar();
const Symbol one = Symbol::one();

Symbol mono(int n, cplx c = 1.0) { return Symbol::monomial(n, c); }

struct Quad {
  Symbol a1, b1, a2, b2;
};

}  // namespace

TEST(ProductForm, Examples) {
  const auto p = product_form(z, zb, z, zb);
  ASSERT_TRUE(p.is_product);
  EXPECT_TRUE(p.alpha == mono(2));
  EXPECT_TRUE(p.beta == mono(-2));

  std::mt19937_64 rng(40);
  const Symbol phi = fixtures::random_symbol(rng, 2);
  const Symbol a2 = fixtures::random_symbol(rng, 2);
  const Symbol b2 = fixtures::random_symbol(rng, 2);
  const auto q = product_form(phi, phi, a2, b2);
  ASSERT_TRUE(q.is_product);
  EXPECT_TRUE(q.alpha.approx_equal(phi * a2, 1e-12));

  EXPECT_FALSE(product_form(one, 2.0 * one, zb, one).is_product);
}

TEST(ProductForm, SoundAndComplete) {
  std::mt19937_64 rng(41);
  const std::vector<Quad> suite = {
      {z, zb, z, zb},
      {one, 2.0 * one, zb, one},
      {one + z, one + z, zb, z},
      {zb, z, one + z, zb},
      {z, one, zb, z},
      {fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 0, 2),
       fixtures::random_symbol(rng, -2, 0)},
      {fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 2),
       fixtures::random_symbol(rng, 2)},
  };
  for (const auto& q : suite) {
    const int M = 12;
    const OperatorMatrix P = product_matrix(q.a1, q.b1, q.a2, q.b2, M);
    const auto verdict = product_form(q.a1, q.b1, q.a2, q.b2);
    const auto structure = verify_structure(P);
    EXPECT_EQ(verdict.is_product, structure.is_singular_integral);
    if (verdict.is_product) {
      const OperatorMatrix B = build_matrix(verdict.alpha, verdict.beta, M, Truncation::exact);
      for (int n = -M / 2; n <= M / 2; ++n)
        for (int m = P.out_window.lo; m <= P.out_window.hi; ++m)
          EXPECT_LE(std::abs(P.entry(m, n) - B.entry(m, n)), 1e-12);
    }
  }
}

TEST(ZeroProduct, Examples) {
  EXPECT_EQ(zero_product_class(Symbol{}, Symbol{}, z, zb).verdict, ZeroClass::ZeroByI);
  EXPECT_EQ(zero_product_class(Symbol{}, one, z, Symbol{}).verdict, ZeroClass::ZeroByII);
  const auto nz = zero_product_class(one, one, one, one);
  EXPECT_EQ(nz.verdict, ZeroClass::NonZero);
  EXPECT_TRUE(nz.certified);
}

TEST(ZeroProduct, EachClauseVanishes) {
  const std::vector<std::pair<Quad, ZeroClass>> cases = {
      {{mono(0, 0.0) + z - z, Symbol{}, z, zb}, ZeroClass::ZeroByI},
      {{Symbol{}, one + zb, z + mono(2), Symbol{}}, ZeroClass::ZeroByII},
      {{z + one, Symbol{}, Symbol{}, zb + mono(-3)}, ZeroClass::ZeroByIII},
      {{z, zb, Symbol{}, Symbol{}}, ZeroClass::ZeroByIV},
  };
  for (const auto& [q, expected] : cases) {
    EXPECT_EQ(zero_product_class(q.a1, q.b1, q.a2, q.b2).verdict, expected);
    EXPECT_LE(product_matrix(q.a1, q.b1, q.a2, q.b2, 10).entries.cwiseAbs().maxCoeff(), 1e-12);
  }
  // clause (ii) needs analytic alpha2: with zbar the product is not zero
  const auto v = zero_product_class(Symbol{}, one, zb, Symbol{});
  EXPECT_EQ(v.verdict, ZeroClass::NonZero);
  EXPECT_TRUE(v.certified);
}

TEST(Commutator, Examples) {
  EXPECT_LE(commutator_residual(z, zb, z, zb, 32), 1e-14);
  EXPECT_LE(commutator_residual(z, zb, one - z, one - zb, 32), 1e-10);
  EXPECT_GT(commutator_residual(z, zb, zb, z, 32), 0.5);
  EXPECT_THROW(commutator_residual(mono(5), one, one, one, 16), PreconditionError);
}

TEST(CommuteCheck, Examples) {
  EXPECT_EQ(commute_check(z, zb, mono(2), mono(-3)).verdict, CommuteKind::ByI);
  // clause (i) also holds here and wins on priority; the clause (iii) witness is still reported
  const auto iii = commute_check(z, zb, one - z, one - zb);
  EXPECT_EQ(iii.verdict, CommuteKind::ByI);
  ASSERT_TRUE(iii.clause_iii.has_value());
  EXPECT_NEAR(std::abs(iii.clause_iii->a - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(iii.clause_iii->b - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(iii.clause_iii->c - 1.0), 0.0, 1e-12);
  const auto only_iii = commute_check(zb, z, 3.0 * one + 2.0 * zb, 3.0 * one + 2.0 * z);
  ASSERT_EQ(only_iii.verdict, CommuteKind::ByIII);
  EXPECT_NEAR(std::abs(only_iii.clause_iii->b + 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(only_iii.clause_iii->c + 1.5), 0.0, 1e-12);
  const auto neg = commute_check(z, zb, zb, z);
  EXPECT_EQ(neg.verdict, CommuteKind::NonCommuting);
  EXPECT_GT(neg.residual, 1e-3);
  EXPECT_EQ(commute_check(Symbol{}, Symbol{}, Symbol{}, Symbol{}).verdict, CommuteKind::ByII);
}

TEST(CommuteCheck, TwelveCaseSuiteIsAnIff) {
  const std::vector<Quad> suite = {
      {z, zb, mono(2), mono(-3)},
      {one + z, zb, mono(3), 2.0 * one + mono(-2)},
      {one + zb, one + zb, z, z},
      {z + zb, z + zb, 2.0 * zb, 2.0 * zb},
      {z, zb, one - z, one - zb},
      {zb, z, 3.0 * one + 2.0 * zb, 3.0 * one + 2.0 * z},
      {Symbol{}, Symbol{}, zb, z},
      {zb + mono(2), 2.0 * z, 5.0 * one - zb - mono(2), 5.0 * one - 2.0 * z},
      {z, zb, zb, z},
      {one, z, zb, one},
      {z, z, zb, one},
      {one + z, zb, one, z},
  };
  int negatives = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& q = suite[i];
    const auto v = commute_check(q.a1, q.b1, q.a2, q.b2);
    const double res = commutator_residual(q.a1, q.b1, q.a2, q.b2, 32);
    const bool commutes = v.verdict == CommuteKind::ByI || v.verdict == CommuteKind::ByII ||
                          v.verdict == CommuteKind::ByIII;
    EXPECT_EQ(commutes, res <= 1e-10) << "case " << i << " " << to_string(v.verdict) << " residual " << res;
    if (!commutes) {
      ++negatives;
      EXPECT_EQ(v.verdict, CommuteKind::NonCommuting) << "case " << i;
      EXPECT_GE(res, 1e-3);
    }
    // the equation pair vanishes exactly for commuting pairs
    const double eq = commutation_equations_residual(q.a1, q.b1, q.a2, q.b2, 5).max();
    EXPECT_EQ(commutes, eq <= 1e-10) << "case " << i << " equations " << eq;
  }
  EXPECT_EQ(negatives, 4);
}

TEST(CommuteCheck, ByIIITakesPrecedenceOnlyAfterIAndII) {
  // constants satisfy all three clauses
  EXPECT_EQ(commute_check(one, one, 2.0 * one, 2.0 * one).verdict, CommuteKind::ByII);
  EXPECT_EQ(commute_check(one, 2.0 * one, 3.0 * one, one).verdict, CommuteKind::ByI);
}

TEST(Intertwining, Examples) {
  // condition (ii): psi = 0
  const auto ii = intertwining_residual(z + zb, Symbol{}, mono(-2), Symbol{}, 10);
  EXPECT_LE(ii.max(), 1e-12);
  // a psi1 + b psi2 = 0 and a Q(phi1) + b Q(phi2) = 0 with a = 1, b = -2
  const Symbol phi2 = zb + 3.0 * z;
  const Symbol phi1 = 2.0 * zb + mono(4);
  const Symbol psi2 = one + z;
  const Symbol psi1 = 2.0 * psi2;
  EXPECT_LE(intertwining_residual(phi1, psi1, phi2, psi2, 10).q, 1e-10);
  std::mt19937_64 rng(42);
  const auto generic = intertwining_residual(fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 2),
                                        fixtures::random_symbol(rng, 2), fixtures::random_symbol(rng, 2), 10);
  EXPECT_GT(generic.max(), 1e-3);
}

TEST(ShiftCommutant, Examples) {
  EXPECT_TRUE(shift_commutant_check(mono(2), mono(-3)));
  EXPECT_FALSE(shift_commutant_check(zb, z));
  EXPECT_TRUE(shift_commutant_check(one, one));
}

TEST(ShiftCommutant, AgreesWithResidual) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const bool analytic = t % 2 == 0;
    const Symbol a = analytic ? fixtures::random_symbol(rng, 0, 3) : fixtures::random_symbol(rng, 2);
    const Symbol b = analytic ? fixtures::random_symbol(rng, -3, 0) : fixtures::random_symbol(rng, 2);
    EXPECT_EQ(shift_commutant_check(a, b), commutator_residual(a, b, z, zb, 32) <= 1e-10);
  }
}

TEST(TwoShift, Examples) {
  const auto ok = two_shift_commutant_check(build_matrix(mono(2), zb, 16, Truncation::square));
  ASSERT_TRUE(ok.is_singular_integral);
  EXPECT_TRUE(ok.alpha == mono(2));
  EXPECT_TRUE(ok.beta == zb);

  const auto remark = two_shift_commutant_check(build_remark_operator(16));
  EXPECT_FALSE(remark.is_singular_integral);
  EXPECT_GT(remark.residual_backward, 0.5);

  EXPECT_FALSE(two_shift_commutant_check(build_matrix(zb, z, 16, Truncation::square)).is_singular_integral);
  EXPECT_THROW(two_shift_commutant_check(build_matrix(z, zb, 3, Truncation::square)), PreconditionError);
}

TEST(TwoShift, RemarkOperatorCommutesWithShiftOnly) {
  const OperatorMatrix T = build_remark_operator(20);
  EXPECT_LE(interior_commutator(T, build_matrix(z, zb, 20, Truncation::square)), 1e-12);
  EXPECT_FALSE(verify_structure(T).is_singular_integral);
}
