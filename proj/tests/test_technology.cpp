#include <gtest/gtest.h>

#include <array>

#include "support.hpp"

using namespace reswitch;
using testing_support::Gen;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

// Reduced form written out term by term, independent of cost_polynomial.
Rational direct_cost(const Technique& t, const Rational& w, const Rational& i) {
  Rational total = 0;
  Rational compound = 1;
  for (std::size_t lag = 1; lag <= t.horizon(); ++lag) {
    compound *= (1 + i);
    total += w * t.labor_at(lag) * compound;
  }
  return total;
}

}  // namespace

TEST(Technique, Validation) {
  EXPECT_THROW(Technique("", {q(1)}), InvalidModel);
  EXPECT_THROW(Technique("a", {}), InvalidModel);
  EXPECT_THROW(Technique("a", {q(1), q(-1)}), InvalidModel);
  EXPECT_THROW(Technique("a", {q(0), q(0)}), InvalidModel);
  const Technique t("a", {q(0), q(7), q(0)});
  EXPECT_EQ(t.horizon(), 3U);
  EXPECT_EQ(t.support(), std::vector<std::size_t>{2});
  EXPECT_EQ(t.labor_at(2), q(7));
  EXPECT_EQ(t.padded(5).horizon(), 5U);
  EXPECT_TRUE(t.same_profile(Technique("z", {q(0), q(7), q(0), q(0)})));
}

TEST(TechnologySet, Validation) {
  EXPECT_THROW(TechnologySet({}), InvalidModel);
  EXPECT_THROW(TechnologySet({Technique("a", {q(1)}), Technique("a", {q(2)})}), InvalidModel);
  EXPECT_THROW(TechnologySet({Technique("a", {q(1)})}, q(0)), InvalidModel);
  EXPECT_THROW(TechnologySet({Technique("a", {q(1)})}, q(1), q(-1)), InvalidModel);
  const TechnologySet ts({Technique("a", {q(1)}), Technique("b", {q(0), q(0), q(3)})});
  EXPECT_EQ(ts.horizon(), 3U);
  EXPECT_EQ(ts[0].horizon(), 3U);
  EXPECT_EQ(ts.find("b").labor_at(3), q(3));
  EXPECT_THROW(ts.find("c"), InvalidModel);
}

TEST(Cost, ChampagneTableValues) {
  const auto ts = samuelson_champagne();
  // i, cost a, cost b
  const std::vector<std::array<Rational, 3>> rows{
      {q(3, 2), q(175, 4), q(185, 4)}, {q(5, 4), q(567, 16), q(1161, 32)}, {q(1), q(28), q(28)},
      {q(3, 4), q(343, 16), q(679, 32)}, {q(1, 2), q(63, 4), q(63, 4)},     {q(1, 4), q(175, 16), q(365, 32)},
      {q(0), q(7), q(8)}};
  for (const auto& [i, ca, cb] : rows) {
    EXPECT_EQ(cost_at(ts[0], 1, i), ca);
    EXPECT_EQ(cost_at(ts[1], 1, i), cb);
  }
  EXPECT_EQ(cost_polynomial(ts[1]).to_string(), "2x^3 + 6x");
  EXPECT_THROW(cost_at(ts[0], 1, q(-1)), DomainError);
  EXPECT_NO_THROW(cost_at(ts[0], 1, q(-1, 2)));
}

TEST(FactorPrices, ChampagneStructure) {
  const auto fp = factor_prices(3, 1, q(1, 2));
  EXPECT_EQ(fp.post_factum_wage, q(3, 2));
  EXPECT_EQ(fp.asset_price(1), q(3, 2));
  EXPECT_EQ(fp.rental(1), q(9, 4));
  EXPECT_EQ(fp.rental(2), q(27, 8));
  const auto ts = samuelson_champagne();
  EXPECT_EQ(structural_cost(ts[0], fp), q(63, 4));  // 7 R_1
  EXPECT_EQ(structural_cost(ts[1], fp), q(63, 4));  // 6 w_L + 2 R_2
  EXPECT_THROW(structural_cost(ts[0], factor_prices(4, 1, q(0))), HorizonMismatch);
}

// Property: structural cost w_L a_L + sum R_t a_Kt equals the reduced form
// exactly for every technique, wage and admissible rate.
TEST(CostProperty, StructuralEqualsReduced) {
  Gen gen(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const Technique t = gen.technique("t", static_cast<std::size_t>(gen.integer(1, 6)));
    const Rational w = gen.rational(1, 30, {1, 2, 3, 7});
    const Rational i = gen.rational(-2, 40, {3, 4, 10});
    const Rational reduced = cost_at(t, w, i);
    ASSERT_EQ(structural_cost(t, factor_prices(t.horizon(), w, i)), reduced);
    ASSERT_EQ(direct_cost(t, w, i), reduced);
  }
}

// Property: cost is homogeneous of degree one in the wage and increasing in
// the rate for i > -1.
TEST(CostProperty, HomogeneousAndMonotone) {
  Gen gen(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Technique t = gen.technique("t", static_cast<std::size_t>(gen.integer(1, 6)));
    const Rational w = gen.rational(1, 20, {1, 3});
    const Rational k = gen.rational(1, 20, {1, 2, 7});
    const Rational i = gen.rational(0, 30, {10});
    ASSERT_EQ(cost_at(t, w * k, i), k * cost_at(t, w, i));
    ASSERT_LT(cost_at(t, w, i), cost_at(t, w, i + q(1, 10)));
  }
}

TEST(WageCurve, DecreasingInInterest) {
  const auto ts = samuelson_champagne();
  std::vector<Rational> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(q(k, 10));
  const auto curve = wage_interest_curve(ts[1], 1, grid);
  ASSERT_EQ(curve.size(), grid.size());
  EXPECT_EQ(curve[0].real_wage, q(1, 8));
  for (std::size_t k = 1; k < curve.size(); ++k) EXPECT_LT(curve[k].real_wage, curve[k - 1].real_wage);
}
