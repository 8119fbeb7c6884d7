#include <gtest/gtest.h>

#include "ainf/error.hpp"
#include "ainf/multimap.hpp"
#include "ainf/presets.hpp"
#include "random.hpp"

using namespace ainf;

namespace {

SpacePtr odd_space() { return make_space({{"a", 1}, {"b", 1}, {"c", 2}}); }

}  // namespace

TEST(Scalar, ParsesAndNormalizes) {
  EXPECT_EQ(Scalar::parse("3/6"), Scalar(1, 2));
  EXPECT_EQ(Scalar::parse("-2"), Scalar(-2));
  EXPECT_EQ(Scalar::parse("4/-8"), Scalar(-1, 2));
  EXPECT_EQ(Scalar(6, 4).to_string(), "3/2");
  EXPECT_EQ(Scalar(5).to_string(), "5");
  EXPECT_THROW(Scalar::parse("1/0"), DomainError);
  EXPECT_THROW(Scalar::parse("abc"), DomainError);
  EXPECT_THROW(Scalar::parse(""), DomainError);
  EXPECT_THROW(Scalar::parse("1.5"), DomainError);
}

TEST(Scalar, ExactArithmetic) {
  check::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const Scalar p = rng.rational() / rng.nonzero_rational();
    const Scalar q = rng.rational() * Scalar(rng.integer(1, 1000), rng.integer(1, 997));
    EXPECT_EQ((p + q) - q, p);
  }
  EXPECT_EQ(Scalar(2).pow(-3), Scalar(1, 8));
  EXPECT_EQ(Scalar(0).pow(0), Scalar(1));
  EXPECT_THROW(Scalar(0).inverse(), DomainError);
}

TEST(Scalar, Rationalize) {
  EXPECT_EQ(rationalize(1.0 / 3.0, 1000000), Scalar(1, 3));
  EXPECT_EQ(rationalize(-2.5, 1000000), Scalar(-5, 2));
  EXPECT_EQ(rationalize(0.0, 1000000), Scalar(0));
  EXPECT_EQ(rationalize(3.14159265358979, 100), Scalar(311, 99));
}

TEST(GradedSpace, RejectsDuplicateNames) {
  EXPECT_THROW(make_space({{"x", 1}, {"x", 2}}), DomainError);
  auto s = odd_space();
  EXPECT_EQ(s->index_of("c"), 2u);
  EXPECT_THROW(s->index_of("zz"), DomainError);
  EXPECT_EQ(s->of_degree(1).size(), 2u);
  EXPECT_TRUE(s->of_degree(7).empty());
}

TEST(Element, ParseAndDegree) {
  auto s = odd_space();
  const Element e = parse_element(s, "a:1/2,b:-1");
  EXPECT_EQ(e.coeff(0), Scalar(1, 2));
  EXPECT_EQ(e.degree(), 1);
  EXPECT_EQ(e.to_string(), "a:1/2,b:-1");
  EXPECT_EQ(parse_element(s, "c").coeff(2), Scalar(1));
  EXPECT_TRUE(parse_element(s, "0").is_zero());
  const Element mixed = parse_element(s, "a,c");
  EXPECT_FALSE(mixed.is_homogeneous());
  EXPECT_THROW((void)mixed.degree(), DegreeError);
  EXPECT_TRUE((e - e).is_zero());
}

TEST(MultiMap, DegreeBookkeepingIsEnforced) {
  auto s = odd_space();
  MultiMap g(s, 1, 1);
  EXPECT_NO_THROW(g.set({0}, {{2, Scalar(1)}}));
  EXPECT_THROW(g.set({2}, {{0, Scalar(1)}}), DomainError);
  MultiMap h(s, 2, 0);
  EXPECT_THROW(h += g, DomainError);
}

TEST(Evaluate, Examples) {
  auto e1 = presets::e1();
  const auto& space = e1->space();
  const MultiMap id = MultiMap::identity(space);
  for (std::size_t i = 0; i < space->dim(); ++i) {
    const std::vector<Element> in{Element::basis(space, i)};
    EXPECT_EQ(evaluate(id, in), Element::basis(space, i));
    EXPECT_TRUE(evaluate(MultiMap(space, 1, 0), in).is_zero());
  }
  auto e3 = presets::e3(Scalar(0));
  const auto& s3 = e3->space();
  const std::vector<Element> xy{Element::basis(s3, s3->index_of("x")), Element::basis(s3, s3->index_of("y"))};
  EXPECT_EQ(evaluate(e3->op(2), xy), Element::basis(s3, s3->index_of("w")));

  const std::vector<Element> one{Element::basis(space, 0)};
  EXPECT_THROW(evaluate(e1->op(2), one), ArityError);
  const std::vector<Element> mixed{Element::basis(space, 0) + Element::basis(space, 1), Element::basis(space, 0)};
  EXPECT_THROW(evaluate(e1->op(2), mixed), DegreeError);
}

TEST(KoszulTensorApply, Examples) {
  auto s = odd_space();
  MultiMap g(s, 1, 1);
  g.set({0}, {{2, Scalar(1)}});
  const MultiMap id = MultiMap::identity(s);
  const std::vector<Element> xy{Element::basis(s, 0), Element::basis(s, 0)};

  const MultiMap i_g[] = {id, g};
  const Tensor t = koszul_tensor_apply(i_g, xy);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.begin()->first, (Inputs{0, 2}));
  EXPECT_EQ(t.begin()->second, Scalar(-1));

  const MultiMap g_i[] = {g, id};
  const Tensor u = koszul_tensor_apply(g_i, xy);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u.begin()->second, Scalar(1));

  auto s2 = make_space({{"p", 0}, {"q", 1}});
  MultiMap h(s2, 1, 1);
  h.set({0}, {{1, Scalar(1)}});
  const MultiMap hh[] = {h, h};
  const std::vector<Element> pp{Element::basis(s2, 0), Element::basis(s2, 0)};
  const Tensor v = koszul_tensor_apply(hh, pp);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.begin()->second, Scalar(1));

  const std::vector<Element> three{Element::basis(s, 0), Element::basis(s, 0), Element::basis(s, 0)};
  EXPECT_THROW(koszul_tensor_apply(i_g, three), ArityError);
}

TEST(KoszulTensorApply, TwoFactorRuleOnAllBasisPairs) {
  check::Rng rng(3);
  auto s = make_space({{"u", -1}, {"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}});
  for (int trial = 0; trial < 20; ++trial) {
    const int df = rng.integer(-1, 1);
    const int dg = rng.integer(-1, 1);
    const MultiMap f = rng.map(s, 1, df, 0.8);
    const MultiMap g = rng.map(s, 1, dg, 0.8);
    const MultiMap fg[] = {f, g};
    for (std::size_t x = 0; x < s->dim(); ++x) {
      for (std::size_t y = 0; y < s->dim(); ++y) {
        const std::vector<Element> in{Element::basis(s, x), Element::basis(s, y)};
        const Tensor t = koszul_tensor_apply(fg, in);
        // (f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)
        const Element fx = f.at({x});
        const Element gy = g.at({y});
        Tensor expected;
        const Scalar sign(sign_power(static_cast<long>(dg) * s->degree(x)));
        for (const auto& [i, a] : fx.coeffs()) {
          for (const auto& [j, b] : gy.coeffs()) expected[{i, j}] = sign * a * b;
        }
        EXPECT_EQ(t, expected);
      }
    }
  }
}

TEST(Insert, Examples) {
  auto e1 = presets::e1();
  const auto& space = e1->space();
  const MultiMap id = MultiMap::identity(space);
  const MultiMap& m2 = e1->op(2);
  EXPECT_EQ(insert(m2, id, 0), m2);
  EXPECT_EQ(insert(m2, id, 1), m2);
  EXPECT_EQ(insert(id, m2, 0), m2);
  const MultiMap assoc = insert(m2, m2, 0);
  EXPECT_EQ(assoc.at({0, 0, 0}), Element::basis(space, 0));
  EXPECT_THROW(insert(m2, m2, 2), ArityError);
}

TEST(Insert, IsBilinear) {
  check::Rng rng(5);
  auto s = make_space({{"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}});
  for (int trial = 0; trial < 30; ++trial) {
    const MultiMap f = rng.map(s, 2, rng.integer(-1, 1));
    const int dg = rng.integer(-1, 1);
    const MultiMap g = rng.map(s, 2, dg);
    const MultiMap h = rng.map(s, 2, dg);
    const int slot = rng.integer(0, 1);
    for (auto rule : {SignRule::Koszul, SignRule::Shifted}) {
      EXPECT_EQ(insert(f, g + h, slot, rule), insert(f, g, slot, rule) + insert(f, h, slot, rule));
      const Scalar c = rng.rational();
      EXPECT_EQ(insert(f, c * g, slot, rule), c * insert(f, g, slot, rule));
      EXPECT_EQ(insert(c * f, g, slot, rule), c * insert(f, g, slot, rule));
    }
  }
}

TEST(Compose, MatchesRepeatedInsertion) {
  check::Rng rng(11);
  auto s = make_space({{"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}});
  for (int trial = 0; trial < 20; ++trial) {
    const MultiMap outer = rng.map(s, 2, 0);
    const MultiMap g = rng.map(s, 1, rng.integer(-1, 1));
    const MultiMap h = rng.map(s, 2, rng.integer(-1, 1));
    for (auto rule : {SignRule::Koszul, SignRule::Shifted}) {
      // outer ∘ (g ⊗ h) = (outer ∘_0 g) ∘_1 h
      const MultiMap inners[] = {g, h};
      EXPECT_EQ(compose(outer, inners, rule), insert(insert(outer, g, 0, rule), h, 1, rule));
    }
  }
}
