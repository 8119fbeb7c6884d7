#include <gtest/gtest.h>

#include "ainf/error.hpp"
#include "ainf/presets.hpp"
#include "ainf/rescaling.hpp"
#include "random.hpp"

using namespace ainf;
using check::Rng;

TEST(Rescale, Examples) {
  auto e1 = presets::e1();
  EXPECT_EQ(rescale(*e1, {Scalar(1), 2, -3}), *e1);
  const auto t1 = rescale(*e1, {Scalar(2), 1, -1});
  EXPECT_EQ(t1.op(2), Scalar(2) * e1->op(2));
  EXPECT_EQ(t1.op(1), e1->op(1));
  const auto doubled = rescale(*e1, {Scalar(2), 0, 1});
  EXPECT_EQ(doubled.op(2), Scalar(2) * e1->op(2));

  auto e3 = presets::e3(Scalar(1));
  const auto c = rescale(*e3, {Scalar(3), 1, 2});
  EXPECT_EQ(c.op(0), Scalar(9) * e3->op(0));
  EXPECT_EQ(c.op(2), Scalar(81) * e3->op(2));
}

TEST(Rescale, LambdaZero) {
  auto e2 = presets::e2();
  const auto r = rescale(*e2, {Scalar(0), 1, -1});
  EXPECT_EQ(r.op(1), e2->op(1));
  auto e1 = presets::e1();
  EXPECT_TRUE(rescale(*e1, {Scalar(0), 1, -1}).op(2).is_zero());
  EXPECT_THROW(rescale(*e1, {Scalar(0), 1, -3}), DomainError);
  EXPECT_THROW(rescale(*presets::e3(Scalar(1)), {Scalar(0), 1, -1}), DomainError);
  EXPECT_THROW(rescaling_morphism(e1, {Scalar(0), 1, -1}), DomainError);
}

TEST(RescalingMorphism, LinearPartExamples) {
  auto e1 = presets::e1();
  const auto& space = e1->space();
  // 2 · 2^{-E}: 2 on the degree-0 entry, 1 on x.
  EXPECT_EQ(rescaling_linear_part(space, {Scalar(2), 0, 1}), MultiMap::diagonal(space, {Scalar(2), Scalar(1)}));
  const Scalar l(-3, 5);
  EXPECT_EQ(rescaling_linear_part(space, {l, 1, -1}), l * MultiMap::identity(space));
  EXPECT_EQ(rescaling_linear_part(space, {l, 1, -2}), lambda_euler_power(space, l, 1));
  EXPECT_EQ(lambda_euler_power(space, l, 1), MultiMap::diagonal(space, {Scalar(1), l}));
}

TEST(RescalingMorphism, RandomParametersOnEveryStructure) {
  Rng rng(41);
  for (const auto& [name, a] : presets::all()) {
    SCOPED_TRACE(name);
    for (int trial = 0; trial < 20; ++trial) {
      const RescaleParams p{rng.nonzero_rational(), rng.integer(-3, 3), rng.integer(-3, 3)};
      const auto r = rescale(*a, p);
      EXPECT_FALSE(check_all_constructions(r).has_value());
      const Morphism f = rescaling_morphism(a, p);
      EXPECT_TRUE(f.strict_s3());
      for (int n = first_equation_index(*a); n <= 2 * a->kmax() - 1; ++n) {
        EXPECT_TRUE(check_morphism(f, n).is_zero()) << "n=" << n;
      }
    }
  }
}

TEST(Rescale, Functoriality) {
  Rng rng(42);
  for (const auto& [name, a] : presets::all()) {
    for (int trial = 0; trial < 5; ++trial) {
      const int pa = rng.integer(-3, 3), pb = rng.integer(-3, 3);
      const Scalar l1 = rng.nonzero_rational(), l2 = rng.nonzero_rational();
      EXPECT_EQ(rescale(rescale(*a, {l1, pa, pb}), {l2, pa, pb}), rescale(*a, {l1 * l2, pa, pb})) << name;
      EXPECT_EQ(compose_linear(rescaling_linear_part(a->space(), {l1, pa, pb}),
                               rescaling_linear_part(a->space(), {l2, pa, pb})),
                rescaling_linear_part(a->space(), {l1 * l2, pa, pb}));
    }
  }
}
