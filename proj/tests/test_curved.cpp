#include <gtest/gtest.h>

#include "ainf/curved.hpp"
#include "ainf/de_rham.hpp"
#include "ainf/error.hpp"
#include "ainf/presets.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace ainf;
using check::Rng;

namespace {

std::size_t idx(const AInftyStructure& a, std::string_view name) { return a.space()->index_of(name); }

Element basis(const AInftyStructure& a, std::string_view name) { return Element::basis(a.space(), idx(a, name)); }

std::vector<StructurePtr> element_level_presets() {
  std::vector<StructurePtr> out;
  for (const auto& [name, a] : presets::all()) {
    if (a->convention() == Convention::ElementLevel) out.push_back(a);
  }
  return out;
}

/// E4 deformed by a fixed b: curved, with m_0 through m_3 all nonzero.
StructurePtr curved_e4() {
  auto e4 = presets::e4();
  const Element b = basis(*e4, "p") + Scalar(-1, 2) * basis(*e4, "r");
  return std::make_shared<AInftyStructure>(deform(*e4, b));
}

}  // namespace

TEST(EvalEb, Examples) {
  auto e3 = presets::e3(Scalar(5));
  EXPECT_EQ(eval_eb(*e3, Element(e3->space())), e3->op(0).value());
  EXPECT_EQ(eval_eb(*e3, Scalar(7, 3) * basis(*e3, "x")), Scalar(5) * basis(*e3, "w"));
  auto flat = presets::e3(Scalar(0));
  EXPECT_TRUE(eval_eb(*flat, Scalar(2) * basis(*flat, "x") + Scalar(-3) * basis(*flat, "y")).is_zero());
  EXPECT_THROW(eval_eb(*e3, basis(*e3, "w")), DegreeError);
  EXPECT_THROW(eval_eb(*presets::e1(), Element(presets::e1()->space())), ConventionError);
}

TEST(Deform, Examples) {
  auto e3 = presets::e3(Scalar(2));
  EXPECT_EQ(deform(*e3, Element(e3->space())), *e3);
  const auto d = deform(*e3, Scalar(3) * basis(*e3, "x"));
  EXPECT_EQ(d.op(0), e3->op(0));
  EXPECT_TRUE(d.op(1).is_zero());
  EXPECT_EQ(d.op(2), e3->op(2));
}

TEST(Deform, E4MatchesInsertionOracle) {
  Rng rng(12);
  auto e4 = presets::e4();
  for (int trial = 0; trial < 10; ++trial) {
    const Element b = rng.element(e4->space(), 1, 1.0);
    const auto d = deform(*e4, b);
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(d.op(n), check::oracle_deformed_map(*e4, b, n)) << n;
  }
}

TEST(Deform, AlwaysAnAInfinityStructure) {
  Rng rng(13);
  auto structures = element_level_presets();
  structures.push_back(curved_e4());
  for (const auto& a : structures) {
    for (int trial = 0; trial < 50; ++trial) {
      const Element b = rng.element(a->space(), 1, 0.8);
      const auto d = std::make_shared<AInftyStructure>(deform(*a, b));
      EXPECT_FALSE(check_all_constructions(*d).has_value());
      if (trial % 10 == 0) EXPECT_FALSE(check_morphism_upto(deformation_morphism(d, a, b)).has_value());
    }
  }
}

TEST(InverseDeform, RoundTrips) {
  Rng rng(14);
  auto structures = element_level_presets();
  structures.push_back(curved_e4());
  for (const auto& a : structures) {
    EXPECT_TRUE(inverse_deform_certificate(*a, Element(a->space())).holds());
    for (int trial = 0; trial < 10; ++trial) {
      const auto report = inverse_deform_certificate(*a, rng.element(a->space(), 1, 1.0));
      EXPECT_TRUE(report.structures_equal);
      EXPECT_TRUE(report.composition_is_identity);
    }
  }
}

TEST(Center, Examples) {
  auto e3 = presets::e3(Scalar(1));
  EXPECT_TRUE(center_check(*e3, Element(e3->space())));
  EXPECT_TRUE(center_check(*e3, basis(*e3, "w")));
  EXPECT_TRUE(center_check(*e3, basis(*e3, "1")));
  EXPECT_THROW(center_check(*e3, basis(*e3, "x")), DegreeError);
}

TEST(Unit, Examples) {
  auto e1 = presets::e1();
  EXPECT_TRUE(unit_check(*e1, basis(*e1, "1")));
  EXPECT_FALSE(unit_check(*e1, Scalar(2) * basis(*e1, "1")));
  EXPECT_FALSE(unit_check(*e1, basis(*e1, "x")));
  auto e3 = presets::e3(Scalar(1));
  EXPECT_TRUE(unit_check(*e3, basis(*e3, "1")));

  auto e4 = presets::e4();
  EXPECT_TRUE(partial_unital_check(*e4, basis(*e4, "c")));
  EXPECT_TRUE(partial_unital_check(*e4, basis(*e4, "q")));
  EXPECT_FALSE(partial_unital_check(*e4, basis(*e4, "p")));
  EXPECT_FALSE(partial_unital_check(*e4, basis(*e4, "r")));
  // p - r still hits (p, r, p).
  EXPECT_FALSE(partial_unital_check(*e4, basis(*e4, "p") - basis(*e4, "r")));
}

TEST(Obstruction, Examples) {
  auto e3 = presets::e3(Scalar(4));
  for (std::size_t x = 0; x < e3->space()->dim(); ++x) {
    EXPECT_TRUE(obstruction_residual(*e3, Element(e3->space()), x).is_zero());
  }
  auto flat = presets::e3(Scalar(0));
  const Element b = basis(*flat, "x") + basis(*flat, "y");
  ASSERT_TRUE(eval_eb(*flat, b).is_zero());
  for (std::size_t x = 0; x < flat->space()->dim(); ++x) EXPECT_TRUE(obstruction_residual(*flat, b, x).is_zero());
  auto e4 = presets::e4();
  for (std::size_t x = 0; x < e4->space()->dim(); ++x) {
    EXPECT_TRUE(obstruction_residual(*e4, Element(e4->space()), x).is_zero());
  }
}

TEST(Obstruction, ThreeFormulationsAgree) {
  Rng rng(15);
  auto structures = element_level_presets();
  structures.push_back(curved_e4());
  int obstructed = 0, unobstructed = 0;
  for (const auto& a : structures) {
    for (int trial = 0; trial < 20; ++trial) {
      const Element b = rng.element(a->space(), 1, 0.8);
      bool residual_zero = true;
      for (std::size_t x = 0; x < a->space()->dim(); ++x) {
        if (!obstruction_residual(*a, b, x).is_zero()) residual_zero = false;
      }
      const auto d = deform(*a, b);
      const bool square_zero = compose_linear(d.op(1), d.op(1)).is_zero();
      const Element m0 = d.op(0).value();
      const bool central = m0.is_zero() || center_check(d, m0);
      EXPECT_EQ(residual_zero, square_zero);
      EXPECT_EQ(residual_zero, central);
      (residual_zero ? unobstructed : obstructed)++;
    }
  }
  EXPECT_GT(unobstructed, 0);
}

TEST(Obstruction, NoncommutativeModelHasObstructedDeformations) {
  // Free algebra on two degree-1 generators, words of length <= 3.
  std::vector<std::string> words{""};
  for (std::size_t len = 1; len <= 3; ++len) {
    for (const auto& w : std::vector<std::string>(words)) {
      if (w.size() == len - 1) {
        words.push_back(w + "a");
        words.push_back(w + "b");
      }
    }
  }
  std::vector<BasisEntry> basis;
  for (const auto& w : words) basis.push_back({w.empty() ? "1" : w, static_cast<int>(w.size())});
  CdgaModel model;
  model.space = make_space(basis);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      const std::string w = words[i] + words[j];
      if (w.size() <= 3) model.product[{i, j}] = SparseVector{{model.space->index_of(w.empty() ? "1" : w), Scalar(1)}};
    }
  }
  const auto a = std::make_shared<AInftyStructure>(build_de_rham_model(model, Element(model.space)));
  ASSERT_FALSE(check_all_constructions(*a).has_value());
  Rng rng(16);
  int obstructed = 0, unobstructed = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Element b = rng.element(a->space(), 1, 0.8);
    bool residual_zero = true;
    for (std::size_t x = 0; x < a->space()->dim(); ++x) residual_zero &= obstruction_residual(*a, b, x).is_zero();
    const auto d = deform(*a, b);
    const bool square_zero = compose_linear(d.op(1), d.op(1)).is_zero();
    const Element m0 = d.op(0).value();
    EXPECT_EQ(residual_zero, square_zero);
    EXPECT_EQ(residual_zero, m0.is_zero() || center_check(d, m0));
    (residual_zero ? unobstructed : obstructed)++;
  }
  EXPECT_GT(obstructed, 0);
  EXPECT_GT(unobstructed, 0);
}

TEST(SolveMC, TargetEqualToCurvatureGivesZero) {
  for (const auto& a : element_level_presets()) {
    MCProblem p{a, a->op(0).value(), std::nullopt, MCStrategy::Filtration, {}, {}};
    const auto r = solve_mc(p);
    ASSERT_TRUE(r.solution.has_value());
    EXPECT_TRUE(r.solution->is_zero());
  }
}

TEST(SolveMC, TorusWithCurvatureIsProvablyUnsolvable) {
  auto e3 = presets::e3(Scalar(1));
  for (auto strategy : {MCStrategy::Filtration, MCStrategy::Newton}) {
    MCProblem p{e3, Element(e3->space()), std::nullopt, strategy, {}, {}};
    const auto r = solve_mc(p);
    EXPECT_FALSE(r.solution.has_value());
    EXPECT_TRUE(r.provably_unsolvable);
    ASSERT_TRUE(r.residual.has_value());
    EXPECT_EQ(*r.residual, basis(*e3, "w"));
  }
  auto flat = presets::e3(Scalar(0));
  const auto r = solve_mc(MCProblem{flat, Element(flat->space()), std::nullopt, MCStrategy::Filtration, {}, {}});
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_TRUE(r.solution->is_zero());
}

TEST(SolveMC, IntervalByFiltrationAndNewton) {
  auto interval = presets::interval();
  const Element zero(interval->space());
  const auto f = solve_mc(MCProblem{interval, zero, std::nullopt, MCStrategy::Filtration, {}, {}});
  ASSERT_TRUE(f.solution.has_value());
  EXPECT_EQ(*f.solution, basis(*interval, "s"));
  EXPECT_TRUE(eval_eb(*interval, *f.solution).is_zero());

  const auto n = solve_mc(MCProblem{interval, zero, Scalar(1, 3) * basis(*interval, "s"), MCStrategy::Newton, {}, {}});
  ASSERT_TRUE(n.solution.has_value());
  EXPECT_EQ(*n.solution, basis(*interval, "s"));
  // The exact 2-form d(s) is removed by deforming along s.
  EXPECT_TRUE(deform(*interval, basis(*interval, "s")).op(0).is_zero());
}

TEST(SolveMC, NewtonOnCubic) {
  // m_0 = -8q, m_3(p, p, p) = q: m(e^{βp}) = (β^3 - 8) q.
  auto space = make_space({{"p", 1}, {"q", 2}});
  MultiMap m3(space, 3, -1);
  m3.set({0, 0, 0}, {{1, Scalar(1)}});
  auto a = std::make_shared<AInftyStructure>(
      space, Convention::ElementLevel, 3,
      std::vector<MultiMap>{MultiMap::constant(Scalar(-8) * Element::basis(space, 1), 2), m3});
  const auto r = solve_mc(MCProblem{a, Element(space), Scalar(3, 2) * Element::basis(space, 0), MCStrategy::Newton, {}, {}});
  ASSERT_TRUE(r.solution.has_value()) << r.note;
  EXPECT_EQ(*r.solution, Scalar(2) * Element::basis(space, 0));

  // An irrational root is found in floating point but never certified.
  auto b = std::make_shared<AInftyStructure>(
      space, Convention::ElementLevel, 3,
      std::vector<MultiMap>{MultiMap::constant(Scalar(-2) * Element::basis(space, 1), 2), m3});
  const auto irr = solve_mc(MCProblem{b, Element(space), Element::basis(space, 0), MCStrategy::Newton, {}, {}});
  EXPECT_FALSE(irr.solution.has_value());
  EXPECT_FALSE(irr.provably_unsolvable);
  EXPECT_LT(irr.float_residual, 1e-9);
  ASSERT_TRUE(irr.residual.has_value());
  EXPECT_FALSE(irr.residual->is_zero());
}

TEST(SolveMC, NewtonOnUnderdeterminedCurvedE4) {
  Rng rng(16);
  auto a = curved_e4();
  for (int trial = 0; trial < 10; ++trial) {
    const Element truth = rng.element(a->space(), 1, 1.0);
    const Element target = eval_eb(*a, truth);
    const auto r = solve_mc(MCProblem{a, target, truth + Scalar(1, 50) * basis(*a, "p"), MCStrategy::Newton, {}, {}});
    // One equation in two unknowns: any returned solution must be exact.
    if (r.solution) EXPECT_EQ(eval_eb(*a, *r.solution), target);
    else EXPECT_FALSE(r.note.empty());
  }
}

TEST(SolveMC, FiltrationHypothesisIsChecked) {
  auto a = curved_e4();
  // With every weight 0, m_2 and m_3 do not raise weight.
  MCProblem p{a, Element(a->space()), std::nullopt, MCStrategy::Filtration, {}, {}};
  EXPECT_THROW(solve_mc(p), PreconditionError);
  // Degree-2 output q heavier than the degree-1 unknowns satisfies it.
  p.weights = {{idx(*a, "q"), 1}};
  const auto r = solve_mc(p);
  if (r.solution) EXPECT_TRUE(eval_eb(*a, *r.solution).is_zero());
}

TEST(Classify, Examples) {
  auto flat = presets::e3(Scalar(0));
  auto r1 = classify_unobstructed(*flat);
  ASSERT_TRUE(r1.unobstructed_b.has_value());
  EXPECT_TRUE(r1.unobstructed_b->is_zero());

  auto e3 = presets::e3(Scalar(3));
  auto r2 = classify_unobstructed(*e3);
  EXPECT_FALSE(r2.unobstructed_b.has_value());
  ASSERT_TRUE(r2.weakly_unobstructed.has_value());
  EXPECT_EQ(r2.weakly_unobstructed->first, Scalar(3) * basis(*e3, "w"));

  auto e4 = presets::e4();
  auto r3 = classify_unobstructed(*e4);
  ASSERT_TRUE(r3.unobstructed_b.has_value());
  EXPECT_TRUE(r3.unobstructed_b->is_zero());
  EXPECT_FALSE(r3.grid.empty());
}

TEST(LinearSubset, Examples) {
  auto flat = presets::e3(Scalar(0));
  auto r1 = linear_subset_certificate(*flat, basis(*flat, "x"));
  EXPECT_TRUE(r1.identity_verified);
  EXPECT_TRUE(r1.hypothesis_holds);
  for (const auto& c : r1.coefficients) EXPECT_TRUE(c.is_zero());

  auto e3 = presets::e3(Scalar(2));
  auto r2 = linear_subset_certificate(*e3, basis(*e3, "x"));
  EXPECT_TRUE(r2.identity_verified);
  EXPECT_FALSE(r2.hypothesis_holds);
  ASSERT_TRUE(r2.first_nonzero.has_value());
  EXPECT_EQ(*r2.first_nonzero, 0);

  auto r3 = linear_subset_certificate(*e3, Element(e3->space()));
  EXPECT_FALSE(r3.hypothesis_holds);
  auto r4 = linear_subset_certificate(*flat, Element(flat->space()));
  EXPECT_TRUE(r4.hypothesis_holds);
}

TEST(LinearSubset, CoefficientsMatchEvaluation) {
  Rng rng(17);
  auto a = curved_e4();
  for (int trial = 0; trial < 10; ++trial) {
    const Element b = rng.element(a->space(), 1, 1.0);
    const auto r = linear_subset_certificate(*a, b);
    EXPECT_TRUE(r.identity_verified);
    // λ = 1/2 lies outside the sample points used by the certificate.
    const Scalar lambda(1, 2);
    Element sum(a->space());
    Scalar power(1);
    for (const auto& c : r.coefficients) {
      sum += power * c;
      power *= lambda;
    }
    EXPECT_EQ(sum, eval_eb(*a, lambda * b));
  }
}

TEST(GeneralEndo, ZeroF2ReducesToDeform) {
  Rng rng(18);
  auto a = curved_e4();
  const auto& space = a->space();
  for (int trial = 0; trial < 5; ++trial) {
    const Element b = rng.element(space, 1, 1.0);
    const auto r = general_endo_deform(*a, {MultiMap(space, 2, -1), MultiMap(space, 3, -2), b});
    const auto d = deform(*a, b);
    EXPECT_EQ(r.m0, d.op(0).value());
    EXPECT_EQ(r.m1, d.op(1));
    EXPECT_EQ(r.m2, d.op(2));
    for (std::size_t x = 0; x < space->dim(); ++x) EXPECT_EQ(r.residuals[x], obstruction_residual(*a, b, x));
  }
}

TEST(GeneralEndo, MaurerCartanSolutionStaysUnobstructed) {
  Rng rng(19);
  auto flat = presets::e3(Scalar(0));
  const auto& space = flat->space();
  for (int trial = 0; trial < 5; ++trial) {
    const Element b = rng.element(space, 1, 1.0);
    ASSERT_TRUE(eval_eb(*flat, b).is_zero());
    const auto r = general_endo_deform(*flat, {rng.map(space, 2, -1, 0.8), rng.map(space, 3, -2, 0.8), b});
    EXPECT_TRUE(r.m0.is_zero());
    EXPECT_TRUE(r.m1_kills_a);
    for (const auto& res : r.residuals) EXPECT_TRUE(res.is_zero());
  }
}

TEST(GeneralEndo, CentralF2ReproducesAlmostIdentityResidual) {
  Rng rng(20);
  auto e3 = presets::e3(Scalar(3));
  const auto& space = e3->space();
  const std::size_t w = idx(*e3, "w");
  for (int trial = 0; trial < 5; ++trial) {
    MultiMap f2 = rng.map(space, 2, -1, 0.8);
    // Impose f_2(w, x) = (-1)^{|x|} f_2(x, w).
    for (std::size_t x = 0; x < space->dim(); ++x) {
      const Element fx = f2.at({x, w});
      f2.set({w, x}, ((space->degree(x) % 2 == 0 ? Scalar(1) : Scalar(-1)) * fx).coeffs());
    }
    const Element b = rng.element(space, 1, 1.0);
    const auto r = general_endo_deform(*e3, {f2, rng.map(space, 3, -2, 0.5), b});
    EXPECT_TRUE(r.center_property);
    for (std::size_t x = 0; x < space->dim(); ++x) EXPECT_EQ(r.residuals[x], obstruction_residual(*e3, b, x));
  }
}

TEST(DeRham, ModelsAndRejection) {
  const auto torus = presets::torus_model();
  auto strict = build_de_rham_model(torus, Element(torus.space));
  EXPECT_TRUE(strict.is_strict());
  EXPECT_FALSE(check_all_constructions(strict).has_value());

  const auto interval = presets::interval_model();
  const Element s = Element::basis(interval.space, interval.space->index_of("s"));
  EXPECT_THROW(build_de_rham_model(interval, s), DegreeError);
  // A degree-2 element with nonzero d needs a degree-3 target.
  CdgaModel open;
  open.space = make_space({{"1", 0}, {"w", 2}, {"t", 3}});
  for (std::size_t i = 0; i < 3; ++i) {
    open.product[{0, i}] = {{i, Scalar(1)}};
    open.product[{i, 0}] = {{i, Scalar(1)}};
  }
  open.differential[1] = {{2, Scalar(1)}};
  EXPECT_THROW(build_de_rham_model(open, Element::basis(open.space, 1)), PreconditionError);
  EXPECT_NO_THROW(build_de_rham_model(open, Element(open.space)));
}
