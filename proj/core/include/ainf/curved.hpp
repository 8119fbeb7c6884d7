#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ainf/ainfty.hpp"

namespace ainf {

/// Σ_k Σ m_k(b, ..., b, g_1, b, ..., b, g_r, b, ..., b): every way of padding
/// the slot maps g_j with copies of b, summed over k <= kmax. Slot maps are
/// typically I (a free input) or arity-0 constants. Element-level only.
MultiMap eb_compose(const AInftyStructure& a, const Element& b, std::span<const MultiMap> slots);

/// m(e^b) = m_0(1) + m_1(b) + m_2(b, b) + ...
Element eval_eb(const AInftyStructure& a, const Element& b);

/// m̃_n(x_1..x_n) = m(e^b x_1 e^b ... x_n e^b), m̃_0 = m(e^b).
AInftyStructure deform(const AInftyStructure& a, const Element& b);

/// The almost identity (f_0 = b, f_1 = I) from deform(a, b) to a.
Morphism deformation_morphism(const StructurePtr& deformed, const StructurePtr& a, const Element& b);

struct InverseDeformReport {
  bool structures_equal = false;
  bool composition_is_identity = false;
  bool holds() const { return structures_equal && composition_is_identity; }
};

/// deform(deform(a, b), -b) == a, and the two almost identities compose to
/// the identity automorphism.
InverseDeformReport inverse_deform_certificate(const AInftyStructure& a, const Element& b);

/// m_2(c, x) = (-1)^{|x|} m_2(x, c) for every basis x; c of even degree.
bool center_check(const AInftyStructure& a, const Element& c);

/// m_k vanishes whenever c occupies any slot, for every k >= 3.
bool partial_unital_check(const AInftyStructure& a, const Element& c);

/// e in A^0, m_1(e) = 0, partial unital, and m_2(e, x) = x for every basis x.
/// Map-level structures also require m_2(x, e) = x; element-level ones
/// m_2(x, e) = (-1)^{|x|} x.
bool unit_check(const AInftyStructure& a, const Element& e);

/// m(e^b a e^b x e^b) - (-1)^{|x|} m(e^b x e^b a e^b) with a = m(e^b).
Element obstruction_residual(const AInftyStructure& a, const Element& b, std::size_t x);

enum class MCStrategy { Filtration, Newton };

struct NewtonOptions {
  int max_iterations = 100;
  double tolerance = 1e-12;
  std::int64_t max_denominator = 1000000;
};

struct MCProblem {
  StructurePtr structure;
  Element target;
  std::optional<Element> seed;
  MCStrategy strategy = MCStrategy::Filtration;
  /// Filtration weight per basis index; unlisted entries weigh 0.
  std::map<std::size_t, int> weights;
  NewtonOptions newton;
};

struct MCResult {
  /// Present only when eval_eb(solution) == target was verified exactly.
  std::optional<Element> solution;
  /// m(e^b) - a is independent of b and nonzero, so no solution exists.
  bool provably_unsolvable = false;
  /// Exact residual of the best candidate, when there is one.
  std::optional<Element> residual;
  double float_residual = 0.0;
  int iterations = 0;
  std::string note;
};

/// Throws PreconditionError (with witness) when the filtration hypothesis
/// fails.
MCResult solve_mc(const MCProblem& problem);

struct UnobstructedReport {
  /// Case 1: b with m(e^b) = 0.
  std::optional<Element> unobstructed_b;
  /// Case 2: target a with the partial unital property and some b in MC(a).
  std::optional<std::pair<Element, Element>> weakly_unobstructed;
  /// Case 3: partial unital b with m_2(b, b) = 0 and m_0 + m_1(b) central.
  std::optional<Element> case3_b;
  std::vector<Scalar> grid;
};

/// Searches b = g e_i over degree-1 basis entries e_i and grid values g.
UnobstructedReport classify_unobstructed(const AInftyStructure& a);

struct LinearSubsetReport {
  /// coefficients[k] = m_k(b, ..., b), the λ^k coefficient of m(e^{λb}).
  std::vector<Element> coefficients;
  /// Σ λ^k coefficients[k] == m(e^{λb}) at λ = 0..kmax.
  bool identity_verified = false;
  /// λb ∈ MC(0) for all λ.
  bool hypothesis_holds = false;
  std::optional<int> first_nonzero;
};

LinearSubsetReport linear_subset_certificate(const AInftyStructure& a, const Element& b);

struct GeneralEndoData {
  MultiMap f2;
  MultiMap f3;
  Element b;
};

struct GeneralEndoReport {
  Element m0;
  MultiMap m1;
  MultiMap m2;
  /// Obstruction residual per basis index.
  std::vector<Element> residuals;
  /// f_2(a, x) = (-1)^{|x|} f_2(x, a) for every basis x.
  bool center_property = false;
  /// m̃_1(a) = 0.
  bool m1_kills_a = false;
};

GeneralEndoReport general_endo_deform(const AInftyStructure& a, const GeneralEndoData& data);

}  // namespace ainf
