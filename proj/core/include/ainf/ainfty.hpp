#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/graded_space.hpp"
#include "ainf/multimap.hpp"

namespace ainf {

/// Sign convention of the construction equations.
///
/// MapLevel: sum (-1)^{rs+t} m_u(I^r ⊗ m_s ⊗ I^t) = 0 with Koszul signs on
/// evaluation; strict only (no m_0).
/// ElementLevel: sum (-1)^{Σ_{i≤r}(|x_i|-1)} m_u(x_1..x_r, m_s(...), ...) = 0,
/// curvature m_0 allowed.
enum class Convention { MapLevel, ElementLevel };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& text);

inline SignRule sign_rule(Convention c) {
  return c == Convention::MapLevel ? SignRule::Koszul : SignRule::Shifted;
}

enum class Validation { Eager, Deferred };

/// First nonzero entry of a residual map.
struct Witness {
  int arity = 0;
  Inputs inputs;
  Element value;

  std::string describe() const;
};

std::optional<Witness> first_nonzero(const MultiMap& residual);

/// A graded space with operations m_k of arity k and internal degree 2 - k
/// for 0 <= k <= kmax. Absent operations are zero.
class AInftyStructure {
 public:
  /// Throws AxiomError (with witness) under eager validation when some
  /// construction equation fails.
  AInftyStructure(SpacePtr space, Convention convention, int kmax, std::vector<MultiMap> maps,
                  Validation validation = Validation::Eager);

  const SpacePtr& space() const { return space_; }
  Convention convention() const { return convention_; }
  int kmax() const { return kmax_; }

  /// m_k, or the zero map of the right bidegree.
  const MultiMap& op(int k) const;
  bool has_op(int k) const;
  const std::map<int, MultiMap>& ops() const { return maps_; }

  /// m_0(1), zero when strict.
  Element curvature() const;
  bool is_strict() const { return !has_op(0); }

  friend bool operator==(const AInftyStructure& a, const AInftyStructure& b);

 private:
  SpacePtr space_;
  Convention convention_;
  int kmax_;
  std::map<int, MultiMap> maps_;
  std::vector<MultiMap> zero_maps_;
};

using StructurePtr = std::shared_ptr<const AInftyStructure>;

/// Lowest n at which the construction equations are defined.
int first_equation_index(const AInftyStructure& a);

/// Left-hand side of the arity-n construction equation (arity n, degree 3 - n).
MultiMap check_construction(const AInftyStructure& a, int n);

/// Checks every n in [first_equation_index, 2 kmax - 1]; returns the first
/// failure.
std::optional<Witness> check_all_constructions(const AInftyStructure& a);

/// A family f_0..f_fmax with f_k of arity k and internal degree 1 - k.
/// f_0 is only allowed for ElementLevel morphisms.
class Morphism {
 public:
  Morphism(StructurePtr source, StructurePtr target, std::vector<MultiMap> maps);

  static Morphism identity(const StructurePtr& a);
  /// Weakly strict morphism (f_0 = shift, f_1 = linear).
  static Morphism weakly_strict(StructurePtr source, StructurePtr target, const Element& shift, MultiMap linear);

  const StructurePtr& source() const { return source_; }
  const StructurePtr& target() const { return target_; }
  int fmax() const { return fmax_; }
  const MultiMap& component(int k) const;
  bool has_component(int k) const;
  const std::map<int, MultiMap>& components() const { return maps_; }

  /// f_n = 0 for all n >= 2 (the strict notion of the map-level setting).
  bool strict_s1() const;
  /// f_0 = 0 (the strict notion of the curved setting).
  bool strict_s3() const;
  bool weakly_strict() const { return strict_s1(); }
  bool almost_identity() const;
  bool identity_automorphism() const { return almost_identity() && strict_s3(); }

 private:
  StructurePtr source_;
  StructurePtr target_;
  int fmax_ = 1;
  std::map<int, MultiMap> maps_;
  std::vector<MultiMap> zero_maps_;
};

/// LHS - RHS of the arity-n morphism equation.
MultiMap check_morphism(const Morphism& f, int n);

/// Checks every n up to `max_n` (default: 2 * max(kmax, fmax) + fmax).
std::optional<Witness> check_morphism_upto(const Morphism& f, std::optional<int> max_n = std::nullopt);

/// m'_n = f1^{-1} ∘ m_n ∘ (f1 ⊗ ... ⊗ f1) for a degree-0 linear automorphism.
AInftyStructure pullback_strict(const AInftyStructure& m, const MultiMap& f1, const MultiMap& f1_inverse);

/// (f∘g)_0 = f_0 + f_1(g_0), (f∘g)_1 = f_1 ∘ g_1.
Morphism compose_weakly_strict(const Morphism& f, const Morphism& g);

}  // namespace ainf
