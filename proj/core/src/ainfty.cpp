#include "ainf/ainfty.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ainf/error.hpp"

namespace ainf {

std::string to_string(Convention c) { return c == Convention::MapLevel ? "map-level" : "element-level"; }

Convention convention_from_string(const std::string& text) {
  if (text == "map-level") return Convention::MapLevel;
  if (text == "element-level") return Convention::ElementLevel;
  throw DomainError("unknown convention '" + text + "' (expected map-level or element-level)");
}

std::string Witness::describe() const {
  std::ostringstream os;
  os << "arity " << arity << " on (";
  const auto& space = *value.space();
  for (std::size_t i = 0; i < inputs.size(); ++i) os << (i ? "," : "") << space[inputs[i]].name;
  os << ") -> " << value.to_string();
  return os.str();
}

std::optional<Witness> first_nonzero(const MultiMap& residual) {
  if (residual.is_zero()) return std::nullopt;
  const auto& [inputs, output] = *residual.table().begin();
  return Witness{residual.arity(), inputs, Element(residual.space(), output)};
}

namespace {

void require_bidegree(const MultiMap& m, int arity, int degree, const char* what) {
  if (m.arity() != arity || m.degree() != degree) {
    throw DomainError(std::string(what) + " of arity " + std::to_string(arity) + " must have degree " +
                      std::to_string(degree) + ", got (" + std::to_string(m.arity()) + "," +
                      std::to_string(m.degree()) + ")");
  }
}

/// Compositions of n into k parts, each in [min_part, max_part].
void for_each_composition(int n, int k, int min_part, int max_part,
                          const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> parts;
  auto recurse = [&](auto&& self, int remaining, int slots) -> void {
    if (slots == 0) {
      if (remaining == 0) visit(parts);
      return;
    }
    for (int p = min_part; p <= std::min(max_part, remaining); ++p) {
      if (remaining - p < min_part * (slots - 1)) break;
      parts.push_back(p);
      self(self, remaining - p, slots - 1);
      parts.pop_back();
    }
  };
  recurse(recurse, n, k);
}

}  // namespace

AInftyStructure::AInftyStructure(SpacePtr space, Convention convention, int kmax, std::vector<MultiMap> maps,
                                 Validation validation)
    : space_(std::move(space)), convention_(convention), kmax_(kmax) {
  if (kmax < 1) throw DomainError("kmax must be at least 1");
  for (auto& m : maps) {
    if (m.arity() > kmax) {
      throw DomainError("operation of arity " + std::to_string(m.arity()) + " exceeds kmax " + std::to_string(kmax));
    }
    require_bidegree(m, m.arity(), 2 - m.arity(), "structure map");
    if (!same_space(m.space(), space_)) throw DomainError("structure map lives on a different space");
    if (m.is_zero()) continue;
    if (m.arity() == 0 && convention == Convention::MapLevel) {
      throw ConventionError("map-level structures are strict; m_0 must vanish");
    }
    auto [it, inserted] = maps_.emplace(m.arity(), std::move(m));
    if (!inserted) throw DomainError("operation of arity " + std::to_string(it->first) + " given twice");
  }
  zero_maps_.reserve(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) zero_maps_.emplace_back(space_, k, 2 - k);
  if (validation == Validation::Eager) {
    if (auto w = check_all_constructions(*this)) {
      throw AxiomError("construction equation fails at " + w->describe());
    }
  }
}

const MultiMap& AInftyStructure::op(int k) const {
  auto it = maps_.find(k);
  if (it != maps_.end()) return it->second;
  if (k < 0 || k > kmax_) throw ArityError("operation index " + std::to_string(k) + " outside [0, kmax]");
  return zero_maps_[static_cast<std::size_t>(k)];
}

bool AInftyStructure::has_op(int k) const { return maps_.count(k) != 0; }

Element AInftyStructure::curvature() const {
  if (!has_op(0)) return Element(space_);
  return op(0).value();
}

bool operator==(const AInftyStructure& a, const AInftyStructure& b) {
  return same_space(a.space_, b.space_) && a.convention_ == b.convention_ && a.kmax_ == b.kmax_ &&
         a.maps_ == b.maps_;
}

int first_equation_index(const AInftyStructure& a) { return a.convention() == Convention::MapLevel ? 1 : 0; }

MultiMap check_construction(const AInftyStructure& a, int n) {
  if (n < first_equation_index(a)) {
    throw PreconditionError("construction equation index " + std::to_string(n) + " is below " +
                            std::to_string(first_equation_index(a)) + " for " + to_string(a.convention()));
  }
  MultiMap residual(a.space(), n, 3 - n);
  const bool map_level = a.convention() == Convention::MapLevel;
  const SignRule rule = sign_rule(a.convention());
  for (int s = map_level ? 1 : 0; s <= n; ++s) {
    if (!a.has_op(s)) continue;
    for (int r = 0; r + s <= n; ++r) {
      const int t = n - r - s;
      const int u = r + 1 + t;
      if (u > a.kmax() || !a.has_op(u)) continue;
      MultiMap term = insert(a.op(u), a.op(s), r, rule);
      if (map_level && sign_power(static_cast<long>(r) * s + t) < 0) term *= Scalar(-1);
      residual += term;
    }
  }
  return residual;
}

std::optional<Witness> check_all_constructions(const AInftyStructure& a) {
  for (int n = first_equation_index(a); n <= 2 * a.kmax() - 1; ++n) {
    if (auto w = first_nonzero(check_construction(a, n))) return w;
  }
  return std::nullopt;
}

Morphism::Morphism(StructurePtr source, StructurePtr target, std::vector<MultiMap> maps)
    : source_(std::move(source)), target_(std::move(target)) {
  if (!source_ || !target_) throw DomainError("morphism needs a source and a target");
  if (source_->convention() != target_->convention()) {
    throw ConventionError("morphism source and target use different sign conventions");
  }
  if (!same_space(source_->space(), target_->space())) {
    throw DomainError("morphisms between different spaces are not supported");
  }
  for (auto& m : maps) {
    require_bidegree(m, m.arity(), 1 - m.arity(), "morphism component");
    fmax_ = std::max(fmax_, m.arity());
    if (m.is_zero()) continue;
    if (m.arity() == 0 && source_->convention() == Convention::MapLevel) {
      throw ConventionError("map-level morphisms have no f_0 component");
    }
    auto [it, inserted] = maps_.emplace(m.arity(), std::move(m));
    if (!inserted) throw DomainError("component of arity " + std::to_string(it->first) + " given twice");
  }
  for (int k = 0; k <= fmax_; ++k) zero_maps_.emplace_back(source_->space(), k, 1 - k);
}

Morphism Morphism::identity(const StructurePtr& a) {
  return Morphism(a, a, {MultiMap::identity(a->space())});
}

Morphism Morphism::weakly_strict(StructurePtr source, StructurePtr target, const Element& shift, MultiMap linear) {
  std::vector<MultiMap> maps;
  maps.push_back(MultiMap::constant(shift, 1));
  maps.push_back(std::move(linear));
  return Morphism(std::move(source), std::move(target), std::move(maps));
}

const MultiMap& Morphism::component(int k) const {
  auto it = maps_.find(k);
  if (it != maps_.end()) return it->second;
  if (k < 0 || k > fmax_) throw ArityError("component index " + std::to_string(k) + " outside [0, fmax]");
  return zero_maps_[static_cast<std::size_t>(k)];
}

bool Morphism::has_component(int k) const { return maps_.count(k) != 0; }

bool Morphism::strict_s1() const {
  return std::none_of(maps_.begin(), maps_.end(), [](const auto& kv) { return kv.first >= 2; });
}

bool Morphism::strict_s3() const { return !has_component(0); }

bool Morphism::almost_identity() const {
  return weakly_strict() && has_component(1) && component(1) == MultiMap::identity(source_->space());
}

MultiMap check_morphism(const Morphism& f, int n) {
  const AInftyStructure& src = *f.source();
  const AInftyStructure& tgt = *f.target();
  const bool map_level = src.convention() == Convention::MapLevel;
  const SignRule rule = sign_rule(src.convention());
  if (n < 0 || (map_level && n < 1)) throw PreconditionError("morphism equation index out of range");

  MultiMap residual(src.space(), n, 2 - n);
  // Left side: f_u ∘ (I^r ⊗ m_s ⊗ I^t).
  for (int s = map_level ? 1 : 0; s <= n; ++s) {
    if (!src.has_op(s)) continue;
    for (int r = 0; r + s <= n; ++r) {
      const int t = n - r - s;
      const int u = r + 1 + t;
      if (!f.has_component(u)) continue;
      MultiMap term = insert(f.component(u), src.op(s), r, rule);
      if (map_level && sign_power(static_cast<long>(r) * s + t) < 0) term *= Scalar(-1);
      residual += term;
    }
  }
  // Right side: m_k ∘ (f_{i_1} ⊗ ... ⊗ f_{i_k}).
  const int min_part = map_level ? 1 : 0;
  const int min_k = (map_level || n >= 1) ? 1 : 0;
  for (int k = min_k; k <= tgt.kmax(); ++k) {
    if (!tgt.has_op(k)) continue;
    if (map_level && k > n) break;
    for_each_composition(n, k, min_part, f.fmax(), [&](const std::vector<int>& parts) {
      std::vector<MultiMap> inners;
      inners.reserve(parts.size());
      for (int p : parts) {
        if (!f.has_component(p)) return;
        inners.push_back(f.component(p));
      }
      MultiMap term = compose(tgt.op(k), inners, rule);
      if (map_level) {
        // Sum over slot pairs p < q of i_p (i_q + 1).
        long sign = 0;
        for (int p = 0; p < k; ++p) {
          for (int q = p + 1; q < k; ++q) sign += static_cast<long>(parts[static_cast<std::size_t>(p)]) * (parts[static_cast<std::size_t>(q)] + 1);
        }
        if (sign_power(sign) < 0) term *= Scalar(-1);
      }
      residual -= term;
    });
  }
  return residual;
}

std::optional<Witness> check_morphism_upto(const Morphism& f, std::optional<int> max_n) {
  const int kmax = std::max(f.source()->kmax(), f.target()->kmax());
  const int limit = max_n.value_or(2 * kmax + f.fmax());
  const int start = f.source()->convention() == Convention::MapLevel ? 1 : 0;
  for (int n = start; n <= limit; ++n) {
    if (auto w = first_nonzero(check_morphism(f, n))) return w;
  }
  return std::nullopt;
}

AInftyStructure pullback_strict(const AInftyStructure& m, const MultiMap& f1, const MultiMap& f1_inverse) {
  require_bidegree(f1, 1, 0, "pullback map");
  require_bidegree(f1_inverse, 1, 0, "pullback inverse");
  const auto id = MultiMap::identity(m.space());
  if (!(compose_linear(f1, f1_inverse) == id) || !(compose_linear(f1_inverse, f1) == id)) {
    throw PreconditionError("pullback: the given maps are not mutually inverse");
  }
  std::vector<MultiMap> maps;
  for (const auto& [k, mk] : m.ops()) {
    std::vector<MultiMap> inners(static_cast<std::size_t>(k), f1);
    MultiMap inner = compose(mk, inners, SignRule::Koszul);
    const MultiMap outer[] = {inner};
    maps.push_back(compose(f1_inverse, outer, SignRule::Koszul));
  }
  return AInftyStructure(m.space(), m.convention(), m.kmax(), std::move(maps));
}

Morphism compose_weakly_strict(const Morphism& f, const Morphism& g) {
  if (!f.weakly_strict() || !g.weakly_strict()) throw PreconditionError("compose: morphisms must be weakly strict");
  if (!(*g.target() == *f.source())) throw PreconditionError("compose: target of g is not the source of f");
  const MultiMap& f1 = f.component(1);
  const MultiMap& g1 = g.component(1);
  const Element g0 = g.has_component(0) ? g.component(0).value() : Element(g.source()->space());
  const Element f0 = f.has_component(0) ? f.component(0).value() : Element(f.source()->space());
  const Element g0_image = g0.is_zero() ? Element(f.source()->space()) : evaluate(f1, std::vector<Element>{g0});
  std::vector<MultiMap> maps;
  maps.push_back(MultiMap::constant(f0 + g0_image, 1));
  maps.push_back(compose_linear(f1, g1));
  return Morphism(g.source(), f.target(), std::move(maps));
}

}  // namespace ainf
