#include "ainf/curved.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "ainf/error.hpp"
#include "ainf/linalg.hpp"

namespace ainf {

namespace {

void require_element_level(const AInftyStructure& a, const char* what) {
  if (a.convention() != Convention::ElementLevel) {
    throw ConventionError(std::string(what) + " needs an element-level structure");
  }
}

void require_degree_one(const Element& b) {
  if (!b.is_zero() && b.degree() != 1) throw DegreeError("b must be homogeneous of degree 1");
}

Element apply_to(const MultiMap& f, std::initializer_list<Element> inputs) {
  const std::vector<Element> v(inputs);
  return evaluate(f, v);
}

/// Sign (-1)^{|x|} for a basis index.
Scalar parity(const GradedSpace& space, std::size_t x) { return Scalar(sign_power(space.degree(x))); }

}  // namespace

MultiMap eb_compose(const AInftyStructure& a, const Element& b, std::span<const MultiMap> slots) {
  require_element_level(a, "e^b insertion");
  require_degree_one(b);
  const int r = static_cast<int>(slots.size());
  int arity = 0;
  int degree = 2 - r;
  for (const auto& g : slots) {
    arity += g.arity();
    degree += g.degree();
  }
  MultiMap result(a.space(), arity, degree);
  const MultiMap pad = MultiMap::constant(b, 1);
  for (const auto& [k, mk] : a.ops()) {
    if (k < r) continue;
    if (k > r && b.is_zero()) continue;
    // Choose which of the k slots carry the given maps.
    std::vector<bool> chosen(static_cast<std::size_t>(k), false);
    std::fill(chosen.begin(), chosen.begin() + r, true);
    do {
      std::vector<MultiMap> inners;
      inners.reserve(static_cast<std::size_t>(k));
      std::size_t next = 0;
      for (bool c : chosen) inners.push_back(c ? slots[next++] : pad);
      result += compose(mk, inners, SignRule::Shifted);
    } while (std::prev_permutation(chosen.begin(), chosen.end()));
  }
  return result;
}

Element eval_eb(const AInftyStructure& a, const Element& b) { return eb_compose(a, b, {}).value(); }

AInftyStructure deform(const AInftyStructure& a, const Element& b) {
  require_element_level(a, "deform");
  require_degree_one(b);
  const MultiMap id = MultiMap::identity(a.space());
  std::vector<MultiMap> maps;
  for (int n = 0; n <= a.kmax(); ++n) {
    const std::vector<MultiMap> slots(static_cast<std::size_t>(n), id);
    maps.push_back(eb_compose(a, b, slots));
  }
  return AInftyStructure(a.space(), a.convention(), a.kmax(), std::move(maps));
}

Morphism deformation_morphism(const StructurePtr& deformed, const StructurePtr& a, const Element& b) {
  return Morphism::weakly_strict(deformed, a, b, MultiMap::identity(a->space()));
}

InverseDeformReport inverse_deform_certificate(const AInftyStructure& a, const Element& b) {
  auto original = std::make_shared<AInftyStructure>(a);
  auto forward = std::make_shared<AInftyStructure>(deform(a, b));
  auto back = std::make_shared<AInftyStructure>(deform(*forward, -b));
  InverseDeformReport report;
  report.structures_equal = *back == a;
  const Morphism f = deformation_morphism(forward, original, b);
  const Morphism g = deformation_morphism(back, forward, -b);
  report.composition_is_identity = compose_weakly_strict(f, g).identity_automorphism();
  return report;
}

bool center_check(const AInftyStructure& a, const Element& c) {
  require_element_level(a, "center check");
  if (c.is_zero()) return true;
  if (c.degree() % 2 != 0) throw DegreeError("center elements must have even degree");
  const MultiMap& m2 = a.op(2);
  for (std::size_t x = 0; x < a.space()->dim(); ++x) {
    const Element ex = Element::basis(a.space(), x);
    if (!(apply_to(m2, {c, ex}) == parity(*a.space(), x) * apply_to(m2, {ex, c}))) return false;
  }
  return true;
}

bool partial_unital_check(const AInftyStructure& a, const Element& c) {
  if (c.is_zero()) return true;
  if (!c.is_homogeneous()) throw DegreeError("partial unital check needs a homogeneous element");
  const MultiMap id = MultiMap::identity(a.space());
  const MultiMap fixed = MultiMap::constant(c, c.degree());
  for (const auto& [k, mk] : a.ops()) {
    if (k < 3) continue;
    for (int slot = 0; slot < k; ++slot) {
      std::vector<MultiMap> inners(static_cast<std::size_t>(k), id);
      inners[static_cast<std::size_t>(slot)] = fixed;
      if (!compose(mk, inners, sign_rule(a.convention())).is_zero()) return false;
    }
  }
  return true;
}

bool unit_check(const AInftyStructure& a, const Element& e) {
  if (e.is_zero() || !e.is_homogeneous() || e.degree() != 0) return false;
  if (!apply_to(a.op(1), {e}).is_zero()) return false;
  if (!partial_unital_check(a, e)) return false;
  const MultiMap& m2 = a.op(2);
  const bool map_level = a.convention() == Convention::MapLevel;
  for (std::size_t x = 0; x < a.space()->dim(); ++x) {
    const Element ex = Element::basis(a.space(), x);
    if (!(apply_to(m2, {e, ex}) == ex)) return false;
    const Element right = map_level ? ex : parity(*a.space(), x) * ex;
    if (!(apply_to(m2, {ex, e}) == right)) return false;
  }
  return true;
}

Element obstruction_residual(const AInftyStructure& a, const Element& b, std::size_t x) {
  // Elements are plugged in as values, so go through m(e^b - e^b - e^b)
  // rather than composing with constant maps (which would add crossing signs).
  const Element curvature = eval_eb(a, b);
  const MultiMap id = MultiMap::identity(a.space());
  const MultiMap slots[] = {id, id};
  const MultiMap eb2 = eb_compose(a, b, slots);
  const Element ex = Element::basis(a.space(), x);
  return apply_to(eb2, {curvature, ex}) - parity(*a.space(), x) * apply_to(eb2, {ex, curvature});
}

namespace {

Element from_coordinates(const SpacePtr& space, const std::vector<std::size_t>& indices,
                         const std::vector<Scalar>& values) {
  SparseVector coeffs;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!values[i].is_zero()) coeffs[indices[i]] = values[i];
  }
  return Element(space, std::move(coeffs));
}

/// True when m(e^b) does not depend on b: for every k >= 1 the polynomial
/// b -> m_k(b, ..., b) vanishes, i.e. for each multiset of degree-1 basis
/// inputs the sum over its distinct orderings is zero.
bool eb_is_constant(const AInftyStructure& a) {
  const GradedSpace& space = *a.space();
  for (const auto& [k, mk] : a.ops()) {
    if (k == 0) continue;
    std::map<Inputs, SparseVector> symmetrized;
    for (const auto& [inputs, out] : mk.table()) {
      if (!std::all_of(inputs.begin(), inputs.end(), [&](std::size_t i) { return space.degree(i) == 1; })) continue;
      Inputs key = inputs;
      std::sort(key.begin(), key.end());
      axpy(symmetrized[key], Scalar(1), out);
    }
    for (const auto& [key, sum] : symmetrized) {
      if (!sum.empty()) return false;
    }
  }
  return true;
}

void check_filtration(const AInftyStructure& a, const std::map<std::size_t, int>& weights) {
  const GradedSpace& space = *a.space();
  auto weight = [&](std::size_t i) {
    auto it = weights.find(i);
    return it == weights.end() ? 0 : it->second;
  };
  for (const auto& [k, mk] : a.ops()) {
    if (k == 0) continue;
    for (const auto& [inputs, out] : mk.table()) {
      if (!std::all_of(inputs.begin(), inputs.end(), [&](std::size_t i) { return space.degree(i) == 1; })) continue;
      int top = weight(inputs.front());
      for (auto i : inputs) top = std::max(top, weight(i));
      for (const auto& [j, v] : out) {
        const bool ok = k == 1 ? weight(j) >= top : weight(j) > top;
        if (!ok) {
          Witness w{k, inputs, Element(a.space(), out)};
          throw PreconditionError(std::string("filtration hypothesis fails: m_") + std::to_string(k) +
                                  (k == 1 ? " lowers" : " does not raise") + " weight at " + w.describe());
        }
      }
    }
  }
}

MCResult solve_filtration(const MCProblem& p) {
  const AInftyStructure& a = *p.structure;
  const GradedSpace& space = *a.space();
  check_filtration(a, p.weights);
  auto weight = [&](std::size_t i) {
    auto it = p.weights.find(i);
    return it == p.weights.end() ? 0 : it->second;
  };
  std::set<int> levels;
  for (auto i : space.of_degree(1)) levels.insert(weight(i));
  for (auto i : space.of_degree(2)) levels.insert(weight(i));

  MCResult result;
  Element b(a.space());
  for (int w : levels) {
    std::vector<std::size_t> unknowns;
    std::vector<std::size_t> equations;
    for (auto i : space.of_degree(1)) {
      if (weight(i) == w) unknowns.push_back(i);
    }
    for (auto j : space.of_degree(2)) {
      if (weight(j) == w) equations.push_back(j);
    }
    if (equations.empty()) continue;
    const Element residual = p.target - eval_eb(a, b);
    linalg::Matrix m(equations.size(), unknowns.size());
    std::vector<Scalar> rhs(equations.size());
    for (std::size_t c = 0; c < unknowns.size(); ++c) {
      const Element image = apply_to(a.op(1), {Element::basis(a.space(), unknowns[c])});
      for (std::size_t r = 0; r < equations.size(); ++r) m(r, c) = image.coeff(equations[r]);
    }
    for (std::size_t r = 0; r < equations.size(); ++r) rhs[r] = residual.coeff(equations[r]);
    auto x = linalg::solve(m, rhs);
    if (!x) {
      result.residual = residual;
      result.note = "linear system at weight " + std::to_string(w) + " is inconsistent";
      return result;
    }
    b += from_coordinates(a.space(), unknowns, *x);
  }
  const Element residual = eval_eb(a, b) - p.target;
  result.residual = residual;
  if (residual.is_zero()) {
    result.solution = b;
    result.note = "solved level by level";
  } else {
    result.note = "level-by-level candidate does not verify";
  }
  return result;
}

/// m(e^b) on degree-1 coordinates, in floating point, with its Jacobian.
class FloatSystem {
 public:
  FloatSystem(const AInftyStructure& a, const Element& target) {
    const GradedSpace& space = *a.space();
    ones_ = space.of_degree(1);
    twos_ = space.of_degree(2);
    std::map<std::size_t, std::size_t> pos1;
    std::map<std::size_t, std::size_t> pos2;
    for (std::size_t i = 0; i < ones_.size(); ++i) pos1[ones_[i]] = i;
    for (std::size_t j = 0; j < twos_.size(); ++j) pos2[twos_[j]] = j;
    constant_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(twos_.size()));
    const Element offset = a.curvature() - target;
    for (const auto& [j, v] : offset.coeffs()) constant_(static_cast<Eigen::Index>(pos2.at(j))) = v.to_double();
    for (const auto& [k, mk] : a.ops()) {
      if (k == 0) continue;
      for (const auto& [inputs, out] : mk.table()) {
        Term term;
        bool ok = true;
        for (auto i : inputs) {
          auto it = pos1.find(i);
          if (it == pos1.end()) {
            ok = false;
            break;
          }
          term.slots.push_back(it->second);
        }
        if (!ok) continue;
        for (const auto& [j, v] : out) term.output.emplace_back(pos2.at(j), v.to_double());
        terms_.push_back(std::move(term));
      }
    }
  }

  std::size_t unknowns() const { return ones_.size(); }
  const std::vector<std::size_t>& unknown_indices() const { return ones_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& beta) const {
    Eigen::VectorXd r = constant_;
    for (const auto& t : terms_) {
      double prod = 1.0;
      for (auto s : t.slots) prod *= beta(static_cast<Eigen::Index>(s));
      for (const auto& [j, v] : t.output) r(static_cast<Eigen::Index>(j)) += prod * v;
    }
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& beta) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(constant_.size(), static_cast<Eigen::Index>(ones_.size()));
    for (const auto& t : terms_) {
      for (std::size_t s = 0; s < t.slots.size(); ++s) {
        double prod = 1.0;
        for (std::size_t u = 0; u < t.slots.size(); ++u) {
          if (u != s) prod *= beta(static_cast<Eigen::Index>(t.slots[u]));
        }
        for (const auto& [j, v] : t.output) {
          jac(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t.slots[s])) += prod * v;
        }
      }
    }
    return jac;
  }

 private:
  struct Term {
    std::vector<std::size_t> slots;
    std::vector<std::pair<std::size_t, double>> output;
  };
  std::vector<std::size_t> ones_;
  std::vector<std::size_t> twos_;
  Eigen::VectorXd constant_;
  std::vector<Term> terms_;
};

MCResult solve_newton(const MCProblem& p) {
  const AInftyStructure& a = *p.structure;
  const FloatSystem system(a, p.target);
  const auto n = static_cast<Eigen::Index>(system.unknowns());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  if (p.seed) {
    require_degree_one(*p.seed);
    for (Eigen::Index i = 0; i < n; ++i) {
      beta(i) = p.seed->coeff(system.unknown_indices()[static_cast<std::size_t>(i)]).to_double();
    }
  }
  MCResult result;
  Eigen::VectorXd r = system.residual(beta);
  double norm = r.norm();
  bool converged = norm < p.newton.tolerance;
  for (int it = 0; it < p.newton.max_iterations && !converged; ++it) {
    result.iterations = it + 1;
    const Eigen::MatrixXd jac = system.jacobian(beta);
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-r);
    double t = 1.0;
    Eigen::VectorXd trial = beta + step;
    Eigen::VectorXd trial_r = system.residual(trial);
    while (trial_r.norm() >= norm && t > 1e-8) {
      t *= 0.5;
      trial = beta + t * step;
      trial_r = system.residual(trial);
    }
    if (trial_r.norm() >= norm) break;
    beta = trial;
    r = trial_r;
    norm = r.norm();
    converged = norm < p.newton.tolerance;
  }
  result.float_residual = norm;

  std::vector<Scalar> values;
  for (Eigen::Index i = 0; i < n; ++i) values.push_back(rationalize(beta(i), p.newton.max_denominator));
  const Element candidate = from_coordinates(a.space(), system.unknown_indices(), values);
  const Element residual = eval_eb(a, candidate) - p.target;
  result.residual = residual;
  if (residual.is_zero()) {
    result.solution = candidate;
    result.note = "newton candidate rationalized and verified exactly";
  } else if (!converged) {
    result.note = "newton did not converge; no certificate";
  } else {
    result.note = "rationalized newton candidate does not verify exactly; no certificate";
  }
  return result;
}

}  // namespace

MCResult solve_mc(const MCProblem& p) {
  if (!p.structure) throw DomainError("MC problem without a structure");
  const AInftyStructure& a = *p.structure;
  require_element_level(a, "solve_mc");
  if (!p.target.is_zero() && p.target.degree() != 2) throw DegreeError("MC target must have degree 2");

  MCResult result;
  const Element zero(a.space());
  if (eval_eb(a, zero) == p.target) {
    result.solution = zero;
    result.residual = Element(a.space());
    result.note = "target equals m_0(1)";
    return result;
  }
  if (eb_is_constant(a)) {
    result.provably_unsolvable = true;
    result.residual = a.curvature() - p.target;
    result.note = "m(e^b) does not depend on b and differs from the target";
    return result;
  }
  return p.strategy == MCStrategy::Filtration ? solve_filtration(p) : solve_newton(p);
}

UnobstructedReport classify_unobstructed(const AInftyStructure& a) {
  require_element_level(a, "classify_unobstructed");
  UnobstructedReport report;
  report.grid = {Scalar(-2), Scalar(-1), Scalar(-1, 2), Scalar(0), Scalar(1, 2), Scalar(1), Scalar(2)};
  std::vector<Element> candidates{Element(a.space())};
  for (auto i : a.space()->of_degree(1)) {
    for (const auto& g : report.grid) {
      if (!g.is_zero()) candidates.push_back(g * Element::basis(a.space(), i));
    }
  }
  const MultiMap& m2 = a.op(2);
  for (const auto& b : candidates) {
    const Element curvature = eval_eb(a, b);
    if (!report.unobstructed_b && curvature.is_zero()) report.unobstructed_b = b;
    if (!report.weakly_unobstructed && center_check(a, curvature) && partial_unital_check(a, curvature)) {
      report.weakly_unobstructed = std::make_pair(curvature, b);
    }
    if (!report.case3_b && partial_unital_check(a, b) && apply_to(m2, {b, b}).is_zero()) {
      const Element shifted = a.curvature() + apply_to(a.op(1), {b});
      if (center_check(a, shifted)) report.case3_b = b;
    }
  }
  return report;
}

LinearSubsetReport linear_subset_certificate(const AInftyStructure& a, const Element& b) {
  require_element_level(a, "linear subset certificate");
  require_degree_one(b);
  LinearSubsetReport report;
  for (int k = 0; k <= a.kmax(); ++k) {
    const std::vector<Element> inputs(static_cast<std::size_t>(k), b);
    report.coefficients.push_back(evaluate(a.op(k), inputs));
  }
  report.identity_verified = true;
  for (int l = 0; l <= a.kmax(); ++l) {
    const Scalar lambda(l);
    Element expected(a.space());
    for (int k = 0; k <= a.kmax(); ++k) expected += lambda.pow(k) * report.coefficients[static_cast<std::size_t>(k)];
    if (!(eval_eb(a, lambda * b) == expected)) report.identity_verified = false;
  }
  for (int k = 0; k <= a.kmax(); ++k) {
    if (!report.coefficients[static_cast<std::size_t>(k)].is_zero()) {
      report.first_nonzero = k;
      break;
    }
  }
  report.hypothesis_holds = !report.first_nonzero.has_value();
  return report;
}

GeneralEndoReport general_endo_deform(const AInftyStructure& a, const GeneralEndoData& d) {
  require_element_level(a, "general endomorphism deformation");
  require_degree_one(d.b);
  if (d.f2.arity() != 2 || d.f2.degree() != -1) throw DegreeError("f_2 must have arity 2 and degree -1");
  if (d.f3.arity() != 3 || d.f3.degree() != -2) throw DegreeError("f_3 must have arity 3 and degree -2");
  const SpacePtr& space = a.space();
  const std::size_t dim = space->dim();
  const MultiMap id = MultiMap::identity(space);
  const MultiMap one_slot[] = {id};
  const MultiMap two_slots[] = {id, id};
  const MultiMap eb1 = eb_compose(a, d.b, one_slot);
  const MultiMap eb2 = eb_compose(a, d.b, two_slots);

  GeneralEndoReport report;
  report.m0 = eval_eb(a, d.b);
  const Element& curv = report.m0;

  report.m1 = MultiMap(space, 1, 1);
  std::vector<Element> m1_of(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    const Element ex = Element::basis(space, x);
    const Element v = apply_to(eb1, {ex}) + parity(*space, x) * apply_to(d.f2, {ex, curv}) -
                      apply_to(d.f2, {curv, ex});
    m1_of[x] = v;
    if (!v.is_zero()) report.m1.set({x}, v.coeffs());
  }
  report.m2 = MultiMap(space, 2, 0);
  for (std::size_t x = 0; x < dim; ++x) {
    const Element ex = Element::basis(space, x);
    for (std::size_t y = 0; y < dim; ++y) {
      const Element ey = Element::basis(space, y);
      const Scalar sx = parity(*space, x);
      const Scalar sxy = sx * parity(*space, y);
      Element v = apply_to(eb2, {ex, ey}) + apply_to(eb1, {apply_to(d.f2, {ex, ey})}) +
                  sx * apply_to(d.f2, {ex, m1_of[y]}) - apply_to(d.f2, {m1_of[x], ey});
      v -= apply_to(d.f3, {curv, ex, ey}) - sx * apply_to(d.f3, {ex, curv, ey}) + sxy * apply_to(d.f3, {ex, ey, curv});
      if (!v.is_zero()) report.m2.set({x, y}, v.coeffs());
    }
  }
  report.center_property = true;
  for (std::size_t x = 0; x < dim; ++x) {
    const Element ex = Element::basis(space, x);
    const Scalar sx = parity(*space, x);
    const Element f2_ax = apply_to(d.f2, {curv, ex});
    const Element f2_xa = apply_to(d.f2, {ex, curv});
    if (!(f2_ax == sx * f2_xa)) report.center_property = false;
    const Element lhs = apply_to(eb2, {curv, ex}) + apply_to(eb1, {f2_ax}) + apply_to(d.f2, {curv, m1_of[x]});
    const Element rhs = apply_to(eb2, {ex, curv}) + apply_to(eb1, {f2_xa}) - apply_to(d.f2, {m1_of[x], curv});
    report.residuals.push_back(lhs - sx * rhs);
  }
  report.m1_kills_a = curv.is_zero() || apply_to(report.m1, {curv}).is_zero();
  return report;
}

}  // namespace ainf
