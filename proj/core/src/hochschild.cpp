#include "ainf/hochschild.hpp"

#include <sstream>

#include "ainf/curved.hpp"
#include "ainf/error.hpp"
#include "ainf/linalg.hpp"

namespace ainf {

HochschildCochain::HochschildCochain(SpacePtr space, int total_degree, int arity_cap)
    : space_(std::move(space)), total_degree_(total_degree), arity_cap_(arity_cap) {
  if (arity_cap < 0) throw DomainError("arity cap must be non-negative");
}

HochschildCochain HochschildCochain::from_map(MultiMap f, int arity_cap) {
  HochschildCochain c(f.space(), f.total_degree(), arity_cap);
  c.add(f);
  return c;
}

HochschildCochain HochschildCochain::from_structure(const AInftyStructure& a, int arity_cap) {
  HochschildCochain c(a.space(), 2, arity_cap);
  for (const auto& [k, m] : a.ops()) c.add(m);
  return c;
}

HochschildCochain HochschildCochain::from_element(const Element& x, int arity_cap) {
  const int degree = x.is_zero() ? 0 : x.degree();
  return from_map(MultiMap::constant(x, degree), arity_cap);
}

MultiMap HochschildCochain::component(int n) const {
  auto it = components_.find(n);
  if (it != components_.end()) return it->second;
  return MultiMap(space_, n, total_degree_ - n);
}

int HochschildCochain::top_arity() const { return components_.empty() ? -1 : components_.rbegin()->first; }

void HochschildCochain::add(const MultiMap& f) {
  if (f.total_degree() != total_degree_) {
    throw DomainError("cochain of total degree " + std::to_string(total_degree_) + " cannot hold a map of total degree " +
                      std::to_string(f.total_degree()));
  }
  if (f.is_zero()) return;
  if (f.arity() > arity_cap_) {
    throw TruncationOverflow("component of arity " + std::to_string(f.arity()) + " exceeds the arity cap " +
                             std::to_string(arity_cap_));
  }
  auto [it, inserted] = components_.try_emplace(f.arity(), f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) components_.erase(it);
  }
}

HochschildCochain& HochschildCochain::operator+=(const HochschildCochain& other) {
  for (const auto& [n, f] : other.components_) add(f);
  return *this;
}

HochschildCochain& HochschildCochain::operator-=(const HochschildCochain& other) {
  for (const auto& [n, f] : other.components_) add(Scalar(-1) * f);
  return *this;
}

HochschildCochain& HochschildCochain::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    components_.clear();
    return *this;
  }
  for (auto& [n, f] : components_) f *= factor;
  return *this;
}

bool operator==(const HochschildCochain& a, const HochschildCochain& b) {
  return a.total_degree_ == b.total_degree_ && a.components_ == b.components_;
}

std::string HochschildCochain::to_string() const {
  std::ostringstream os;
  os << "cochain of total degree " << total_degree_ << " (cap " << arity_cap_ << ")\n";
  for (const auto& [n, f] : components_) os << f.to_string();
  return os.str();
}

MultiMap bracket(const MultiMap& f, const MultiMap& g, Convention convention) {
  const long n = f.arity();
  const long k = f.degree();
  const long m = g.arity();
  const long l = g.degree();
  MultiMap result(f.space(), static_cast<int>(n + m - 1 < 0 ? 0 : n + m - 1), static_cast<int>(k + l));
  if (n == 0 && m == 0) return MultiMap(f.space(), 0, static_cast<int>(k + l));
  const bool map_level = convention == Convention::MapLevel;
  const SignRule rule = sign_rule(convention);
  if (n != 0) {
    for (long i = 0; i < n; ++i) {
      MultiMap term = insert(f, g, static_cast<int>(i), rule);
      if (map_level && sign_power((n - 1) * (m - 1) + (n - 1) * l + i * (m - 1)) < 0) term *= Scalar(-1);
      result += term;
    }
  }
  if (m != 0) {
    const int outer = sign_power((n + k - 1) * (m + l - 1));
    for (long i = 0; i < m; ++i) {
      MultiMap term = insert(g, f, static_cast<int>(i), rule);
      int sign = -outer;
      if (map_level) sign *= sign_power((m - 1) * (n - 1) + (m - 1) * k + i * (n - 1));
      if (sign < 0) term *= Scalar(-1);
      result += term;
    }
  }
  return result;
}

namespace {

HochschildCochain bracket_impl(const HochschildCochain& f, const HochschildCochain& g, Convention convention,
                               int cap, bool truncate) {
  HochschildCochain result(f.space(), f.total_degree() + g.total_degree() - 1, cap);
  for (const auto& [n, fn] : f.components()) {
    for (const auto& [m, gm] : g.components()) {
      if (n == 0 && m == 0) continue;  // no arity -1 component
      if (truncate && n + m - 1 > cap) continue;
      result.add(bracket(fn, gm, convention));
    }
  }
  return result;
}

}  // namespace

HochschildCochain bracket(const HochschildCochain& f, const HochschildCochain& g, Convention convention) {
  return bracket_impl(f, g, convention, std::max(f.arity_cap(), g.arity_cap()), false);
}

HochschildCochain differential(const AInftyStructure& a, const HochschildCochain& c) {
  return bracket_impl(HochschildCochain::from_structure(a, a.kmax()), c, a.convention(), c.arity_cap(), false);
}

HochschildCochain truncated_differential(const AInftyStructure& a, const HochschildCochain& c) {
  return bracket_impl(HochschildCochain::from_structure(a, a.kmax()), c, a.convention(), c.arity_cap(), true);
}

HochschildCochain identity_cochain(const SpacePtr& space, int arity_cap) {
  return HochschildCochain::from_map(MultiMap::identity(space), arity_cap);
}

HochschildCochain euler_cochain(const SpacePtr& space, int arity_cap) {
  HochschildCochain c(space, 1, arity_cap);
  c.add(MultiMap::euler(space));
  return c;
}

EulerReport euler_certificate(const AInftyStructure& a) {
  const int cap = std::max(a.kmax(), 1);
  const auto i_minus_e = identity_cochain(a.space(), cap) - euler_cochain(a.space(), cap);
  const auto residual = differential(a, i_minus_e) - HochschildCochain::from_structure(a, cap);
  EulerReport report;
  report.residuals = residual.components();
  report.holds = residual.is_zero();
  if (!report.holds) report.witness = first_nonzero(report.residuals.begin()->second);
  return report;
}

bool divisor_check(const AInftyStructure& a, const Element& x) {
  if (!x.is_zero() && x.degree() != 1) throw DegreeError("divisor element must have degree 1");
  const MultiMap ax = MultiMap::constant(x, 1);
  for (int k = 1; k <= a.kmax() + 1; ++k) {
    const MultiMap mk = k <= a.kmax() ? a.op(k) : MultiMap(a.space(), k, 2 - k);
    const MultiMap lhs = bracket(mk, ax, a.convention());
    const MultiMap rhs = k == 1 ? MultiMap(a.space(), 0, 2) : a.op(k - 1);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

std::vector<CochainBasisEntry> cochain_basis(const GradedSpace& space, int total_degree, int arity_cap) {
  std::vector<CochainBasisEntry> out;
  for (int n = 0; n <= arity_cap; ++n) {
    const int degree = total_degree - n;
    for (const auto& inputs : admissible_inputs(space, n, degree)) {
      int target = degree;
      for (auto i : inputs) target += space.degree(i);
      for (auto j : space.of_degree(target)) out.push_back({n, inputs, j});
    }
  }
  return out;
}

namespace {

struct BasisIndex {
  std::vector<CochainBasisEntry> entries;
  std::map<std::pair<int, Inputs>, std::map<std::size_t, std::size_t>> position;

  BasisIndex(const GradedSpace& space, int total_degree, int cap) : entries(cochain_basis(space, total_degree, cap)) {
    for (std::size_t p = 0; p < entries.size(); ++p) {
      position[{entries[p].arity, entries[p].inputs}][entries[p].output] = p;
    }
  }

  std::size_t size() const { return entries.size(); }
};

/// Matrix of the truncated differential from total degree ℓ (columns) to
/// ℓ + 1 (rows).
linalg::Matrix differential_matrix(const AInftyStructure& a, const BasisIndex& source, const BasisIndex& target,
                                   int cap) {
  linalg::Matrix d(target.size(), source.size());
  for (std::size_t col = 0; col < source.size(); ++col) {
    const auto& e = source.entries[col];
    int internal = a.space()->degree(e.output);
    for (auto i : e.inputs) internal -= a.space()->degree(i);
    MultiMap f(a.space(), e.arity, internal);
    f.set(e.inputs, SparseVector{{e.output, Scalar(1)}});
    const auto image = truncated_differential(a, HochschildCochain::from_map(f, cap));
    for (const auto& [n, g] : image.components()) {
      for (const auto& [inputs, out] : g.table()) {
        const auto& row_of = target.position.at({n, inputs});
        for (const auto& [j, v] : out) d(row_of.at(j), col) = v;
      }
    }
  }
  return d;
}

}  // namespace

HHReport hh_rank(const AInftyStructure& a, int degree, int arity_cap) {
  if (arity_cap < a.kmax()) throw PreconditionError("arity cap must be at least kmax");
  const GradedSpace& space = *a.space();
  const BasisIndex lower(space, degree - 1, arity_cap);
  const BasisIndex middle(space, degree, arity_cap);
  const BasisIndex upper(space, degree + 1, arity_cap);

  const auto d_in = differential_matrix(a, lower, middle, arity_cap);
  const auto d_out = differential_matrix(a, middle, upper, arity_cap);
  const std::size_t rank_out = linalg::rank(d_out);
  const std::size_t rank_in = linalg::rank(d_in);
  const std::size_t rank_both = linalg::rank(d_out * d_in);

  HHReport report;
  report.degree = degree;
  report.arity_cap = arity_cap;
  report.cochain_dim = middle.size();
  report.kernel = middle.size() - rank_out;
  report.image = rank_in;
  report.rank_at_truncation = report.kernel - (rank_in - rank_both);

  const int s = arity_cap - (a.kmax() - 1);
  report.stable_arity = s;
  if (!a.is_strict()) {
    report.caveat = "curved structure: m_0 lowers arity, so no truncation-stable range exists";
    return report;
  }
  // Cocycles supported in arity <= s are computed without truncation; classes
  // are taken modulo the arity <= s part of coboundaries of such cochains.
  std::vector<std::size_t> low;
  for (std::size_t p = 0; p < middle.size(); ++p) {
    if (middle.entries[p].arity <= s) low.push_back(p);
  }
  linalg::Matrix d_low(upper.size(), low.size());
  for (std::size_t c = 0; c < low.size(); ++c) {
    for (std::size_t r = 0; r < upper.size(); ++r) d_low(r, c) = d_out(r, low[c]);
  }
  const auto z = linalg::nullspace(d_low);
  std::vector<std::size_t> low_sources;
  for (std::size_t p = 0; p < lower.size(); ++p) {
    if (lower.entries[p].arity <= s) low_sources.push_back(p);
  }
  linalg::Matrix b(low.size(), low_sources.size());
  for (std::size_t c = 0; c < low_sources.size(); ++c) {
    for (std::size_t r = 0; r < low.size(); ++r) b(r, c) = d_in(low[r], low_sources[c]);
  }
  report.stable_rank = linalg::rank(z.hconcat(b)) - linalg::rank(b);
  report.caveat = "ranks computed on the complex truncated at arity " + std::to_string(arity_cap) +
                  "; only classes supported in arity <= " + std::to_string(s) + " are truncation-stable";
  return report;
}

UnitClassReport unit_class_certificate(const AInftyStructure& a, const Element& e) {
  if (!a.is_strict()) throw PreconditionError("unit class certificate needs a strict structure");
  const GradedSpace& space = *a.space();
  if (space.min_degree() < 0) {
    for (const auto& entry : space.basis()) {
      if (entry.degree < 0) {
        throw PreconditionError("basis entry '" + entry.name + "' has negative degree " +
                                std::to_string(entry.degree));
      }
    }
  }
  if (!unit_check(a, e)) throw PreconditionError("'" + e.to_string() + "' is not a unit");

  UnitClassReport report;
  report.d_unit_zero = differential(a, HochschildCochain::from_element(e, a.kmax())).is_zero();
  // D maps C^{n,-1-n} to total degree 0; landing in arity 0 forces n = 0 and
  // only m_1 contributes.
  const auto& competitors = space.of_degree(-1);
  report.competing_dim = competitors.size();
  linalg::Matrix span(space.dim(), competitors.size() + 1);
  for (std::size_t c = 0; c < competitors.size(); ++c) {
    const auto f = HochschildCochain::from_element(Element::basis(a.space(), competitors[c]), a.kmax());
    const auto image = differential(a, f).component(0);
    for (const auto& [j, v] : image.value().coeffs()) span(j, c) = v;
  }
  linalg::Matrix without(space.dim(), competitors.size());
  for (std::size_t r = 0; r < space.dim(); ++r) {
    for (std::size_t c = 0; c < competitors.size(); ++c) without(r, c) = span(r, c);
  }
  for (const auto& [j, v] : e.coeffs()) span(j, competitors.size()) = v;
  const bool e_in_image = linalg::rank(span) == linalg::rank(without);
  report.nonzero_class = report.d_unit_zero && !e.is_zero() && !e_in_image;
  return report;
}

InclusionReport cyclic_inclusion_check(const AInftyStructure& a, const HochschildCochain& c) {
  if (c.top_arity() > 0) throw PreconditionError("cyclic_inclusion_check: cochain must be concentrated in arity 0");
  InclusionReport report;
  const HochschildCochain dc = differential(a, c);
  report.bracket_zero = dc.is_zero();
  const Element value = c.component(0).value();
  report.m1_zero = evaluate(a.op(1), std::vector<Element>{value}).is_zero();
  return report;
}

}  // namespace ainf
