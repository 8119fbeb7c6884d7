#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ainf/ainfty.hpp"

namespace ainf {

/// Element of the arity-truncated Hochschild complex: components f_n in
/// C^{n, ℓ-n} for 0 <= n <= arity_cap, all of total degree ℓ.
class HochschildCochain {
 public:
  HochschildCochain(SpacePtr space, int total_degree, int arity_cap);

  /// Single-component cochain.
  static HochschildCochain from_map(MultiMap f, int arity_cap);
  /// m = Σ m_k as a cochain of total degree 2.
  static HochschildCochain from_structure(const AInftyStructure& a, int arity_cap);
  /// Arity-0 cochain 1 -> x.
  static HochschildCochain from_element(const Element& x, int arity_cap);

  const SpacePtr& space() const { return space_; }
  int total_degree() const { return total_degree_; }
  int arity_cap() const { return arity_cap_; }
  const std::map<int, MultiMap>& components() const { return components_; }
  /// The arity-n component, or the zero map of bidegree (n, ℓ - n).
  MultiMap component(int n) const;
  int top_arity() const;
  bool is_zero() const { return components_.empty(); }

  /// Adds to the arity-n component. Throws TruncationOverflow when a nonzero
  /// map would land above the cap, DomainError on a total-degree mismatch.
  void add(const MultiMap& f);

  HochschildCochain& operator+=(const HochschildCochain& other);
  HochschildCochain& operator-=(const HochschildCochain& other);
  HochschildCochain& operator*=(const Scalar& factor);
  friend HochschildCochain operator+(HochschildCochain a, const HochschildCochain& b) { return a += b; }
  friend HochschildCochain operator-(HochschildCochain a, const HochschildCochain& b) { return a -= b; }
  friend HochschildCochain operator*(const Scalar& s, HochschildCochain a) { return a *= s; }
  friend bool operator==(const HochschildCochain& a, const HochschildCochain& b);

  std::string to_string() const;

 private:
  SpacePtr space_;
  int total_degree_;
  int arity_cap_;
  std::map<int, MultiMap> components_;
};

/// Component bracket [f, g] for f in C^{n,k}, g in C^{m,l}.
///
/// MapLevel: Σ_i (-1)^{δ1} f∘_i g - (-1)^{(n+k-1)(m+l-1)} Σ_i (-1)^{δ2} g∘_i f
/// with δ1 = (n-1)(m-1)+(n-1)l+i(m-1), δ2 = (m-1)(n-1)+(m-1)k+i(n-1) and
/// Koszul insertion. ElementLevel: the same without δ1, δ2 and with shifted
/// insertion signs. A sum whose outer map has arity 0 is zero; for two
/// arity-0 maps the zero map of bidegree (0, k + l) stands in.
MultiMap bracket(const MultiMap& f, const MultiMap& g, Convention convention);

/// Bracket of cochains. The result has cap max(f.cap, g.cap); a nonzero
/// component above it raises TruncationOverflow.
HochschildCochain bracket(const HochschildCochain& f, const HochschildCochain& g, Convention convention);

/// D(c) = [m, c].
HochschildCochain differential(const AInftyStructure& a, const HochschildCochain& c);

/// Like differential, but silently drops components above the cap.
HochschildCochain truncated_differential(const AInftyStructure& a, const HochschildCochain& c);

/// Identity and euler derivation element as cochains of total degree 1.
HochschildCochain identity_cochain(const SpacePtr& space, int arity_cap);
HochschildCochain euler_cochain(const SpacePtr& space, int arity_cap);

struct EulerReport {
  bool holds = true;
  /// D(I - E) - m per arity, zero maps omitted.
  std::map<int, MultiMap> residuals;
  std::optional<Witness> witness;
};

/// Checks D(I - E) = m component by component.
EulerReport euler_certificate(const AInftyStructure& a);

/// m_1(a) = 0 and [m_k, a] = m_{k-1} for 2 <= k <= kmax + 1. For map-level
/// structures [m_k, a] = Σ_i (-1)^i m_k(I^i ⊗ a ⊗ I^{k-i-1}).
bool divisor_check(const AInftyStructure& a, const Element& x);

/// Basis of the truncated cochain space of total degree ℓ: one entry per
/// (arity n <= cap, input tuple, output basis index).
struct CochainBasisEntry {
  int arity;
  Inputs inputs;
  std::size_t output;
};
std::vector<CochainBasisEntry> cochain_basis(const GradedSpace& space, int total_degree, int arity_cap);

struct HHReport {
  int degree = 0;
  int arity_cap = 0;
  std::size_t cochain_dim = 0;
  std::size_t kernel = 0;
  std::size_t image = 0;
  std::size_t rank_at_truncation = 0;
  /// Rank of classes supported in arity <= cap - (kmax - 1). Absent for
  /// curved structures, whose differential lowers arity.
  std::optional<std::size_t> stable_rank;
  int stable_arity = 0;
  std::string caveat;
};

/// Ranks of the truncated complex at total degree ℓ, computed exactly over Q.
HHReport hh_rank(const AInftyStructure& a, int degree, int arity_cap);

struct UnitClassReport {
  bool d_unit_zero = false;
  /// dim C^{0,-1} = dim A^{-1}: the only bidegree whose image could hit e.
  std::size_t competing_dim = 0;
  bool nonzero_class = false;
};

/// [e] ≠ 0 in HH^0 for a unit e of a strict structure in non-negative
/// degrees. Throws PreconditionError when a hypothesis fails.
UnitClassReport unit_class_certificate(const AInftyStructure& a, const Element& e);

struct InclusionReport {
  bool bracket_zero = false;  ///< [m, c] = 0
  bool m1_zero = false;       ///< m_1(c(1)) = 0
  bool consistent() const { return !bracket_zero || m1_zero; }
};

/// For c concentrated in arity 0: [m, c] = 0 implies m_1(c(1)) = 0.
InclusionReport cyclic_inclusion_check(const AInftyStructure& a, const HochschildCochain& c);

}  // namespace ainf
