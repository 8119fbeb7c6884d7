#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

struct BasisEntry {
  std::string name;
  int degree = 0;

  friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

/// Finite Z-graded vector space given by an ordered list of named,
/// homogeneous basis vectors. The list order is the canonical basis order
/// used for every coefficient table and matrix.
class GradedSpace {
 public:
  explicit GradedSpace(std::vector<BasisEntry> basis);

  std::size_t dim() const { return basis_.size(); }
  const BasisEntry& operator[](std::size_t i) const { return basis_[i]; }
  const std::vector<BasisEntry>& basis() const { return basis_; }
  int degree(std::size_t i) const { return basis_[i].degree; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find, but throws DomainError for unknown names.
  std::size_t index_of(std::string_view name) const;

  /// Indices of basis vectors spanning A^k.
  const std::vector<std::size_t>& of_degree(int k) const;
  int min_degree() const { return min_degree_; }
  int max_degree() const { return max_degree_; }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.basis_ == b.basis_; }

 private:
  std::vector<BasisEntry> basis_;
  std::unordered_map<std::string, std::size_t> index_;
  std::map<int, std::vector<std::size_t>> by_degree_;
  int min_degree_ = 0;
  int max_degree_ = 0;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

SpacePtr make_space(std::vector<BasisEntry> basis);

/// True when both pointers refer to the same space, or to equal spaces.
bool same_space(const SpacePtr& a, const SpacePtr& b);

/// Sparse coefficient vector keyed by basis index. Zero coefficients are
/// never stored.
using SparseVector = std::map<std::size_t, Scalar>;

void axpy(SparseVector& target, const Scalar& factor, const SparseVector& source);

/// A vector of a GradedSpace.
class Element {
 public:
  Element() = default;
  explicit Element(SpacePtr space) : space_(std::move(space)) {}
  Element(SpacePtr space, SparseVector coeffs);

  static Element basis(SpacePtr space, std::size_t index);
  /// Builds sum of coefficient * basis from (name, coefficient) pairs.
  static Element from_terms(SpacePtr space, const std::vector<std::pair<std::string, Scalar>>& terms);

  const SpacePtr& space() const { return space_; }
  const SparseVector& coeffs() const { return coeffs_; }
  Scalar coeff(std::size_t i) const;

  bool is_zero() const { return coeffs_.empty(); }
  bool is_homogeneous() const;
  /// Degree of a homogeneous nonzero element; DegreeError otherwise.
  int degree() const;

  Element& operator+=(const Element& other);
  Element& operator-=(const Element& other);
  Element& operator*=(const Scalar& factor);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Scalar& s, Element a) { return a *= s; }
  Element operator-() const;

  friend bool operator==(const Element& a, const Element& b);

  /// "x:1/2,y:-1" style rendering (empty string for zero).
  std::string to_string() const;

 private:
  SpacePtr space_;
  SparseVector coeffs_;
};

/// Parses "x:1/2,y:-1" into an element. A bare name means coefficient 1;
/// "0" or the empty string is the zero element.
Element parse_element(const SpacePtr& space, std::string_view text);

}  // namespace ainf
