#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ainf/graded_space.hpp"
#include "ainf/scalar.hpp"

namespace ainf {

/// How signs arise when a graded map moves past graded inputs.
///
/// Koszul: moving a map of internal degree d past x costs (-1)^{d|x|}.
/// Shifted: degrees are taken in A[1]; a map of arity n and internal degree d
/// has shifted degree n + d - 1 and moving it past x costs
/// (-1)^{(n+d-1)(|x|-1)}.
enum class SignRule { Koszul, Shifted };

/// A tuple of basis indices, one per input slot.
using Inputs = std::vector<std::size_t>;

/// A sparse element of a tensor power of the space: basis tuple -> coefficient.
using Tensor = std::map<Inputs, Scalar>;

/// n-ary multilinear map A^{⊗n} -> A of internal degree d, stored as a
/// sparse table from basis input tuples to output vectors. Every stored
/// output is homogeneous of degree (sum of input degrees) + d.
class MultiMap {
 public:
  MultiMap() = default;
  MultiMap(SpacePtr space, int arity, int degree);

  static MultiMap identity(SpacePtr space);
  /// Euler derivation: a -> deg(a) a on homogeneous a.
  static MultiMap euler(SpacePtr space);
  /// Arity-0 map 1 -> value. The internal degree is the degree of value,
  /// or `degree` when value is zero.
  static MultiMap constant(const Element& value, int degree);
  /// Diagonal in the basis, one entry per basis element.
  static MultiMap diagonal(SpacePtr space, const std::vector<Scalar>& entries);

  const SpacePtr& space() const { return space_; }
  int arity() const { return arity_; }
  int degree() const { return degree_; }
  int total_degree() const { return arity_ + degree_; }
  int shifted_degree() const { return arity_ + degree_ - 1; }

  const std::map<Inputs, SparseVector>& table() const { return table_; }
  bool is_zero() const { return table_.empty(); }

  /// Output on a basis tuple (zero element when absent).
  Element at(const Inputs& inputs) const;
  /// For arity 0: the image of 1.
  Element value() const { return at({}); }

  /// Replaces the output on a basis tuple. Throws DomainError when the
  /// output violates degree bookkeeping.
  void set(const Inputs& inputs, const SparseVector& output);
  /// Adds factor * output to the entry for `inputs`.
  void accumulate(const Inputs& inputs, const Scalar& factor, const SparseVector& output);

  MultiMap& operator+=(const MultiMap& other);
  MultiMap& operator-=(const MultiMap& other);
  MultiMap& operator*=(const Scalar& factor);
  friend MultiMap operator+(MultiMap a, const MultiMap& b) { return a += b; }
  friend MultiMap operator-(MultiMap a, const MultiMap& b) { return a -= b; }
  friend MultiMap operator*(const Scalar& s, MultiMap a) { return a *= s; }

  friend bool operator==(const MultiMap& a, const MultiMap& b) {
    return a.arity_ == b.arity_ && a.degree_ == b.degree_ && a.table_ == b.table_;
  }

  /// Sum of input degrees for a basis tuple.
  int input_degree(const Inputs& inputs) const;

  std::string to_string() const;

 private:
  void check_compatible(const MultiMap& other) const;

  SpacePtr space_;
  int arity_ = 0;
  int degree_ = 0;
  std::map<Inputs, SparseVector> table_;
};

/// Sign picked up when a map of the given arity and internal degree passes
/// the inputs `before`.
int crossing_sign(const GradedSpace& space, SignRule rule, int arity, int degree, std::span<const std::size_t> before);

/// Multilinear extension of f to homogeneous elements.
Element evaluate(const MultiMap& f, std::span<const Element> inputs);

/// (f_1 ⊗ ... ⊗ f_r)(x_1 ⊗ ... ⊗ x_n), where the inputs are consumed in
/// blocks of the maps' arities. The result is the tensor of block outputs
/// carrying the accumulated crossing signs.
Tensor koszul_tensor_apply(std::span<const MultiMap> maps, std::span<const Element> inputs,
                           SignRule rule = SignRule::Koszul);

/// Applies f to a tensor whose tuples have length arity(f).
Element apply(const MultiMap& f, const Tensor& tensor);

/// f ∘ (I^{⊗slot} ⊗ g ⊗ I^{⊗(n-slot-1)}), arity n + m - 1, with the crossing
/// sign of g past the first `slot` inputs.
MultiMap insert(const MultiMap& f, const MultiMap& g, int slot, SignRule rule = SignRule::Koszul);

/// outer ∘ (g_1 ⊗ ... ⊗ g_k) with crossing signs.
MultiMap compose(const MultiMap& outer, std::span<const MultiMap> inners, SignRule rule = SignRule::Koszul);

/// Composition of two arity-1 maps, f ∘ g.
MultiMap compose_linear(const MultiMap& f, const MultiMap& g);

/// All basis tuples of the given arity whose degree sum plus `degree` is the
/// degree of some basis vector.
std::vector<Inputs> admissible_inputs(const GradedSpace& space, int arity, int degree);

}  // namespace ainf
