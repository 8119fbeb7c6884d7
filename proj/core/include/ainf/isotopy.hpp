#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ainf/ainfty.hpp"
#include "ainf/ratfunc.hpp"
#include "ainf/rescaling.hpp"

namespace ainf {

/// Multilinear map with floating-point coefficients, for the numeric side of
/// tree integration.
struct FloatMap {
  SpacePtr space;
  int arity = 0;
  int degree = 0;
  std::map<Inputs, std::map<std::size_t, double>> table;

  FloatMap() = default;
  FloatMap(SpacePtr s, int n, int d) : space(std::move(s)), arity(n), degree(d) {}
  static FloatMap from_exact(const MultiMap& f);

  void add(const MultiMap& f, double factor);
  FloatMap& operator+=(const FloatMap& other);
  double coefficient(const Inputs& inputs, std::size_t output) const;
  /// Largest absolute coefficient.
  double max_abs() const;
  std::string to_string() const;
};

/// Largest coefficient of a - b.
double max_abs_difference(const FloatMap& a, const FloatMap& b);

/// φ(t) · K.
struct TimeTerm {
  ScalarFunction phi;
  MultiMap map;
};

/// h^t = Σ φ_j(t) K_j with every K_j of total degree 1.
class Gauge {
 public:
  explicit Gauge(SpacePtr space) : space_(std::move(space)) {}
  Gauge(SpacePtr space, std::vector<TimeTerm> terms);

  const SpacePtr& space() const { return space_; }
  const std::vector<TimeTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Arities with at least one term.
  std::vector<int> arities() const;
  /// Every term has arity 1.
  bool is_linear() const;
  /// The arity-n terms.
  std::vector<const TimeTerm*> of_arity(int n) const;

 private:
  SpacePtr space_;
  std::vector<TimeTerm> terms_;
};

/// Path of structures m^t = Σ φ_j(t) M_j with m^0 the base structure.
class Path {
 public:
  enum class Kind { Linear, Rescaling, General };

  /// m + t δ.
  static Path linear(StructurePtr base, const std::vector<MultiMap>& delta);
  /// m_k ↦ [1 + t(λ - 1)]^{a k + b} m_k.
  static Path rescaling(StructurePtr base, const RescaleParams& p);
  /// Arbitrary terms; throws DomainError unless they sum to the base at t = 0.
  static Path general(StructurePtr base, std::vector<TimeTerm> terms);

  Kind kind() const { return kind_; }
  const StructurePtr& base() const { return base_; }
  const std::vector<TimeTerm>& terms() const { return terms_; }
  /// δ for linear paths.
  const std::vector<MultiMap>& delta() const { return delta_; }
  const std::optional<RescaleParams>& rescale_params() const { return rescale_; }
  /// Exact structure at a rational time (Deferred validation).
  AInftyStructure at(const Scalar& t) const;

 private:
  Path(Kind kind, StructurePtr base, std::vector<TimeTerm> terms) :
      kind_(kind), base_(std::move(base)), terms_(std::move(terms)) {}
  Kind kind_;
  StructurePtr base_;
  std::vector<TimeTerm> terms_;
  std::vector<MultiMap> delta_;
  std::optional<RescaleParams> rescale_;
};

struct PseudoIsotopyReport {
  bool holds = false;
  /// First entry where dδ/dt and [m^t, h^t] differ.
  std::string mismatch;
  /// Linear paths only: [m, δ] = 0 and [δ, δ] = 0.
  std::optional<bool> m_delta_zero;
  std::optional<bool> delta_delta_zero;
};

/// Decides dδ^t/dt = [m^t, h^t] as an identity of rational functions.
PseudoIsotopyReport verify_pseudo_isotopy(const Path& path, const Gauge& gauge);

/// Gauge solving the equation for the paths that have one in closed form:
/// c(t) m paths get (c'/c)(I - E), rescaling paths the matching
/// ((λ-1)/(1+t(λ-1))) ((2a+b) I - (a+b) E). Throws PreconditionError
/// otherwise.
Gauge auto_gauge(const Path& path);

/// Rooted planar tree. A node with no children is a leaf when `leaf` is
/// set; otherwise it is an interior vertex whose arity is children.size().
struct RibbonTree {
  bool leaf = true;
  std::vector<RibbonTree> children;

  static RibbonTree make_leaf() { return {}; }
  static RibbonTree vertex(std::vector<RibbonTree> children) { return {false, std::move(children)}; }

  int leaves() const;
  int interior_vertices() const;
  std::string to_string() const;
  friend bool operator==(const RibbonTree&, const RibbonTree&) = default;
};

/// All trees with k leaves, at most vmax interior vertices and interior
/// arities in `arities`, ordered by vertex count. The bare leaf is the only
/// vertex-free tree and appears for k = 1.
std::vector<RibbonTree> enumerate_trees(int k, int vmax, const std::vector<int>& arities);

struct Quadrature {
  enum class Kind { Gauss, MonteCarlo };
  Kind kind = Kind::Gauss;
  /// Gauss-Legendre order per level.
  int order = 16;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 0;

  /// "gauss:q" or "mc:N".
  static Quadrature parse(const std::string& text);
};

struct TreeIntegral {
  FloatMap value;
  /// Monte Carlo standard error (0 for Gauss).
  double std_error = 0.0;
};

/// c^t(T) = ∫ over time orderings (non-decreasing toward the root) of the
/// composed gauge operators. Throws PreconditionError when the gauge lacks an
/// arity T needs.
TreeIntegral integrate_tree(const RibbonTree& tree, const Gauge& gauge, const Scalar& t, const Quadrature& q);

struct FormalEndomorphism {
  /// components[k] = f_k for k = 0..kmax.
  std::vector<FloatMap> components;
  /// Largest coefficient among trees with exactly vmax vertices.
  double tail = 0.0;
  std::size_t trees = 0;
};

/// f^t_k = Σ_T c^t(T) over trees with at most vmax vertices. Throws
/// DivergenceError when a gauge coefficient has a pole in [0, t] and
/// PreconditionError when the path is not a pseudo-isotopy for the gauge.
FormalEndomorphism formal_endomorphism(const Path& path, const Gauge& gauge, const Scalar& t, int kmax, int vmax,
                                       const Quadrature& q);

struct StrictExpResult {
  /// Set when exp(C(t)) is rational and computed exactly.
  std::optional<MultiMap> exact;
  FloatMap value;
  std::string note;
};

/// f_1^t = exp(∫_0^t h^τ dτ) for a gauge of commuting arity-1 terms.
StrictExpResult strict_exp(const Gauge& gauge, const Scalar& t);

}  // namespace ainf
