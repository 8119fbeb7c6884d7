#include "ainf/isotopy.hpp"

#include <gsl/gsl_chebyshev.h>
#include <gsl/gsl_integration.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "ainf/error.hpp"
#include "ainf/hochschild.hpp"

namespace ainf {

FloatMap FloatMap::from_exact(const MultiMap& f) {
  FloatMap out(f.space(), f.arity(), f.degree());
  out.add(f, 1.0);
  return out;
}

void FloatMap::add(const MultiMap& f, double factor) {
  for (const auto& [inputs, vec] : f.table()) {
    auto& row = table[inputs];
    for (const auto& [j, v] : vec) row[j] += factor * v.to_double();
  }
}

FloatMap& FloatMap::operator+=(const FloatMap& other) {
  for (const auto& [inputs, row] : other.table) {
    auto& mine = table[inputs];
    for (const auto& [j, v] : row) mine[j] += v;
  }
  return *this;
}

double FloatMap::coefficient(const Inputs& inputs, std::size_t output) const {
  auto it = table.find(inputs);
  if (it == table.end()) return 0.0;
  auto jt = it->second.find(output);
  return jt == it->second.end() ? 0.0 : jt->second;
}

double FloatMap::max_abs() const {
  double m = 0.0;
  for (const auto& [inputs, row] : table) {
    for (const auto& [j, v] : row) m = std::max(m, std::abs(v));
  }
  return m;
}

std::string FloatMap::to_string() const {
  std::ostringstream os;
  os.precision(12);
  for (const auto& [inputs, row] : table) {
    for (const auto& [j, v] : row) {
      if (v == 0.0) continue;
      os << "(";
      for (std::size_t i = 0; i < inputs.size(); ++i) os << (i ? "," : "") << (*space)[inputs[i]].name;
      os << ") -> " << (*space)[j].name << ": " << v << "\n";
    }
  }
  return os.str();
}

double max_abs_difference(const FloatMap& a, const FloatMap& b) {
  FloatMap d = a;
  for (const auto& [inputs, row] : b.table) {
    auto& mine = d.table[inputs];
    for (const auto& [j, v] : row) mine[j] -= v;
  }
  return d.max_abs();
}

Gauge::Gauge(SpacePtr space, std::vector<TimeTerm> terms) : space_(std::move(space)) {
  for (auto& term : terms) {
    if (!same_space(term.map.space(), space_)) throw DomainError("gauge term lives on a different space");
    if (term.map.total_degree() != 1) {
      throw DegreeError("gauge terms need total degree 1; got arity " + std::to_string(term.map.arity()) +
                        " and degree " + std::to_string(term.map.degree()));
    }
    if (term.phi.is_zero() || term.map.is_zero()) continue;
    terms_.push_back(std::move(term));
  }
}

std::vector<int> Gauge::arities() const {
  std::set<int> s;
  for (const auto& term : terms_) s.insert(term.map.arity());
  return {s.begin(), s.end()};
}

bool Gauge::is_linear() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const TimeTerm& term) { return term.map.arity() == 1; });
}

std::vector<const TimeTerm*> Gauge::of_arity(int n) const {
  std::vector<const TimeTerm*> out;
  for (const auto& term : terms_) {
    if (term.map.arity() == n) out.push_back(&term);
  }
  return out;
}

Path Path::linear(StructurePtr base, const std::vector<MultiMap>& delta) {
  std::vector<TimeTerm> terms;
  for (const auto& [k, mk] : base->ops()) terms.push_back({ScalarFunction(Scalar(1)), mk});
  for (const auto& d : delta) {
    if (!same_space(d.space(), base->space())) throw DomainError("δ lives on a different space");
    if (d.total_degree() != 2) throw DegreeError("δ components need total degree 2");
    if (!d.is_zero()) terms.push_back({ScalarFunction(Polynomial::t()), d});
  }
  Path p(Kind::Linear, std::move(base), std::move(terms));
  p.delta_ = delta;
  return p;
}

Path Path::rescaling(StructurePtr base, const RescaleParams& params) {
  std::vector<TimeTerm> terms;
  const Scalar c = params.lambda - Scalar(1);
  for (const auto& [k, mk] : base->ops()) {
    terms.push_back({ScalarFunction::linear_power(c, params.a * k + params.b), mk});
  }
  Path p(Kind::Rescaling, std::move(base), std::move(terms));
  p.rescale_ = params;
  return p;
}

Path Path::general(StructurePtr base, std::vector<TimeTerm> terms) {
  Path p(Kind::General, std::move(base), std::move(terms));
  const AInftyStructure start = p.at(Scalar(0));
  for (int k = 0; k <= std::max(start.kmax(), p.base_->kmax()); ++k) {
    const MultiMap want = k <= p.base_->kmax() ? p.base_->op(k) : MultiMap(p.base_->space(), k, 2 - k);
    const MultiMap got = k <= start.kmax() ? start.op(k) : MultiMap(p.base_->space(), k, 2 - k);
    if (!(want == got)) throw DomainError("path does not start at its base structure (arity " + std::to_string(k) + ")");
  }
  return p;
}

AInftyStructure Path::at(const Scalar& t) const {
  int kmax = base_->kmax();
  for (const auto& term : terms_) kmax = std::max(kmax, term.map.arity());
  std::map<int, MultiMap> sums;
  for (const auto& term : terms_) {
    const Scalar c = term.phi(t);
    auto [it, inserted] = sums.try_emplace(term.map.arity(), c * term.map);
    if (!inserted) it->second += c * term.map;
  }
  std::vector<MultiMap> maps;
  for (auto& [k, m] : sums) maps.push_back(std::move(m));
  return AInftyStructure(base_->space(), base_->convention(), kmax, std::move(maps), Validation::Deferred);
}

namespace {

/// Entry-wise rational functions: (arity, inputs) -> output -> coefficient.
using SymbolicMap = std::map<std::pair<int, Inputs>, std::map<std::size_t, ScalarFunction>>;

void accumulate(SymbolicMap& target, const ScalarFunction& phi, const MultiMap& f) {
  if (phi.is_zero()) return;
  for (const auto& [inputs, vec] : f.table()) {
    auto& row = target[{f.arity(), inputs}];
    for (const auto& [j, v] : vec) {
      auto [it, inserted] = row.try_emplace(j, phi * ScalarFunction(v));
      if (!inserted) it->second += phi * ScalarFunction(v);
    }
  }
}

std::string describe_entry(const GradedSpace& space, const std::pair<int, Inputs>& key, std::size_t output) {
  std::ostringstream os;
  os << "arity " << key.first << " on (";
  for (std::size_t i = 0; i < key.second.size(); ++i) os << (i ? "," : "") << space[key.second[i]].name;
  os << ") -> " << space[output].name;
  return os.str();
}

bool brackets_vanish(const std::vector<MultiMap>& left, const std::vector<MultiMap>& right, Convention conv) {
  std::map<int, MultiMap> sums;
  for (const auto& f : left) {
    for (const auto& g : right) {
      if (f.arity() == 0 && g.arity() == 0) continue;
      const MultiMap b = bracket(f, g, conv);
      auto [it, inserted] = sums.try_emplace(b.arity(), b);
      if (!inserted) it->second += b;
    }
  }
  return std::all_of(sums.begin(), sums.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

}  // namespace

PseudoIsotopyReport verify_pseudo_isotopy(const Path& path, const Gauge& gauge) {
  const auto& base = *path.base();
  if (!same_space(base.space(), gauge.space())) throw DomainError("path and gauge live on different spaces");
  const Convention conv = base.convention();
  SymbolicMap lhs;
  SymbolicMap rhs;
  for (const auto& term : path.terms()) accumulate(lhs, term.phi.derivative(), term.map);
  for (const auto& term : path.terms()) {
    for (const auto& h : gauge.terms()) {
      if (term.map.arity() == 0 && h.map.arity() == 0) continue;
      accumulate(rhs, term.phi * h.phi, bracket(term.map, h.map, conv));
    }
  }
  PseudoIsotopyReport report;
  report.holds = true;
  std::set<std::pair<int, Inputs>> keys;
  for (const auto& [k, row] : lhs) keys.insert(k);
  for (const auto& [k, row] : rhs) keys.insert(k);
  for (const auto& key : keys) {
    std::set<std::size_t> outputs;
    const auto l = lhs.find(key);
    const auto r = rhs.find(key);
    if (l != lhs.end()) {
      for (const auto& [j, f] : l->second) outputs.insert(j);
    }
    if (r != rhs.end()) {
      for (const auto& [j, f] : r->second) outputs.insert(j);
    }
    for (auto j : outputs) {
      ScalarFunction a, b;
      if (l != lhs.end() && l->second.count(j)) a = l->second.at(j);
      if (r != rhs.end() && r->second.count(j)) b = r->second.at(j);
      if (!(a == b)) {
        report.holds = false;
        report.mismatch = describe_entry(*base.space(), key, j) + ": dδ/dt = " + a.to_string() +
                          ", [m^t, h^t] = " + b.to_string();
        break;
      }
    }
    if (!report.holds) break;
  }
  if (path.kind() == Path::Kind::Linear) {
    std::vector<MultiMap> m;
    for (const auto& [k, mk] : base.ops()) m.push_back(mk);
    report.m_delta_zero = brackets_vanish(m, path.delta(), conv);
    report.delta_delta_zero = brackets_vanish(path.delta(), path.delta(), conv);
  }
  return report;
}

Gauge auto_gauge(const Path& path) {
  const auto& base = *path.base();
  const SpacePtr& space = base.space();
  auto weighted = [&](const Scalar& p, const Scalar& q) {
    std::vector<Scalar> entries;
    for (std::size_t i = 0; i < space->dim(); ++i) entries.push_back(p + q * Scalar(space->degree(i)));
    return MultiMap::diagonal(space, entries);
  };
  if (path.kind() == Path::Kind::Rescaling) {
    const auto& p = *path.rescale_params();
    const Scalar c = p.lambda - Scalar(1);
    return Gauge(space, {{ScalarFunction::reciprocal_linear(c, c), weighted(Scalar(2 * p.a + p.b), Scalar(-(p.a + p.b)))}});
  }
  if (path.kind() == Path::Kind::Linear) {
    // δ = c m gives m^t = (1 + c t) m.
    std::optional<Scalar> ratio;
    for (const auto& d : path.delta()) {
      if (d.is_zero()) continue;
      const MultiMap& mk = d.arity() <= base.kmax() ? base.op(d.arity()) : d;
      if (mk.is_zero() || &mk == &d) throw PreconditionError("auto gauge: δ is not a multiple of m");
      const auto& [inputs, vec] = *d.table().begin();
      const Element ref = mk.at(inputs);
      const auto& [j, v] = *vec.begin();
      if (ref.coeff(j).is_zero()) throw PreconditionError("auto gauge: δ is not a multiple of m");
      ratio = v / ref.coeff(j);
      break;
    }
    if (!ratio) return Gauge(space);
    std::map<int, MultiMap> delta_by_arity;
    for (const auto& d : path.delta()) {
      auto [it, inserted] = delta_by_arity.try_emplace(d.arity(), d);
      if (!inserted) it->second += d;
    }
    for (const auto& [k, mk] : base.ops()) {
      auto it = delta_by_arity.find(k);
      const MultiMap dk = it == delta_by_arity.end() ? MultiMap(space, k, 2 - k) : it->second;
      if (!(dk == *ratio * mk)) throw PreconditionError("auto gauge: δ is not a multiple of m");
    }
    for (const auto& [k, dk] : delta_by_arity) {
      if (k > base.kmax() && !dk.is_zero()) throw PreconditionError("auto gauge: δ is not a multiple of m");
    }
    return Gauge(space, {{ScalarFunction::reciprocal_linear(*ratio, *ratio), weighted(Scalar(1), Scalar(-1))}});
  }
  throw PreconditionError("auto gauge is only available for linear paths with δ = c m and rescaling paths");
}

int RibbonTree::leaves() const {
  if (leaf) return 1;
  int n = 0;
  for (const auto& c : children) n += c.leaves();
  return n;
}

int RibbonTree::interior_vertices() const {
  if (leaf) return 0;
  int n = 1;
  for (const auto& c : children) n += c.interior_vertices();
  return n;
}

std::string RibbonTree::to_string() const {
  if (leaf) return "|";
  std::string s = "v(";
  for (std::size_t i = 0; i < children.size(); ++i) s += (i ? "," : "") + children[i].to_string();
  return s + ")";
}

namespace {

class TreeEnumerator {
 public:
  explicit TreeEnumerator(std::vector<int> arities) : arities_(std::move(arities)) {
    std::sort(arities_.begin(), arities_.end());
    arities_.erase(std::unique(arities_.begin(), arities_.end()), arities_.end());
  }

  /// Trees with exactly k leaves and v interior vertices.
  const std::vector<RibbonTree>& exact(int k, int v) {
    auto key = std::make_pair(k, v);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<RibbonTree> out;
    if (v == 0) {
      if (k == 1) out.push_back(RibbonTree::make_leaf());
    } else {
      for (int r : arities_) {
        if (r < 0) continue;
        std::vector<RibbonTree> prefix;
        forests(r, k, v - 1, prefix, out);
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  void forests(int r, int k, int v, std::vector<RibbonTree>& prefix, std::vector<RibbonTree>& out) {
    if (r == 0) {
      if (k == 0 && v == 0) out.push_back(RibbonTree::vertex(prefix));
      return;
    }
    for (int v1 = 0; v1 <= v; ++v1) {
      for (int k1 = 0; k1 <= k; ++k1) {
        // Copy: recursive calls may rehash memo_.
        const std::vector<RibbonTree> firsts = exact(k1, v1);
        for (const auto& t : firsts) {
          prefix.push_back(t);
          forests(r - 1, k - k1, v - v1, prefix, out);
          prefix.pop_back();
        }
      }
    }
  }

  std::vector<int> arities_;
  std::map<std::pair<int, int>, std::vector<RibbonTree>> memo_;
};

}  // namespace

std::vector<RibbonTree> enumerate_trees(int k, int vmax, const std::vector<int>& arities) {
  if (k < 0 || vmax < 0) throw DomainError("enumerate_trees needs k >= 0 and vmax >= 0");
  TreeEnumerator e(arities);
  std::vector<RibbonTree> out;
  for (int v = 0; v <= vmax; ++v) {
    const auto& layer = e.exact(k, v);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

Quadrature Quadrature::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw DomainError("quadrature must be gauss:q or mc:N, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  Quadrature q;
  try {
    std::size_t used = 0;
    const long long n = std::stoll(arg, &used);
    if (used != arg.size() || n <= 0) throw std::invalid_argument(arg);
    if (kind == "gauss") {
      q.kind = Kind::Gauss;
      q.order = static_cast<int>(n);
    } else if (kind == "mc") {
      q.kind = Kind::MonteCarlo;
      q.samples = static_cast<std::uint64_t>(n);
    } else {
      throw DomainError("unknown quadrature kind '" + kind + "'");
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("quadrature parameter must be a positive integer, got '" + arg + "'");
  } catch (const std::out_of_range&) {
    throw DomainError("quadrature parameter out of range: '" + arg + "'");
  }
  return q;
}

namespace {

/// Tree with one chosen gauge term per interior vertex.
struct Labeled {
  const TimeTerm* term = nullptr;  // null for a leaf
  std::vector<Labeled> children;
};

void label_all(const RibbonTree& tree, const Gauge& gauge, std::vector<Labeled>& out) {
  if (tree.leaf) {
    out.push_back({});
    return;
  }
  const int r = static_cast<int>(tree.children.size());
  const auto choices = gauge.of_arity(r);
  if (choices.empty()) {
    throw PreconditionError("gauge has no arity-" + std::to_string(r) + " term for tree " + tree.to_string());
  }
  // Cartesian product of the children's labelings.
  std::vector<std::vector<Labeled>> child_options;
  for (const auto& c : tree.children) {
    std::vector<Labeled> opts;
    label_all(c, gauge, opts);
    child_options.push_back(std::move(opts));
  }
  std::vector<std::size_t> idx(child_options.size(), 0);
  for (const TimeTerm* term : choices) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Labeled l{term, {}};
      for (std::size_t i = 0; i < idx.size(); ++i) l.children.push_back(child_options[i][idx[i]]);
      out.push_back(std::move(l));
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == child_options[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
}

MultiMap compose_labeled(const Labeled& node, const SpacePtr& space) {
  if (!node.term) return MultiMap::identity(space);
  std::vector<MultiMap> inners;
  for (const auto& c : node.children) inners.push_back(compose_labeled(c, space));
  // Gauge operators have shifted degree 0, so the shifted rule adds no signs.
  return compose(node.term->map, inners, SignRule::Shifted);
}

/// ∫_0^s G, stored as a Chebyshev series on [0, T].
class ChebIntegral {
 public:
  ChebIntegral(const std::function<double(double)>& g, double T, int order) {
    series_ = gsl_cheb_alloc(static_cast<std::size_t>(order));
    integral_ = gsl_cheb_alloc(static_cast<std::size_t>(order));
    gsl_function f;
    f.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    f.params = const_cast<std::function<double(double)>*>(&g);
    gsl_cheb_init(series_, &f, 0.0, T);
    gsl_cheb_calc_integ(integral_, series_);
  }
  ChebIntegral(const ChebIntegral&) = delete;
  ChebIntegral& operator=(const ChebIntegral&) = delete;
  ~ChebIntegral() {
    gsl_cheb_free(series_);
    gsl_cheb_free(integral_);
  }
  double operator()(double s) const { return gsl_cheb_eval(integral_, s); }

 private:
  gsl_cheb_series* series_ = nullptr;
  gsl_cheb_series* integral_ = nullptr;
};

/// Builds G_v(s) = φ_v(s) Π_{interior children} H_c(s) with each H_c a
/// Chebyshev antiderivative; `owned` keeps the series alive.
std::function<double(double)> integrand(const Labeled& node, double T, int order,
                                        std::vector<std::unique_ptr<ChebIntegral>>& owned) {
  std::vector<const ChebIntegral*> inner;
  for (const auto& c : node.children) {
    if (!c.term) continue;
    auto g = integrand(c, T, order, owned);
    owned.push_back(std::make_unique<ChebIntegral>(g, T, order));
    inner.push_back(owned.back().get());
  }
  const ScalarFunction* phi = &node.term->phi;
  return [phi, inner](double s) {
    double v = (*phi)(s);
    for (const auto* h : inner) v *= (*h)(s);
    return v;
  };
}

double gauss_weight(const Labeled& root, double T, int order) {
  std::vector<std::unique_ptr<ChebIntegral>> owned;
  const auto g = integrand(root, T, std::max(2 * order, 8), owned);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  gsl_function f;
  f.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  f.params = const_cast<std::function<double(double)>*>(&g);
  const double v = gsl_integration_glfixed(&f, 0.0, T, table);
  gsl_integration_glfixed_table_free(table);
  return v;
}

void flatten(const Labeled& node, int parent, std::vector<std::pair<const ScalarFunction*, int>>& out) {
  if (!node.term) return;
  const int me = static_cast<int>(out.size());
  out.emplace_back(&node.term->phi, parent);
  for (const auto& c : node.children) flatten(c, me, out);
}

/// Samples the time-ordering region exactly: sorted uniforms placed along a
/// uniformly random linear extension of the tree order. The region has
/// volume T^V / Π(subtree sizes), so only φ contributes variance.
std::pair<double, double> monte_carlo_weight(const Labeled& root, double T, std::uint64_t samples, std::uint64_t seed) {
  std::vector<std::pair<const ScalarFunction*, int>> vertices;
  flatten(root, -1, vertices);
  const std::size_t V = vertices.size();
  std::vector<std::vector<std::size_t>> children(V);
  for (std::size_t i = 1; i < V; ++i) children[static_cast<std::size_t>(vertices[i].second)].push_back(i);
  // Preorder puts parents first, so a reverse sweep sees children first.
  std::vector<double> size(V, 1.0);
  for (std::size_t i = V; i-- > 1;) size[static_cast<std::size_t>(vertices[i].second)] += size[i];
  double volume = 1.0;
  for (std::size_t i = 0; i < V; ++i) volume *= T / size[i];

  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, T);
  std::vector<double> tau(V), times(V);
  // Earliest first; the root comes last.
  std::function<std::vector<std::size_t>(std::size_t)> extension = [&](std::size_t v) {
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::size_t> labels;
    for (std::size_t c : children[v]) {
      parts.push_back(extension(c));
      labels.insert(labels.end(), parts.back().size(), parts.size() - 1);
    }
    std::shuffle(labels.begin(), labels.end(), engine);
    std::vector<std::size_t> next(parts.size(), 0), out;
    out.reserve(labels.size() + 1);
    for (std::size_t l : labels) out.push_back(parts[l][next[l]++]);
    out.push_back(v);
    return out;
  };
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    for (auto& x : times) x = uniform(engine);
    std::sort(times.begin(), times.end());
    const auto order = extension(0);
    for (std::size_t i = 0; i < V; ++i) tau[order[i]] = times[i];
    double v = 1.0;
    for (std::size_t i = 0; i < V; ++i) v *= (*vertices[i].first)(tau[i]);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - mean * mean);
  return {volume * mean, volume * std::sqrt(var / static_cast<double>(samples))};
}

void require_no_poles(const Gauge& gauge, const Scalar& t) {
  for (const auto& term : gauge.terms()) {
    if (term.phi.has_pole_in(Scalar(0), t)) {
      throw DivergenceError("gauge coefficient " + term.phi.to_string() + " has a pole in [0, " + t.to_string() +
                            "]");
    }
  }
}

}  // namespace

TreeIntegral integrate_tree(const RibbonTree& tree, const Gauge& gauge, const Scalar& t, const Quadrature& q) {
  if (t < Scalar(0)) throw DomainError("integration bound must be non-negative");
  require_no_poles(gauge, t);
  const int n = tree.leaves();
  TreeIntegral result{FloatMap(gauge.space(), n, 1 - n), 0.0};
  if (tree.leaf) {
    result.value = FloatMap::from_exact(MultiMap::identity(gauge.space()));
    return result;
  }
  std::vector<Labeled> labeled;
  label_all(tree, gauge, labeled);
  const double T = t.to_double();
  double var = 0.0;
  for (const auto& l : labeled) {
    const MultiMap kernel = compose_labeled(l, gauge.space());
    if (kernel.is_zero() || T == 0.0) continue;
    double w = 0.0;
    if (q.kind == Quadrature::Kind::Gauss) {
      w = gauss_weight(l, T, q.order);
    } else {
      const auto [mean, err] = monte_carlo_weight(l, T, q.samples, q.seed);
      w = mean;
      var += err * err;
    }
    result.value.add(kernel, w);
  }
  result.std_error = std::sqrt(var);
  return result;
}

FormalEndomorphism formal_endomorphism(const Path& path, const Gauge& gauge, const Scalar& t, int kmax, int vmax,
                                       const Quadrature& q) {
  require_no_poles(gauge, t);
  for (const auto& term : path.terms()) {
    if (term.phi.has_pole_in(Scalar(0), t)) {
      throw DivergenceError("path coefficient " + term.phi.to_string() + " has a pole in [0, " + t.to_string() + "]");
    }
  }
  const auto check = verify_pseudo_isotopy(path, gauge);
  if (!check.holds) throw PreconditionError("not a pseudo-isotopy: " + check.mismatch);
  FormalEndomorphism out;
  const auto arities = gauge.arities();
  for (int k = 0; k <= kmax; ++k) {
    FloatMap fk(gauge.space(), k, 1 - k);
    FloatMap top(gauge.space(), k, 1 - k);
    for (const auto& tree : enumerate_trees(k, vmax, arities)) {
      const auto c = integrate_tree(tree, gauge, t, q);
      fk += c.value;
      if (tree.interior_vertices() == vmax) top += c.value;
      ++out.trees;
    }
    out.tail = std::max(out.tail, top.max_abs());
    out.components.push_back(std::move(fk));
  }
  return out;
}

namespace {

Eigen::MatrixXd dense(const MultiMap& f) {
  const auto n = static_cast<Eigen::Index>(f.space()->dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [inputs, vec] : f.table()) {
    for (const auto& [j, v] : vec) m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(inputs[0])) = v.to_double();
  }
  return m;
}

bool is_diagonal(const MultiMap& f) {
  return std::all_of(f.table().begin(), f.table().end(), [](const auto& kv) {
    return kv.second.size() == 1 && kv.second.begin()->first == kv.first[0];
  });
}

}  // namespace

StrictExpResult strict_exp(const Gauge& gauge, const Scalar& t) {
  if (!gauge.is_linear()) throw PreconditionError("strict_exp needs a gauge with arity-1 terms only");
  const auto& terms = gauge.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!(compose_linear(terms[i].map, terms[j].map) == compose_linear(terms[j].map, terms[i].map))) {
        throw PreconditionError("strict_exp needs pairwise commuting gauge operators");
      }
    }
  }
  require_no_poles(gauge, t);
  const SpacePtr& space = gauge.space();
  const std::size_t dim = space->dim();

  std::vector<Antiderivative> prims;
  for (const auto& term : terms) prims.push_back(term.phi.antiderivative());

  // Exact when the polynomial parts cancel and every log term is
  // (ln ρ) times an integer diagonal.
  MultiMap poly_part(space, 1, 0);
  for (std::size_t j = 0; j < terms.size(); ++j) poly_part += prims[j].poly(t) * terms[j].map;
  bool exact = poly_part.is_zero();
  std::vector<Scalar> diag(dim, Scalar(1));
  for (std::size_t j = 0; exact && j < terms.size(); ++j) {
    if (!prims[j].has_log()) continue;
    if (!is_diagonal(terms[j].map)) {
      exact = false;
      break;
    }
    const Scalar rho = Scalar(1) + prims[j].c * t;
    for (std::size_t i = 0; i < dim; ++i) {
      const Scalar e = prims[j].mu * terms[j].map.at({i}).coeff(i);
      if (!(e.denominator() == 1)) {
        exact = false;
        break;
      }
      diag[i] *= rho.pow(e.numerator().get_si());
    }
  }
  StrictExpResult result;
  if (exact) {
    result.exact = MultiMap::diagonal(space, diag);
    result.value = FloatMap::from_exact(*result.exact);
    result.note = "exact";
    return result;
  }
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const double T = t.to_double();
  for (std::size_t j = 0; j < terms.size(); ++j) c += prims[j](T) * dense(terms[j].map);
  const Eigen::MatrixXd e = c.exp();
  FloatMap f(space, 1, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (v != 0.0 && space->degree(i) == space->degree(j)) f.table[{i}][j] = v;
    }
  }
  result.value = std::move(f);
  result.note = "floating point (matrix exponential)";
  return result;
}

}  // namespace ainf
