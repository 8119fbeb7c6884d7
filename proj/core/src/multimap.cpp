#include "ainf/multimap.hpp"

#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ainf/error.hpp"

namespace ainf {

MultiMap::MultiMap(SpacePtr space, int arity, int degree) : space_(std::move(space)), arity_(arity), degree_(degree) {
  if (arity < 0) throw ArityError("negative arity");
}

MultiMap MultiMap::identity(SpacePtr space) {
  MultiMap id(space, 1, 0);
  for (std::size_t i = 0; i < space->dim(); ++i) id.table_[{i}] = SparseVector{{i, Scalar(1)}};
  return id;
}

MultiMap MultiMap::euler(SpacePtr space) {
  MultiMap e(space, 1, 0);
  for (std::size_t i = 0; i < space->dim(); ++i) {
    if (space->degree(i) != 0) e.table_[{i}] = SparseVector{{i, Scalar(space->degree(i))}};
  }
  return e;
}

MultiMap MultiMap::constant(const Element& value, int degree) {
  if (!value.is_zero()) degree = value.degree();
  MultiMap c(value.space(), 0, degree);
  if (!value.is_zero()) c.table_[{}] = value.coeffs();
  return c;
}

MultiMap MultiMap::diagonal(SpacePtr space, const std::vector<Scalar>& entries) {
  if (entries.size() != space->dim()) throw DomainError("diagonal size does not match the space");
  MultiMap d(space, 1, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].is_zero()) d.table_[{i}] = SparseVector{{i, entries[i]}};
  }
  return d;
}

Element MultiMap::at(const Inputs& inputs) const {
  auto it = table_.find(inputs);
  if (it == table_.end()) return Element(space_);
  return Element(space_, it->second);
}

int MultiMap::input_degree(const Inputs& inputs) const {
  int sum = 0;
  for (auto i : inputs) sum += space_->degree(i);
  return sum;
}

void MultiMap::set(const Inputs& inputs, const SparseVector& output) {
  if (static_cast<int>(inputs.size()) != arity_) throw ArityError("input tuple length does not match arity");
  const int expected = input_degree(inputs) + degree_;
  SparseVector cleaned;
  for (const auto& [index, value] : output) {
    if (value.is_zero()) continue;
    if (index >= space_->dim()) throw DomainError("basis index out of range");
    if (space_->degree(index) != expected) {
      throw DomainError("output " + (*space_)[index].name + " has degree " + std::to_string(space_->degree(index)) +
                        ", expected " + std::to_string(expected));
    }
    cleaned.emplace(index, value);
  }
  if (cleaned.empty()) {
    table_.erase(inputs);
  } else {
    table_[inputs] = std::move(cleaned);
  }
}

void MultiMap::accumulate(const Inputs& inputs, const Scalar& factor, const SparseVector& output) {
  if (factor.is_zero() || output.empty()) return;
  auto [it, inserted] = table_.try_emplace(inputs);
  if (inserted) {
    const int expected = input_degree(inputs) + degree_;
    for (const auto& kv : output) {
      if (space_->degree(kv.first) != expected) {
        table_.erase(it);
        throw DomainError("accumulated output violates degree bookkeeping");
      }
    }
  }
  axpy(it->second, factor, output);
  if (it->second.empty()) table_.erase(it);
}

void MultiMap::check_compatible(const MultiMap& other) const {
  if (arity_ != other.arity_ || degree_ != other.degree_) {
    throw DomainError("maps of bidegree (" + std::to_string(arity_) + "," + std::to_string(degree_) + ") and (" +
                      std::to_string(other.arity_) + "," + std::to_string(other.degree_) + ") cannot be added");
  }
}

MultiMap& MultiMap::operator+=(const MultiMap& other) {
  check_compatible(other);
  if (!space_) space_ = other.space_;
  for (const auto& [inputs, output] : other.table_) accumulate(inputs, Scalar(1), output);
  return *this;
}

MultiMap& MultiMap::operator-=(const MultiMap& other) {
  check_compatible(other);
  if (!space_) space_ = other.space_;
  for (const auto& [inputs, output] : other.table_) accumulate(inputs, Scalar(-1), output);
  return *this;
}

MultiMap& MultiMap::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    table_.clear();
    return *this;
  }
  for (auto& [inputs, output] : table_) {
    for (auto& kv : output) kv.second *= factor;
  }
  return *this;
}

std::string MultiMap::to_string() const {
  std::ostringstream os;
  os << "map(arity=" << arity_ << ", degree=" << degree_ << ")";
  for (const auto& [inputs, output] : table_) {
    os << "\n  (";
    for (std::size_t i = 0; i < inputs.size(); ++i) os << (i ? "," : "") << (*space_)[inputs[i]].name;
    os << ") -> " << Element(space_, output).to_string();
  }
  return os.str();
}

int crossing_sign(const GradedSpace& space, SignRule rule, int arity, int degree, std::span<const std::size_t> before) {
  long passed = 0;
  if (rule == SignRule::Koszul) {
    for (auto i : before) passed += space.degree(i);
    return sign_power(static_cast<long>(degree) * passed);
  }
  for (auto i : before) passed += space.degree(i) - 1;
  return sign_power(static_cast<long>(arity + degree - 1) * passed);
}

Element evaluate(const MultiMap& f, std::span<const Element> inputs) {
  if (static_cast<int>(inputs.size()) != f.arity()) {
    throw ArityError("evaluate: " + std::to_string(inputs.size()) + " inputs for a map of arity " +
                     std::to_string(f.arity()));
  }
  for (const auto& x : inputs) {
    if (!x.is_homogeneous()) throw DegreeError("evaluate: inhomogeneous input " + x.to_string());
  }
  Element result(f.space());
  SparseVector acc;
  Inputs tuple(inputs.size());
  auto recurse = [&](auto&& self, std::size_t slot, const Scalar& coefficient) -> void {
    if (slot == inputs.size()) {
      auto it = f.table().find(tuple);
      if (it != f.table().end()) axpy(acc, coefficient, it->second);
      return;
    }
    for (const auto& [index, value] : inputs[slot].coeffs()) {
      tuple[slot] = index;
      self(self, slot + 1, coefficient * value);
    }
  };
  recurse(recurse, 0, Scalar(1));
  return Element(f.space(), std::move(acc));
}

Tensor koszul_tensor_apply(std::span<const MultiMap> maps, std::span<const Element> inputs, SignRule rule) {
  std::size_t total = 0;
  for (const auto& m : maps) total += static_cast<std::size_t>(m.arity());
  if (total != inputs.size()) {
    throw ArityError("tensor apply: maps consume " + std::to_string(total) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
  for (const auto& x : inputs) {
    if (!x.is_homogeneous()) throw DegreeError("tensor apply: inhomogeneous input " + x.to_string());
  }
  if (maps.empty()) return Tensor{{Inputs{}, Scalar(1)}};
  const GradedSpace& space = *maps.front().space();

  // Expand the inputs into basis tuples, then push each block through its map.
  Tensor current{{Inputs{}, Scalar(1)}};
  for (const auto& x : inputs) {
    Tensor next;
    for (const auto& [tuple, c] : current) {
      for (const auto& [index, value] : x.coeffs()) {
        Inputs t = tuple;
        t.push_back(index);
        next[t] += c * value;
      }
    }
    current = std::move(next);
  }

  Tensor result;
  for (const auto& [tuple, c] : current) {
    Tensor partial{{Inputs{}, c}};
    std::size_t pos = 0;
    for (const auto& f : maps) {
      const auto n = static_cast<std::size_t>(f.arity());
      const std::span<const std::size_t> before(tuple.data(), pos);
      const int sign = crossing_sign(space, rule, f.arity(), f.degree(), before);
      Inputs block(tuple.begin() + static_cast<long>(pos), tuple.begin() + static_cast<long>(pos + n));
      auto it = f.table().find(block);
      pos += n;
      Tensor next;
      if (it != f.table().end()) {
        for (const auto& [out_tuple, oc] : partial) {
          for (const auto& [index, value] : it->second) {
            Inputs t = out_tuple;
            t.push_back(index);
            next[t] += oc * value * Scalar(sign);
          }
        }
      }
      partial = std::move(next);
      if (partial.empty()) break;
    }
    for (auto& [t, v] : partial) result[t] += v;
  }
  std::erase_if(result, [](const auto& kv) { return kv.second.is_zero(); });
  return result;
}

Element apply(const MultiMap& f, const Tensor& tensor) {
  SparseVector acc;
  for (const auto& [tuple, c] : tensor) {
    if (static_cast<int>(tuple.size()) != f.arity()) throw ArityError("apply: tensor rank does not match arity");
    auto it = f.table().find(tuple);
    if (it != f.table().end()) axpy(acc, c, it->second);
  }
  return Element(f.space(), std::move(acc));
}

MultiMap insert(const MultiMap& f, const MultiMap& g, int slot, SignRule rule) {
  if (f.arity() < 1 || slot < 0 || slot >= f.arity()) {
    throw ArityError("insert: slot " + std::to_string(slot) + " out of range for arity " + std::to_string(f.arity()));
  }
  const GradedSpace& space = *f.space();
  MultiMap result(f.space(), f.arity() + g.arity() - 1, f.degree() + g.degree());

  // g's entries grouped by the basis vectors they hit.
  std::unordered_map<std::size_t, std::vector<std::pair<const Inputs*, Scalar>>> hits;
  for (const auto& [g_in, g_out] : g.table()) {
    for (const auto& [index, value] : g_out) hits[index].emplace_back(&g_in, value);
  }
  const auto s = static_cast<std::size_t>(slot);
  for (const auto& [f_in, f_out] : f.table()) {
    auto it = hits.find(f_in[s]);
    if (it == hits.end()) continue;
    const int sign = crossing_sign(space, rule, g.arity(), g.degree(), std::span<const std::size_t>(f_in.data(), s));
    for (const auto& [g_in, value] : it->second) {
      Inputs combined;
      combined.reserve(f_in.size() + g_in->size() - 1);
      combined.insert(combined.end(), f_in.begin(), f_in.begin() + slot);
      combined.insert(combined.end(), g_in->begin(), g_in->end());
      combined.insert(combined.end(), f_in.begin() + slot + 1, f_in.end());
      result.accumulate(combined, value * Scalar(sign), f_out);
    }
  }
  return result;
}

MultiMap compose(const MultiMap& outer, std::span<const MultiMap> inners, SignRule rule) {
  if (static_cast<int>(inners.size()) != outer.arity()) {
    throw ArityError("compose: " + std::to_string(inners.size()) + " inner maps for outer arity " +
                     std::to_string(outer.arity()));
  }
  int arity = 0;
  int degree = outer.degree();
  for (const auto& g : inners) {
    arity += g.arity();
    degree += g.degree();
  }
  MultiMap result(outer.space(), arity, degree);
  if (inners.empty()) {
    result = outer;
    return result;
  }
  const GradedSpace& space = *outer.space();

  Inputs in_tuple;
  Inputs out_tuple;
  auto recurse = [&](auto&& self, std::size_t p, const Scalar& coefficient) -> void {
    if (p == inners.size()) {
      auto it = outer.table().find(out_tuple);
      if (it != outer.table().end()) result.accumulate(in_tuple, coefficient, it->second);
      return;
    }
    const auto& g = inners[p];
    const int sign = crossing_sign(space, rule, g.arity(), g.degree(), in_tuple);
    for (const auto& [g_in, g_out] : g.table()) {
      const auto in_size = in_tuple.size();
      in_tuple.insert(in_tuple.end(), g_in.begin(), g_in.end());
      for (const auto& [index, value] : g_out) {
        out_tuple.push_back(index);
        self(self, p + 1, sign > 0 ? coefficient * value : -(coefficient * value));
        out_tuple.pop_back();
      }
      in_tuple.resize(in_size);
    }
  };
  recurse(recurse, 0, Scalar(1));
  return result;
}

MultiMap compose_linear(const MultiMap& f, const MultiMap& g) {
  if (f.arity() != 1 || g.arity() != 1) throw ArityError("compose_linear expects arity-1 maps");
  const MultiMap inner[] = {g};
  return compose(f, inner, SignRule::Koszul);
}

std::vector<Inputs> admissible_inputs(const GradedSpace& space, int arity, int degree) {
  std::vector<Inputs> out;
  const std::size_t dim = space.dim();
  if (arity == 0) {
    if (!space.of_degree(degree).empty()) out.push_back({});
    return out;
  }
  if (dim == 0) return out;
  Inputs tuple(static_cast<std::size_t>(arity), 0);
  while (true) {
    int sum = degree;
    for (auto i : tuple) sum += space.degree(i);
    if (!space.of_degree(sum).empty()) out.push_back(tuple);
    int pos = arity - 1;
    while (pos >= 0 && ++tuple[static_cast<std::size_t>(pos)] == dim) {
      tuple[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

}  // namespace ainf
