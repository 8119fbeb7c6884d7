#include "ainf/graded_space.hpp"

#include <algorithm>
#include <sstream>

#include "ainf/error.hpp"

namespace ainf {

GradedSpace::GradedSpace(std::vector<BasisEntry> basis) : basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const auto& entry = basis_[i];
    if (entry.name.empty()) throw DomainError("empty basis name");
    if (!index_.emplace(entry.name, i).second) {
      throw DomainError("duplicate basis name '" + entry.name + "'");
    }
    by_degree_[entry.degree].push_back(i);
  }
  if (!basis_.empty()) {
    min_degree_ = by_degree_.begin()->first;
    max_degree_ = by_degree_.rbegin()->first;
  }
}

std::optional<std::size_t> GradedSpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GradedSpace::index_of(std::string_view name) const {
  auto found = find(name);
  if (!found) throw DomainError("unknown basis name '" + std::string(name) + "'");
  return *found;
}

const std::vector<std::size_t>& GradedSpace::of_degree(int k) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = by_degree_.find(k);
  return it == by_degree_.end() ? kEmpty : it->second;
}

SpacePtr make_space(std::vector<BasisEntry> basis) {
  return std::make_shared<const GradedSpace>(std::move(basis));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void axpy(SparseVector& target, const Scalar& factor, const SparseVector& source) {
  if (factor.is_zero()) return;
  for (const auto& [index, value] : source) {
    auto [it, inserted] = target.try_emplace(index, factor * value);
    if (!inserted) {
      it->second += factor * value;
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

Element::Element(SpacePtr space, SparseVector coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [index, value] : coeffs_) {
    if (index >= space_->dim()) throw DomainError("basis index out of range");
  }
}

Element Element::basis(SpacePtr space, std::size_t index) {
  SparseVector v;
  v.emplace(index, Scalar(1));
  return Element(std::move(space), std::move(v));
}

Element Element::from_terms(SpacePtr space, const std::vector<std::pair<std::string, Scalar>>& terms) {
  Element e(space);
  for (const auto& [name, value] : terms) {
    SparseVector v;
    v.emplace(space->index_of(name), value);
    axpy(e.coeffs_, Scalar(1), v);
  }
  return e;
}

Scalar Element::coeff(std::size_t i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Scalar(0) : it->second;
}

bool Element::is_homogeneous() const {
  if (coeffs_.empty()) return true;
  const int d = space_->degree(coeffs_.begin()->first);
  return std::all_of(coeffs_.begin(), coeffs_.end(), [&](const auto& kv) { return space_->degree(kv.first) == d; });
}

int Element::degree() const {
  if (coeffs_.empty()) throw DegreeError("degree of the zero element is undefined");
  if (!is_homogeneous()) throw DegreeError("element " + to_string() + " is not homogeneous");
  return space_->degree(coeffs_.begin()->first);
}

Element& Element::operator+=(const Element& other) {
  if (!space_) space_ = other.space_;
  axpy(coeffs_, Scalar(1), other.coeffs_);
  return *this;
}

Element& Element::operator-=(const Element& other) {
  if (!space_) space_ = other.space_;
  axpy(coeffs_, Scalar(-1), other.coeffs_);
  return *this;
}

Element& Element::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  for (auto& kv : coeffs_) kv.second *= factor;
  return *this;
}

Element Element::operator-() const {
  Element copy = *this;
  copy *= Scalar(-1);
  return copy;
}

bool operator==(const Element& a, const Element& b) { return a.coeffs_ == b.coeffs_; }

std::string Element::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [index, value] : coeffs_) {
    if (!first) os << ',';
    first = false;
    os << (*space_)[index].name << ':' << value;
  }
  return os.str();
}

Element parse_element(const SpacePtr& space, std::string_view text) {
  Element result(space);
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty() || text == "0") return result;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto term = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (term.empty()) throw DomainError("empty term in element text");
    const auto colon = term.rfind(':');
    std::string_view name = term;
    Scalar coefficient(1);
    if (colon != std::string_view::npos) {
      name = trim(term.substr(0, colon));
      coefficient = Scalar::parse(trim(term.substr(colon + 1)));
    }
    result += coefficient * Element::basis(space, space->index_of(name));
  }
  return result;
}

}  // namespace ainf
