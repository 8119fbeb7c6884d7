#include "ainf/de_rham.hpp"

#include "ainf/error.hpp"

namespace ainf {

Element CdgaModel::wedge(const Element& x, const Element& y) const {
  SparseVector acc;
  for (const auto& [i, a] : x.coeffs()) {
    for (const auto& [j, b] : y.coeffs()) {
      auto it = product.find({i, j});
      if (it != product.end()) axpy(acc, a * b, it->second);
    }
  }
  return Element(space, std::move(acc));
}

Element CdgaModel::d(const Element& x) const {
  SparseVector acc;
  for (const auto& [i, a] : x.coeffs()) {
    auto it = differential.find(i);
    if (it != differential.end()) axpy(acc, a, it->second);
  }
  return Element(space, std::move(acc));
}

AInftyStructure build_de_rham_model(const CdgaModel& model, const Element& curvature) {
  const auto& space = model.space;
  if (!curvature.is_zero() && curvature.degree() != 2) throw DegreeError("curvature must have degree 2");
  const Element da = model.d(curvature);
  if (!da.is_zero()) {
    throw PreconditionError("curvature is not closed: d(" + curvature.to_string() + ") = " + da.to_string());
  }
  MultiMap m1(space, 1, 1);
  for (const auto& [i, out] : model.differential) {
    const int sign = sign_power(space->degree(i));
    m1.accumulate({i}, Scalar(sign), out);
  }
  MultiMap m2(space, 2, 0);
  for (const auto& [ij, out] : model.product) {
    const long di = space->degree(ij.first);
    const long dj = space->degree(ij.second);
    m2.accumulate({ij.first, ij.second}, Scalar(sign_power(di * (dj + 1))), out);
  }
  std::vector<MultiMap> maps;
  maps.push_back(MultiMap::constant(curvature, 2));
  maps.push_back(std::move(m1));
  maps.push_back(std::move(m2));
  return AInftyStructure(space, Convention::ElementLevel, model.kmax, std::move(maps));
}

}  // namespace ainf
