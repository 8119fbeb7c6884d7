#include "ainf/presets.hpp"

namespace ainf::presets {

namespace {

SparseVector basis_vector(std::size_t i, const Scalar& c = Scalar(1)) { return SparseVector{{i, c}}; }

}  // namespace

StructurePtr e1() {
  auto space = make_space({{"1", 0}, {"x", 1}});
  MultiMap m2(space, 2, 0);
  m2.set({0, 0}, basis_vector(0));
  m2.set({0, 1}, basis_vector(1));
  m2.set({1, 0}, basis_vector(1));
  return std::make_shared<AInftyStructure>(space, Convention::MapLevel, 2, std::vector<MultiMap>{m2});
}

StructurePtr e2() {
  auto space = make_space({{"u", 0}, {"v", 1}});
  MultiMap m1(space, 1, 1);
  m1.set({0}, basis_vector(1));
  return std::make_shared<AInftyStructure>(space, Convention::MapLevel, 1, std::vector<MultiMap>{m1});
}

CdgaModel torus_model() {
  CdgaModel model;
  model.space = make_space({{"1", 0}, {"x", 1}, {"y", 1}, {"w", 2}});
  auto& p = model.product;
  for (std::size_t i = 0; i < 4; ++i) {
    p[{0, i}] = basis_vector(i);
    if (i != 0) p[{i, 0}] = basis_vector(i);
  }
  p[{1, 2}] = basis_vector(3);
  p[{2, 1}] = basis_vector(3, Scalar(-1));
  return model;
}

StructurePtr e3(const Scalar& alpha) {
  auto model = torus_model();
  return std::make_shared<AInftyStructure>(
      build_de_rham_model(model, Element(model.space, alpha.is_zero() ? SparseVector{} : basis_vector(3, alpha))));
}

StructurePtr e4() {
  auto space = make_space({{"c", -1}, {"p", 1}, {"r", 1}, {"q", 2}});
  MultiMap m3(space, 3, -1);
  m3.set({1, 1, 1}, basis_vector(3));
  m3.set({1, 2, 1}, basis_vector(3, Scalar(2)));
  m3.set({2, 1, 2}, basis_vector(3, Scalar(-1)));
  m3.set({2, 2, 2}, basis_vector(3, Scalar(1, 3)));
  return std::make_shared<AInftyStructure>(space, Convention::ElementLevel, 3, std::vector<MultiMap>{m3});
}

CdgaModel interval_model() {
  CdgaModel model;
  model.space = make_space({{"1", 0}, {"s", 1}, {"v", 2}});
  auto& p = model.product;
  for (std::size_t i = 0; i < 3; ++i) {
    p[{0, i}] = basis_vector(i);
    if (i != 0) p[{i, 0}] = basis_vector(i);
  }
  model.differential[1] = basis_vector(2);
  return model;
}

StructurePtr interval() {
  auto model = interval_model();
  return std::make_shared<AInftyStructure>(build_de_rham_model(model, Element::basis(model.space, 2)));
}

std::vector<std::pair<std::string, StructurePtr>> all() {
  return {{"E1", e1()}, {"E2", e2()}, {"E3", e3(Scalar(1))}, {"E4", e4()}, {"interval", interval()}};
}

std::optional<Element> unit_of(const AInftyStructure& a) {
  auto index = a.space()->find("1");
  if (!index || a.space()->degree(*index) != 0) return std::nullopt;
  return Element::basis(a.space(), *index);
}

}  // namespace ainf::presets
