#pragma once

#include <map>
#include <utility>

#include "ainf/ainfty.hpp"

namespace ainf {

/// Finite graded-commutative algebra with differential, presented by
/// structure constants on a basis. Products and differentials not listed are
/// zero.
struct CdgaModel {
  SpacePtr space;
  std::map<std::pair<std::size_t, std::size_t>, SparseVector> product;
  std::map<std::size_t, SparseVector> differential;
  int kmax = 2;

  Element wedge(const Element& x, const Element& y) const;
  Element d(const Element& x) const;
};

/// Element-level curved structure with m_0 = a, m_1(x) = (-1)^{|x|} dx and
/// m_2(x, y) = (-1)^{|x|(|y|+1)} x∧y. Throws PreconditionError when da ≠ 0.
AInftyStructure build_de_rham_model(const CdgaModel& model, const Element& curvature);

}  // namespace ainf
