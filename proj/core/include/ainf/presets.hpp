#pragma once

#include <string>
#include <vector>

#include "ainf/ainfty.hpp"
#include "ainf/de_rham.hpp"

namespace ainf::presets {

/// Unital exterior algebra on one odd generator: basis 1 (deg 0), x (deg 1),
/// m_2 the product. Map-level, kmax 2.
StructurePtr e1();

/// Two-term complex u (deg 0) -> v (deg 1), m_1(u) = v. Map-level, kmax 1.
StructurePtr e2();

/// Cohomology of the torus: 1, x, y, w = x∧y with d = 0 and curvature αw.
/// Element-level, kmax 2.
CdgaModel torus_model();
StructurePtr e3(const Scalar& alpha);

/// c (deg -1), p, r (deg 1), q (deg 2) with only m_3, supported on triples
/// of degree-1 inputs. Element-level, kmax 3.
StructurePtr e4();

/// 1, s (deg 1), v (deg 2) with ds = v; curvature v is exact.
CdgaModel interval_model();
StructurePtr interval();

/// All five bundled structures with display names (E3 at α = 1).
std::vector<std::pair<std::string, StructurePtr>> all();

/// The unit of a bundled structure, when it has one.
std::optional<Element> unit_of(const AInftyStructure& a);

}  // namespace ainf::presets
