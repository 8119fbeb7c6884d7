#pragma once

#include "ainf/ainfty.hpp"

namespace ainf {

/// m̃_k = λ^{a k + b} m_k. Exponents are integers so everything stays in Q.
struct RescaleParams {
  Scalar lambda = Scalar(1);
  int a = 0;
  int b = 0;
};

/// Throws DomainError when λ = 0 and some nonzero m_k needs a negative power.
AInftyStructure rescale(const AInftyStructure& a, const RescaleParams& p);

/// (λ^E)^e: the diagonal map with entry λ^{e d} on a degree-d basis entry.
MultiMap lambda_euler_power(const SpacePtr& space, const Scalar& lambda, long e);

/// f_1 = λ^{2a+b} (λ^E)^{-a-b}.
MultiMap rescaling_linear_part(const SpacePtr& space, const RescaleParams& p);

/// Strict morphism (f_1 only) from rescale(a, p) to a. Requires λ ≠ 0.
Morphism rescaling_morphism(const StructurePtr& a, const RescaleParams& p);

}  // namespace ainf
