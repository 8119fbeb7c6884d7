#include "ainf/rescaling.hpp"

#include "ainf/error.hpp"

namespace ainf {

AInftyStructure rescale(const AInftyStructure& a, const RescaleParams& p) {
  std::vector<MultiMap> maps;
  for (const auto& [k, mk] : a.ops()) {
    const long exponent = static_cast<long>(p.a) * k + p.b;
    if (p.lambda.is_zero() && exponent < 0) {
      throw DomainError("rescale: λ = 0 needs a negative power for m_" + std::to_string(k) + " (exponent " +
                        std::to_string(exponent) + ")");
    }
    maps.push_back(p.lambda.pow(exponent) * mk);
  }
  return AInftyStructure(a.space(), a.convention(), a.kmax(), std::move(maps));
}

MultiMap lambda_euler_power(const SpacePtr& space, const Scalar& lambda, long e) {
  if (lambda.is_zero()) throw DomainError("λ^E needs λ ≠ 0");
  std::vector<Scalar> entries;
  entries.reserve(space->dim());
  for (std::size_t i = 0; i < space->dim(); ++i) entries.push_back(lambda.pow(e * space->degree(i)));
  return MultiMap::diagonal(space, entries);
}

MultiMap rescaling_linear_part(const SpacePtr& space, const RescaleParams& p) {
  return p.lambda.pow(2L * p.a + p.b) * lambda_euler_power(space, p.lambda, -static_cast<long>(p.a) - p.b);
}

Morphism rescaling_morphism(const StructurePtr& a, const RescaleParams& p) {
  if (p.lambda.is_zero()) throw DomainError("rescaling morphism needs λ ≠ 0");
  auto source = std::make_shared<AInftyStructure>(rescale(*a, p));
  return Morphism(source, a, {rescaling_linear_part(a->space(), p)});
}

}  // namespace ainf
