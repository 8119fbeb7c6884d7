#pragma once

#include <string>

#include "ainf/isotopy.hpp"

namespace ainf::cli {

/// Gauge text:
///   gauge := "auto" | term ("+" term)*
///   term  := coeff "*" op
///   coeff := "const(" q ")" | "recip(" q "," q ")" | "poly(" q ("," q)* ")"
///   op    := "lin(" q "," q ")"
/// recip(mu,c) is mu/(1+ct), poly lists coefficients from t^0 up, and
/// lin(p,q) is the degree-0 map pI + qE. "auto" asks auto_gauge.
Gauge parse_gauge(const std::string& text, const Path& path);

}  // namespace ainf::cli
