#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ainf/ainfty.hpp"

namespace ainf::cli {

/// Malformed algebra file. `line` and `column` are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct AlgebraFile {
  StructurePtr structure;
  std::optional<std::string> unit;
  nlohmann::json metadata;  // null when absent

  friend bool operator==(const AlgebraFile& a, const AlgebraFile& b);
};

/// Operations are validated for degrees only; the construction equations
/// are left to `check`.
AlgebraFile parse_algebra(const std::string& text);
AlgebraFile load_algebra(const std::string& path);

/// Canonical text: basis order, arities ascending, input tuples ascending.
std::string emit_algebra(const AlgebraFile& file);
void save_algebra(const AlgebraFile& file, const std::string& path);

}  // namespace ainf::cli
