#include "algebra_file.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ainf/error.hpp"

namespace ainf::cli {

using nlohmann::json;

ParseError::ParseError(const std::string& message, int line, int column) :
    std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message),
    line_(line),
    column_(column) {}

bool operator==(const AlgebraFile& a, const AlgebraFile& b) {
  if (!a.structure || !b.structure) return a.structure == b.structure;
  return *a.structure == *b.structure && a.unit == b.unit && a.metadata == b.metadata;
}

namespace {

struct Position {
  int line = 1;
  int column = 1;
};

/// Start position of every value in a document nlohmann has already
/// accepted, keyed by JSON pointer.
class PositionIndex {
 public:
  explicit PositionIndex(const std::string& text) : text_(text) {
    skip_ws();
    value("");
  }

  Position at(const std::string& pointer) const {
    // Fall back to the closest recorded ancestor.
    std::string p = pointer;
    while (true) {
      if (auto it = positions_.find(p); it != positions_.end()) return it->second;
      if (p.empty()) return {};
      p = p.substr(0, p.rfind('/'));
    }
  }

 private:
  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(text_[i_]) & 0xC0) != 0x80) {
      ++pos_.column;
    }
    ++i_;
  }
  void skip_ws() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) advance();
  }
  std::string string() {
    std::string out;
    advance();  // opening quote
    while (i_ < text_.size() && text_[i_] != '"') {
      if (text_[i_] == '\\') {
        advance();
        // Escapes only matter for key lookup; "~" and "/" handled below.
      }
      out += text_[i_];
      advance();
    }
    advance();
    return out;
  }
  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }
  void value(const std::string& pointer) {
    positions_[pointer] = pos_;
    const char c = text_[i_];
    if (c == '{') {
      advance();
      skip_ws();
      while (text_[i_] != '}') {
        const std::string key = string();
        skip_ws();
        advance();  // colon
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (text_[i_] == ',') advance();
        skip_ws();
      }
      advance();
    } else if (c == '[') {
      advance();
      skip_ws();
      for (int n = 0; text_[i_] != ']'; ++n) {
        value(pointer + "/" + std::to_string(n));
        skip_ws();
        if (text_[i_] == ',') advance();
        skip_ws();
      }
      advance();
    } else if (c == '"') {
      string();
    } else {
      while (i_ < text_.size() && !std::strchr(",]} \t\r\n", text_[i_])) advance();
    }
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Position pos_;
  std::map<std::string, Position> positions_;
};

class Reader {
 public:
  Reader(const json& doc, const PositionIndex& index) : doc_(doc), index_(index) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    const Position p = index_.at(pointer);
    throw ParseError(message + (pointer.empty() ? "" : " (at " + pointer + ")"), p.line, p.column);
  }

  const json& get(const std::string& pointer) const { return doc_.at(json::json_pointer(pointer)); }

  void expect_object(const std::string& pointer, const std::set<std::string>& allowed,
                     const std::set<std::string>& required) const {
    const json& v = get(pointer);
    if (!v.is_object()) fail(pointer, "expected an object");
    for (const auto& [key, value] : v.items()) {
      if (!allowed.count(key)) fail(pointer + "/" + key, "unknown key '" + key + "'");
    }
    for (const auto& key : required) {
      if (!v.contains(key)) fail(pointer, "missing key '" + key + "'");
    }
  }
  std::string string_at(const std::string& pointer) const {
    const json& v = get(pointer);
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }
  long integer_at(const std::string& pointer) const {
    const json& v = get(pointer);
    if (!v.is_number_integer()) fail(pointer, "expected an integer");
    return v.get<long>();
  }
  std::size_t array_at(const std::string& pointer) const {
    const json& v = get(pointer);
    if (!v.is_array()) fail(pointer, "expected an array");
    return v.size();
  }
  Scalar rational_at(const std::string& pointer) const {
    const json& v = get(pointer);
    if (!v.is_string()) fail(pointer, "rationals are written as strings such as \"3/4\" or \"-2\"");
    try {
      return Scalar::parse(v.get<std::string>());
    } catch (const Error& e) {
      fail(pointer, e.what());
    }
  }

 private:
  const json& doc_;
  const PositionIndex& index_;
};

}  // namespace

AlgebraFile parse_algebra(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line and column.
    int line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    throw ParseError(what, line, column);
  }
  const PositionIndex index(text);
  const Reader r(doc, index);

  r.expect_object("", {"field", "convention", "kmax", "basis", "maps", "unit", "metadata"},
                  {"field", "convention", "basis", "maps"});
  if (r.string_at("/field") != "rational")
    r.fail("/field", "only the \"rational\" field is supported");

  Convention convention{};
  try {
    convention = convention_from_string(r.string_at("/convention"));
  } catch (const DomainError& e) {
    r.fail("/convention", e.what());
  }

  std::vector<BasisEntry> basis;
  const std::size_t dim = r.array_at("/basis");
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string p = "/basis/" + std::to_string(i);
    r.expect_object(p, {"name", "degree"}, {"name", "degree"});
    basis.push_back({r.string_at(p + "/name"), static_cast<int>(r.integer_at(p + "/degree"))});
  }
  SpacePtr space;
  try {
    space = make_space(std::move(basis));
  } catch (const Error& e) {
    r.fail("/basis", e.what());
  }
  auto index_of = [&](const std::string& pointer) {
    const std::string name = r.string_at(pointer);
    const auto i = space->find(name);
    if (!i) r.fail(pointer, "unknown basis element '" + name + "'");
    return *i;
  };

  std::map<int, MultiMap> maps;
  const std::size_t nmaps = r.array_at("/maps");
  for (std::size_t m = 0; m < nmaps; ++m) {
    const std::string p = "/maps/" + std::to_string(m);
    r.expect_object(p, {"arity", "entries"}, {"arity", "entries"});
    const long arity = r.integer_at(p + "/arity");
    if (arity < 0 || arity > 64) r.fail(p + "/arity", "arity must lie in [0, 64]");
    const int k = static_cast<int>(arity);
    if (maps.count(k)) r.fail(p + "/arity", "arity " + std::to_string(k) + " is given twice");
    MultiMap f(space, k, 2 - k);
    std::set<Inputs> seen;
    const std::size_t nentries = r.array_at(p + "/entries");
    for (std::size_t e = 0; e < nentries; ++e) {
      const std::string q = p + "/entries/" + std::to_string(e);
      r.expect_object(q, {"inputs", "output"}, {"inputs", "output"});
      Inputs inputs;
      const std::size_t n = r.array_at(q + "/inputs");
      if (static_cast<int>(n) != k) r.fail(q + "/inputs", "expected " + std::to_string(k) + " inputs");
      for (std::size_t j = 0; j < n; ++j) inputs.push_back(index_of(q + "/inputs/" + std::to_string(j)));
      if (!seen.insert(inputs).second) r.fail(q + "/inputs", "input tuple listed twice");
      SparseVector out;
      const std::size_t nout = r.array_at(q + "/output");
      for (std::size_t j = 0; j < nout; ++j) {
        const std::string o = q + "/output/" + std::to_string(j);
        if (r.array_at(o) != 2) r.fail(o, "output terms are [name, \"p/q\"] pairs");
        const std::size_t idx = index_of(o + "/0");
        if (out.count(idx)) r.fail(o, "output term listed twice");
        out[idx] = r.rational_at(o + "/1");
      }
      try {
        f.set(inputs, out);
      } catch (const Error& err) {
        r.fail(q + "/output", err.what());
      }
    }
    maps.emplace(k, std::move(f));
  }

  int kmax = maps.empty() ? 1 : std::max(1, maps.rbegin()->first);
  if (doc.contains("kmax")) {
    const long declared = r.integer_at("/kmax");
    if (declared < 1 || declared > 64) r.fail("/kmax", "kmax must lie in [1, 64]");
    if (declared < kmax) r.fail("/kmax", "kmax is below the largest map arity " + std::to_string(kmax));
    kmax = static_cast<int>(declared);
  }

  AlgebraFile file;
  std::vector<MultiMap> list;
  for (auto& [k, f] : maps) list.push_back(std::move(f));
  try {
    file.structure =
        std::make_shared<const AInftyStructure>(space, convention, kmax, std::move(list), Validation::Deferred);
  } catch (const Error& e) {
    r.fail("/maps", e.what());
  }
  if (doc.contains("unit")) {
    file.unit = r.string_at("/unit");
    index_of("/unit");
  }
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) r.fail("/metadata", "metadata must be an object");
    file.metadata = doc["metadata"];
  }
  return file;
}

AlgebraFile load_algebra(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_algebra(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.what(), 0, 0);
  }
}

std::string emit_algebra(const AlgebraFile& file) {
  const auto& a = *file.structure;
  const auto& space = *a.space();
  std::ostringstream os;
  os << "{\n";
  os << "  \"field\": \"rational\",\n";
  os << "  \"convention\": " << json(to_string(a.convention())).dump() << ",\n";
  os << "  \"kmax\": " << a.kmax() << ",\n";
  os << "  \"basis\": [";
  for (std::size_t i = 0; i < space.dim(); ++i) {
    os << (i ? ",\n" : "\n") << "    {\"name\": " << json(space[i].name).dump() << ", \"degree\": " << space[i].degree
       << "}";
  }
  os << "\n  ],\n";
  os << "  \"maps\": [";
  bool first_map = true;
  for (const auto& [k, f] : a.ops()) {
    if (f.is_zero()) continue;
    os << (first_map ? "\n" : ",\n") << "    {\"arity\": " << k << ", \"entries\": [";
    first_map = false;
    bool first_entry = true;
    for (const auto& [inputs, vec] : f.table()) {
      json in = json::array();
      for (auto i : inputs) in.push_back(space[i].name);
      json out = json::array();
      for (const auto& [j, v] : vec) out.push_back({space[j].name, v.to_string()});
      os << (first_entry ? "\n" : ",\n") << "      {\"inputs\": " << in.dump() << ", \"output\": " << out.dump()
         << "}";
      first_entry = false;
    }
    os << "\n    ]}";
  }
  os << (first_map ? "]" : "\n  ]");
  if (file.unit) os << ",\n  \"unit\": " << json(*file.unit).dump();
  if (!file.metadata.is_null()) os << ",\n  \"metadata\": " << file.metadata.dump();
  os << "\n}\n";
  return os.str();
}

void save_algebra(const AlgebraFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'", 0, 0);
  out << emit_algebra(file);
}

}  // namespace ainf::cli
