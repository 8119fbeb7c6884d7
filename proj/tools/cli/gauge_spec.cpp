#include "gauge_spec.hpp"

#include <cctype>

#include "ainf/error.hpp"

namespace ainf::cli {

namespace {

class Cursor {
 public:
  explicit Cursor(const std::string& text) : s_(text) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip();
    return i_ == s_.size();
  }
  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string word() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
    return s_.substr(start, i_ - start);
  }
  Scalar rational() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '/' || s_[i_] == '-'))
      ++i_;
    if (start == i_) fail("expected a rational");
    return Scalar::parse(s_.substr(start, i_ - start));
  }
  std::vector<Scalar> args() {
    expect('(');
    std::vector<Scalar> out{rational()};
    while (accept(',')) out.push_back(rational());
    expect(')');
    return out;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("gauge column " + std::to_string(i_ + 1) + ": " + what);
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

Gauge parse_gauge(const std::string& text, const Path& path) {
  const SpacePtr& space = path.base()->space();
  Cursor c(text);
  if (text == "auto") return auto_gauge(path);
  std::vector<TimeTerm> terms;
  do {
    const std::string kind = c.word();
    const auto a = c.args();
    ScalarFunction phi;
    if (kind == "const" && a.size() == 1) {
      phi = ScalarFunction(a[0]);
    } else if (kind == "recip" && a.size() == 2) {
      phi = ScalarFunction::reciprocal_linear(a[0], a[1]);
    } else if (kind == "poly") {
      phi = ScalarFunction(Polynomial(a));
    } else {
      c.fail("unknown coefficient '" + kind + "' with " + std::to_string(a.size()) + " argument(s)");
    }
    c.expect('*');
    if (c.word() != "lin") c.fail("expected lin(p,q)");
    const auto pq = c.args();
    if (pq.size() != 2) c.fail("lin takes two arguments");
    terms.push_back({phi, pq[0] * MultiMap::identity(space) + pq[1] * MultiMap::euler(space)});
  } while (c.accept('+'));
  if (!c.done()) c.fail("trailing text");
  return Gauge(space, std::move(terms));
}

}  // namespace ainf::cli
