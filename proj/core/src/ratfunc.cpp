#include "ainf/ratfunc.hpp"

#include <cmath>
#include <sstream>

#include "ainf/error.hpp"

namespace ainf {

Polynomial::Polynomial(Scalar c) {
  if (!c.is_zero()) c_.push_back(std::move(c));
}

Polynomial::Polynomial(std::vector<Scalar> coefficients) : c_(std::move(coefficients)) { trim(); }

Polynomial Polynomial::t() { return Polynomial({Scalar(0), Scalar(1)}); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Polynomial::coefficient(int i) const {
  return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Scalar(0);
}

Scalar Polynomial::operator()(const Scalar& t) const {
  Scalar acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + it->to_double();
  return acc;
}

Polynomial Polynomial::derivative() const {
  std::vector<Scalar> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(Scalar(static_cast<long>(i)) * c_[i]);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::integral() const {
  std::vector<Scalar> d{Scalar(0)};
  for (std::size_t i = 0; i < c_.size(); ++i) d.push_back(c_[i] / Scalar(static_cast<long>(i + 1)));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial out(Scalar(1));
  for (unsigned i = 0; i < n; ++i) out *= *this;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  if (c_.empty() || o.c_.empty()) {
    c_.clear();
    return *this;
  }
  std::vector<Scalar> p(c_.size() + o.c_.size() - 1);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; j < o.c_.size(); ++j) p[i + j] += c_[i] * o.c_[j];
  }
  c_ = std::move(p);
  trim();
  return *this;
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Scalar> quotient(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0);
  std::vector<Scalar> rem = a.c_;
  const Scalar lead = b.leading();
  for (int i = static_cast<int>(rem.size()) - 1; i >= b.degree(); --i) {
    const Scalar factor = rem[static_cast<std::size_t>(i)] / lead;
    if (factor.is_zero()) continue;
    const int shift = i - b.degree();
    quotient[static_cast<std::size_t>(shift)] = factor;
    for (std::size_t j = 0; j < b.c_.size(); ++j) rem[static_cast<std::size_t>(shift) + j] -= factor * b.c_[j];
  }
  q = Polynomial(std::move(quotient));
  r = Polynomial(std::move(rem));
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * Polynomial(a.leading().inverse());
}

namespace {

int sign_changes(const std::vector<Polynomial>& seq, const Scalar& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    const Scalar v = p(x);
    const int s = v.is_zero() ? 0 : (v > Scalar(0) ? 1 : -1);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
  std::vector<Polynomial> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    Polynomial q, r;
    Polynomial::divmod(seq[seq.size() - 2], seq.back(), q, r);
    if (r.is_zero()) break;
    seq.push_back(-r);
  }
  return seq;
}

}  // namespace

int Polynomial::count_roots(const Scalar& lo, const Scalar& hi) const {
  if (is_zero()) throw DomainError("the zero polynomial has infinitely many roots");
  if (hi < lo || degree() == 0) return 0;
  // Square-free part: same distinct roots.
  Polynomial q, r;
  divmod(*this, gcd(*this, derivative()), q, r);
  int count = 0;
  if (q(lo).is_zero()) {
    ++count;
    Polynomial reduced;
    divmod(q, Polynomial({-lo, Scalar(1)}), reduced, r);
    q = reduced;
    if (q.degree() <= 0) return count;
  }
  const auto seq = sturm_sequence(q);
  return count + sign_changes(seq, lo) - sign_changes(seq, hi);
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].to_string();
    if (i >= 1) os << "*t";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

double Antiderivative::operator()(double t) const {
  double v = poly(t);
  if (has_log()) v += mu.to_double() * std::log1p(c.to_double() * t);
  return v;
}

ScalarFunction::ScalarFunction(Scalar c) : num_(std::move(c)), den_(Scalar(1)) {}

ScalarFunction::ScalarFunction(Polynomial num) : num_(std::move(num)), den_(Scalar(1)) {}

ScalarFunction::ScalarFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
  normalize();
}

ScalarFunction ScalarFunction::reciprocal_linear(const Scalar& mu, const Scalar& c) {
  return ScalarFunction(Polynomial(mu), Polynomial({Scalar(1), c}));
}

ScalarFunction ScalarFunction::linear_power(const Scalar& c, int n) {
  const Polynomial base({Scalar(1), c});
  const Polynomial p = base.pow(static_cast<unsigned>(n < 0 ? -n : n));
  return n >= 0 ? ScalarFunction(p) : ScalarFunction(Polynomial(Scalar(1)), p);
}

void ScalarFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(Scalar(1));
    return;
  }
  const Polynomial g = Polynomial::gcd(num_, den_);
  Polynomial r;
  if (g.degree() > 0) {
    Polynomial::divmod(Polynomial(num_), g, num_, r);
    Polynomial::divmod(Polynomial(den_), g, den_, r);
  }
  const Scalar lead = den_.leading();
  if (!(lead == Scalar(1))) {
    const Polynomial inv(lead.inverse());
    num_ *= inv;
    den_ *= inv;
  }
}

Scalar ScalarFunction::operator()(const Scalar& t) const {
  const Scalar d = den_(t);
  if (d.is_zero()) throw DivergenceError("rational function has a pole at t = " + t.to_string());
  return num_(t) / d;
}

double ScalarFunction::operator()(double t) const { return num_(t) / den_(t); }

ScalarFunction ScalarFunction::derivative() const {
  return ScalarFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

bool ScalarFunction::has_pole_in(const Scalar& lo, const Scalar& hi) const {
  return den_.degree() > 0 && den_.count_roots(lo, hi) > 0;
}

Antiderivative ScalarFunction::antiderivative() const {
  Antiderivative a;
  if (den_.degree() == 0) {
    a.poly = num_.integral();
    return a;
  }
  if (den_.degree() > 1) {
    throw FamilyError("no closed-form antiderivative for " + to_string() +
                      ": denominators beyond degree 1 are outside the supported family");
  }
  // den = t + r (monic). Write num = q den + s, s constant.
  const Scalar r0 = den_.coefficient(0);
  if (r0.is_zero()) throw DivergenceError("antiderivative from 0 diverges: pole at t = 0 in " + to_string());
  Polynomial q, s;
  Polynomial::divmod(num_, den_, q, s);
  a.poly = q.integral();
  // s/(t + r0) = (s/r0)/(1 + t/r0); its antiderivative is s ln(1 + t/r0).
  a.mu = s.coefficient(0);
  a.c = r0.inverse();
  return a;
}

ScalarFunction& ScalarFunction::operator+=(const ScalarFunction& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

ScalarFunction& ScalarFunction::operator-=(const ScalarFunction& o) {
  num_ = num_ * o.den_ - o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

ScalarFunction& ScalarFunction::operator*=(const ScalarFunction& o) {
  num_ *= o.num_;
  den_ *= o.den_;
  normalize();
  return *this;
}

ScalarFunction& ScalarFunction::operator/=(const ScalarFunction& o) {
  if (o.is_zero()) throw DomainError("division by the zero function");
  num_ *= o.den_;
  den_ *= o.num_;
  normalize();
  return *this;
}

std::string ScalarFunction::to_string() const {
  if (is_polynomial()) return num_.to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

}  // namespace ainf
