#include "ainf/scalar.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "ainf/error.hpp"

namespace ainf {

namespace {

bool valid_integer_text(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) return false;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  return true;
}

mpz_class integer_from(std::string_view text) {
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return mpz_class(digits, 10);
}

}  // namespace

Scalar::Scalar(long numerator, long denominator) {
  if (denominator == 0) throw DomainError("rational with zero denominator");
  value_ = mpq_class(numerator, 1) / mpq_class(denominator, 1);
  value_.canonicalize();
}

Scalar::Scalar(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Scalar Scalar::parse(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!valid_integer_text(num_text)) {
    throw DomainError("malformed rational '" + std::string(text) + "'");
  }
  if (slash == std::string_view::npos) return Scalar(mpq_class(integer_from(num_text)));
  const auto den_text = text.substr(slash + 1);
  if (!valid_integer_text(den_text)) {
    throw DomainError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class den = integer_from(den_text);
  if (den == 0) throw DomainError("rational with zero denominator '" + std::string(text) + "'");
  mpq_class q(integer_from(num_text), den);
  q.canonicalize();
  return Scalar(std::move(q));
}

bool Scalar::is_integer() const { return value_.get_den() == 1; }

std::string Scalar::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Scalar Scalar::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Scalar(mpq_class(num, den));
}

Scalar Scalar::abs() const { return Scalar(mpq_class(::abs(value_))); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return Scalar(mpq_class(1 / value_));
}

Scalar& Scalar::operator+=(const Scalar& other) {
  value_ += other.value_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  value_ -= other.value_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  value_ *= other.value_;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  if (other.is_zero()) throw DomainError("division by zero");
  value_ /= other.value_;
  return *this;
}

Scalar Scalar::operator-() const { return Scalar(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

Scalar rationalize(double value, std::int64_t max_denominator) {
  if (!std::isfinite(value)) throw DomainError("cannot rationalize a non-finite value");
  // Convergents h1/k1 of the continued fraction expansion of value.
  mpz_class h2 = 0, h1 = 1;
  mpz_class k2 = 1, k1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_floor = std::floor(x);
    const mpz_class a(a_floor);
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    if (k > max_denominator) {
      // Best semiconvergent, if it beats the last convergent.
      const mpz_class t = (mpz_class(max_denominator) - k2) / k1;
      if (t > 0) {
        const mpq_class semi(t * h1 + h2, t * k1 + k2);
        const mpq_class conv(h1, k1);
        const mpq_class target(value);
        if (abs(semi - target) < abs(conv - target)) return Scalar(semi);
      }
      break;
    }
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    const double frac = x - a_floor;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return Scalar(mpq_class(h1, k1));
}

}  // namespace ainf
