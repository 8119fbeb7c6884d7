#pragma once

#include <string>
#include <vector>

#include "ainf/scalar.hpp"

namespace ainf {

/// Polynomial in t with rational coefficients, lowest degree first. The
/// representation is trimmed: no trailing zeros, zero is the empty vector.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Scalar c);  // NOLINT(google-explicit-constructor)
  explicit Polynomial(std::vector<Scalar> coefficients);
  static Polynomial t();

  const std::vector<Scalar>& coefficients() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Scalar coefficient(int i) const;
  Scalar leading() const { return c_.empty() ? Scalar(0) : c_.back(); }

  Scalar operator()(const Scalar& t) const;
  double operator()(double t) const;

  Polynomial derivative() const;
  /// Antiderivative vanishing at 0.
  Polynomial integral() const;
  Polynomial pow(unsigned n) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Polynomial(Scalar(-1)); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; throws DomainError on division by zero.
  static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& q, Polynomial& r);
  /// Monic gcd (zero when both are zero).
  static Polynomial gcd(Polynomial a, Polynomial b);

  /// Number of distinct real roots in the closed interval [lo, hi].
  int count_roots(const Scalar& lo, const Scalar& hi) const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<Scalar> c_;
};

/// Closed form of ∫_0^t φ: poly(t) + mu · ln(1 + c t).
struct Antiderivative {
  Polynomial poly;
  Scalar mu;
  Scalar c;

  double operator()(double t) const;
  bool has_log() const { return !mu.is_zero() && !c.is_zero(); }
};

/// Rational function num/den of t in lowest terms, den monic.
class ScalarFunction {
 public:
  ScalarFunction() : ScalarFunction(Scalar(0)) {}
  ScalarFunction(Scalar c);  // NOLINT(google-explicit-constructor)
  ScalarFunction(Polynomial num);  // NOLINT(google-explicit-constructor)
  ScalarFunction(Polynomial num, Polynomial den);

  /// mu / (1 + c t).
  static ScalarFunction reciprocal_linear(const Scalar& mu, const Scalar& c);
  /// (1 + c t)^n for any integer n.
  static ScalarFunction linear_power(const Scalar& c, int n);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  Scalar operator()(const Scalar& t) const;
  double operator()(double t) const;

  ScalarFunction derivative() const;
  /// True when the denominator vanishes somewhere in [lo, hi].
  bool has_pole_in(const Scalar& lo, const Scalar& hi) const;
  /// Closed-form antiderivative; FamilyError outside polynomial +
  /// mu/(1 + c t) (denominators of degree <= 1).
  Antiderivative antiderivative() const;

  ScalarFunction& operator+=(const ScalarFunction& o);
  ScalarFunction& operator-=(const ScalarFunction& o);
  ScalarFunction& operator*=(const ScalarFunction& o);
  ScalarFunction& operator/=(const ScalarFunction& o);
  friend ScalarFunction operator+(ScalarFunction a, const ScalarFunction& b) { return a += b; }
  friend ScalarFunction operator-(ScalarFunction a, const ScalarFunction& b) { return a -= b; }
  friend ScalarFunction operator*(ScalarFunction a, const ScalarFunction& b) { return a *= b; }
  friend ScalarFunction operator/(ScalarFunction a, const ScalarFunction& b) { return a /= b; }
  /// Exact identity of rational functions.
  friend bool operator==(const ScalarFunction& a, const ScalarFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string to_string() const;

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

}  // namespace ainf
