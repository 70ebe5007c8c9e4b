#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cake {

// Two scalars from different quadratic fields met in one expression, or a
// radicand is not a squarefree integer >= 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_squarefree(std::uint64_t d);

/**
 * An element rat + coef*sqrt(d) of the ordered field Q(sqrt d).
 *
 * Rationals carry radicand 0 and mix freely with any field; two irrational
 * operands must agree on d. Canonical form is unique, so equality is
 * componentwise.
 */
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(mpq_class rat);
  Scalar(mpq_class rat, mpq_class coef, std::uint64_t radicand);

  static Scalar frac(long num, long den);
  static Scalar sqrt_of(std::uint64_t d);
  // (-1 + sqrt 5) / 2
  static Scalar golden();

  const mpq_class& rat() const { return rat_; }
  const mpq_class& coef() const { return coef_; }
  std::uint64_t radicand() const { return d_; }
  bool is_rational() const { return d_ == 0; }
  bool is_zero() const { return d_ == 0 && sgn(rat_) == 0; }

  int sign() const;
  Scalar inverse() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  // Largest integer not above the value.
  mpz_class floor() const;
  mpz_class ceil() const;
  double to_double() const;

  // "p/q" for rationals, "p/q+r/s√d" otherwise.
  std::string str() const;
  static Scalar parse(std::string_view text);

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  void normalize();
  static std::uint64_t join(const Scalar& a, const Scalar& b);

  mpq_class rat_{0};
  mpq_class coef_{0};
  std::uint64_t d_ = 0;
};

enum class Ordering { less, equal, greater };

Ordering compare(const Scalar& a, const Scalar& b);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

}  // namespace cake
