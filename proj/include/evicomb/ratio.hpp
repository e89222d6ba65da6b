#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace evicomb {

using bigint = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

/// Exact non-negative rational number, always in lowest terms.
///
/// Masses, beliefs and probabilities all live in [0, 1] and are built from
/// row counts, so the value type refuses to go negative. Signed work (the
/// simplex tableau) uses `rational` directly.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::uint64_t n) : value_(n) {}  // NOLINT: integers convert implicitly
  Ratio(const bigint& num, const bigint& den) {
    if (den <= 0) throw std::invalid_argument("Ratio: denominator must be positive");
    if (num < 0) throw std::invalid_argument("Ratio: numerator must be non-negative");
    value_ = rational(num, den);
  }
  explicit Ratio(const rational& r) : value_(r) {
    if (r < 0) throw std::invalid_argument("Ratio: value must be non-negative");
  }

  bigint numerator() const { return boost::multiprecision::numerator(value_); }
  bigint denominator() const { return boost::multiprecision::denominator(value_); }
  const rational& value() const { return value_; }

  bool is_zero() const { return value_ == 0; }
  bool is_one() const { return value_ == 1; }

  Ratio& operator+=(const Ratio& o) { value_ += o.value_; return *this; }
  Ratio& operator*=(const Ratio& o) { value_ *= o.value_; return *this; }
  Ratio& operator-=(const Ratio& o) {
    if (o.value_ > value_) throw std::domain_error("Ratio: subtraction would go negative");
    value_ -= o.value_;
    return *this;
  }
  Ratio& operator/=(const Ratio& o) {
    if (o.value_ == 0) throw std::domain_error("Ratio: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Ratio operator+(Ratio a, const Ratio& b) { return a += b; }
  friend Ratio operator-(Ratio a, const Ratio& b) { return a -= b; }
  friend Ratio operator*(Ratio a, const Ratio& b) { return a *= b; }
  friend Ratio operator/(Ratio a, const Ratio& b) { return a /= b; }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "n/d", or "n" when the denominator is 1.
  std::string str() const {
    if (denominator() == 1) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

 private:
  rational value_{0};
};

inline bigint gcd(bigint a, bigint b) {
  while (b != 0) {
    bigint t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline bigint lcm(const bigint& a, const bigint& b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

}  // namespace evicomb
