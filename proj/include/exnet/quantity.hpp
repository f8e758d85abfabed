#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "exnet/error.hpp"
#include "exnet/rational.hpp"

namespace exnet {

// An exact, nonnegative amount of the traded good.
class Quantity {
 public:
  Quantity() = default;

  explicit Quantity(const Rational& value) : value_(value) {
    if (value_ < 0) throw ContractViolation("quantity must be nonnegative, got " + format_pq(value_));
  }
  explicit Quantity(long long value) : Quantity(Rational(value)) {}
  Quantity(long long num, long long den) : Quantity(make_rational(num, den)) {}

  static Quantity parse(std::string_view text) {
    Rational r = parse_rational(text);
    if (r < 0) throw ParseError("negative quantity '" + std::string(text) + "'");
    return Quantity(r);
  }

  const Rational& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  bool is_positive() const { return value_ > 0; }

  // Canonical text: "5" or "3/2".
  std::string str() const { return format_compact(value_); }
  // Always "p/q".
  std::string pq() const { return format_pq(value_); }

  Quantity& operator+=(const Quantity& o) {
    value_ += o.value_;
    return *this;
  }
  friend Quantity operator+(Quantity a, const Quantity& b) { return a += b; }

  // Exact difference; throws if it would go negative.
  friend Quantity operator-(const Quantity& a, const Quantity& b) { return Quantity(Rational(a.value_ - b.value_)); }

  // max(0, a - b)
  friend Quantity monus(const Quantity& a, const Quantity& b) {
    if (a.value_ <= b.value_) return Quantity();
    return Quantity(Rational(a.value_ - b.value_));
  }

  friend bool operator==(const Quantity& a, const Quantity& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Quantity& a, const Quantity& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

inline const Quantity& min(const Quantity& a, const Quantity& b) { return b < a ? b : a; }

}  // namespace exnet
