#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "exnet/error.hpp"

namespace exnet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

// p/q reduced, for any nonzero q. The backend constructor rejects q < 0.
inline Rational make_rational(BigInt p, BigInt q) {
  if (q == 0) throw ContractViolation("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(p, q);
}

// Parses "[-]n" or "[-]p/q" with decimal digits only. The result is reduced.
inline Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den))
    throw ParseError("invalid rational '" + std::string(text) + "': expected integer or p/q");
  BigInt n{std::string(num)};
  BigInt d{std::string(den)};
  if (d == 0) throw ParseError("invalid rational '" + std::string(text) + "': zero denominator");
  Rational r(n, d);
  return negative ? Rational(-r) : r;
}

// Always "p/q" with q > 0 and gcd(p, q) = 1, e.g. "0/1", "3/2", "-5/1".
inline std::string format_pq(const Rational& r) {
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

// "n" for integers, "p/q" otherwise.
inline std::string format_compact(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return format_pq(r);
}

inline bool is_integer(const Rational& r) { return denominator_of(r) == 1; }

}  // namespace exnet
