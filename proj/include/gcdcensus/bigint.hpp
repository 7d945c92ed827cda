#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "gcdcensus/errors.hpp"

namespace gcdcensus {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses a decimal string of digits only (no sign, no whitespace).
inline BigInt parse_decimal(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer literal");
  BigInt out = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("invalid digit in integer literal \"" + std::string(text) + "\"");
    out = out * 10 + (c - '0');
  }
  return out;
}

inline std::string to_string(const BigInt& n) { return n.str(); }

/// "p/q" or "n" for integral values.
inline std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Correctly rounded enough for reporting; goes through a 50-digit float.
inline double to_double(const Rational& r) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  Float num(boost::multiprecision::numerator(r));
  Float den(boost::multiprecision::denominator(r));
  return static_cast<double>(num / den);
}

/// r^e for rationals; Boost provides pow only for integers and floats.
inline Rational pow(const Rational& r, unsigned e) {
  return Rational(boost::multiprecision::pow(boost::multiprecision::numerator(r), e),
                  boost::multiprecision::pow(boost::multiprecision::denominator(r), e));
}

inline bool fits_u64(const BigInt& n) { return n >= 0 && n <= BigInt(UINT64_MAX); }

/// Number of bits in |n|; 0 for n == 0.
inline unsigned bit_length(const BigInt& n) {
  return n == 0 ? 0U : static_cast<unsigned>(boost::multiprecision::msb(abs(n))) + 1U;
}

}  // namespace gcdcensus
