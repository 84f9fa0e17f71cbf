// Exact rational arithmetic used throughout: arbitrary precision, always in
// lowest terms with positive denominator. No floating point anywhere.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ultra {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Builds p/q in canonical form; q may be negative here, unlike the backend ctor.
Rational make_rational(Int num, Int den);

// Accepts "n" or "p/q" with optional leading '-'; rejects everything else.
Rational parse_rational(std::string_view text);

// "n" when the denominator is 1, else "p/q"; lowest terms either way.
std::string to_string(const Rational& r);

inline Rational rat(long long n, long long d = 1) { return make_rational(Int(n), Int(d)); }

// Canonical enumeration of the positive rationals without repeats:
// 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ... (breadth-first Calkin-Wilf order).
Rational calkin_wilf(std::uint64_t index);

}  // namespace ultra
