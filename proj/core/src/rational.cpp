#include "ultra/rational.hpp"

#include <cctype>

namespace ultra {

Rational make_rational(Int num, Int den) {
  if (den == 0) throw ParseError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

namespace {

Int parse_int(std::string_view s) {
  if (s.empty()) throw ParseError("empty integer");
  std::size_t i = 0;
  if (s[0] == '-') i = 1;
  if (i == s.size()) throw ParseError("bare sign is not an integer");
  for (std::size_t k = i; k < s.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k])))
      throw ParseError("bad integer: " + std::string(s));
  return Int(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator: " + std::string(text));
  return make_rational(num, den);
}

Rational calkin_wilf(std::uint64_t index) {
  std::uint64_t pos = index + 1;  // 1-based heap position in the tree
  int bits = 63;
  while (bits > 0 && !((pos >> bits) & 1)) --bits;
  Int num = 1, den = 1;
  for (int b = bits - 1; b >= 0; --b) {
    if ((pos >> b) & 1)
      num += den;  // right child (a+b)/b
    else
      den += num;  // left child a/(a+b)
  }
  return make_rational(num, den);
}

std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

}  // namespace ultra
