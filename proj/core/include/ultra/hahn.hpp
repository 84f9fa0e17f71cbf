// Exact arithmetic for finite-support generalized power series over a
// coefficient field (the rationals or a small prime field), with valuation,
// truncated inversion, field-of-fractions arithmetic, and the order-reversing
// bridge that turns valuations into ultrametric distances and series into
// finite-support distance functions.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/rational.hpp"
#include "ultra/rep.hpp"
#include "ultra/space.hpp"

namespace ultra {

// The coefficient field: the rationals (p = 0) or integers modulo a prime.
struct Field {
  std::uint64_t p = 0;

  static Field rationals() { return Field{0}; }
  static Field mod(std::uint64_t p);  // Error "bad-field" unless p is a small prime
  bool operator==(const Field&) const = default;
};

std::string to_string(const Field& k);  // "Q" or "Fp:<p>"

// Coefficient arithmetic. Values are canonical per field: arbitrary rationals
// for Q; integers 0..p-1 (as Rationals) for a prime field. f_normalize maps a
// rational with denominator prime to p into its canonical residue and throws
// Error "bad-coefficient" otherwise.
Rational f_normalize(const Field& k, const Rational& value);
Rational f_add(const Field& k, const Rational& a, const Rational& b);
Rational f_neg(const Field& k, const Rational& a);
Rational f_mul(const Field& k, const Rational& a, const Rational& b);
Rational f_inv(const Field& k, const Rational& a);  // Error "division-by-zero" on 0

// A finite-support series: exponent -> nonzero canonical coefficient.
struct HahnPoly {
  Field field;
  std::map<Rational, Rational> coeffs;

  bool operator==(const HahnPoly&) const = default;
};

HahnPoly h_zero(const Field& k);
HahnPoly h_const(const Field& k, const Rational& c);
HahnPoly h_monomial(const Field& k, const Rational& coeff, const Rational& exponent);
// Collects exponent/coefficient pairs; repeated exponents or coefficients
// normalizing to zero throw Error "invalid-hahn".
HahnPoly hahn_from_pairs(const Field& k,
                         const std::vector<std::pair<Rational, Rational>>& pairs);
std::optional<std::string> validate_hahn(const HahnPoly& a);

bool h_is_zero(const HahnPoly& a);
// Ring operations; mixing fields throws Error "field-mismatch".
HahnPoly h_add(const HahnPoly& a, const HahnPoly& b);
HahnPoly h_neg(const HahnPoly& a);
HahnPoly h_sub(const HahnPoly& a, const HahnPoly& b);
HahnPoly h_mul(const HahnPoly& a, const HahnPoly& b);

// A valuation value: a rational, or infinity exactly for the zero element.
struct ValCode {
  std::optional<Rational> finite;

  static ValCode infinity() { return ValCode{std::nullopt}; }
  static ValCode of(Rational q) { return ValCode{std::move(q)}; }
  bool is_infinite() const { return !finite.has_value(); }
  bool operator==(const ValCode&) const = default;
};

std::string to_string(const ValCode& v);  // "inf" or the rational

// The least exponent of the support; infinity for zero.
ValCode valuation(const HahnPoly& a);

// A series b with v(a*b - 1) strictly above the requested precision, computed
// by factoring a = c * t^v * (1 + u) with v(u) > 0 and summing the truncated
// alternating series in u. Throws Error "zero-inverse" when a = 0.
HahnPoly invert_truncated(const HahnPoly& a, const Rational& precision);

// A fraction of finite-support series, normalized so the denominator has
// valuation 0 and lowest coefficient 1. Structural equality is not value
// equality: use fr_eq for the field's equality.
struct HahnFrac {
  HahnPoly num;
  HahnPoly den;

  bool operator==(const HahnFrac&) const = default;
};

// Normalizes num/den; throws Error "division-by-zero" when den = 0.
HahnFrac frac_of(HahnPoly num, HahnPoly den);
HahnFrac frac_poly(HahnPoly a);  // a / 1
std::optional<std::string> validate_frac(const HahnFrac& a);

bool fr_is_zero(const HahnFrac& a);
HahnFrac fr_add(const HahnFrac& a, const HahnFrac& b);
HahnFrac fr_neg(const HahnFrac& a);
HahnFrac fr_sub(const HahnFrac& a, const HahnFrac& b);
HahnFrac fr_mul(const HahnFrac& a, const HahnFrac& b);
HahnFrac fr_inv(const HahnFrac& a);  // Error "division-by-zero" on 0
bool fr_eq(const HahnFrac& a, const HahnFrac& b);  // by cross-multiplication

// v(num) - v(den); infinity exactly for the zero fraction.
ValCode frac_valuation(const HahnFrac& a);

// The fixed strictly decreasing bijection from valuation values onto the
// nonnegative rationals: infinity -> 0, q >= 0 -> 1/(1+q), q < 0 -> 1 - q.
Rational distance_code(const ValCode& v);
// Its inverse; throws Error "bad-input" on negative input.
ValCode distance_decode(const Rational& r);

// The finite ultrametric space of a sample: d(a_i, a_j) encodes the valuation
// of the difference. Points are labeled a0, a1, ... in input order. Value
// duplicates throw Error "duplicate-point"; mixed fields "field-mismatch".
UltraSpace ultrametric_reduct(const std::vector<HahnFrac>& sample);

// The finite-support distance function of a series: exponent keys are recoded
// (order-reversingly) by distance_code, coefficients become the values. For
// series of a common field this is an isometry: largest differing key equals
// the recoded valuation of the difference.
VElem to_velem(const HahnPoly& a);

// Confirms the isometry on a finite sample: for every pair, the distance of
// the recoded elements equals the recoded valuation of the difference.
bool correspondence_check(const std::vector<HahnPoly>& sample);

}  // namespace ultra
