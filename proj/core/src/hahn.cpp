#include "ultra/hahn.hpp"

#include <utility>

#include "ultra/error.hpp"

namespace ultra {
namespace {

bool is_small_prime(std::uint64_t p) {
  if (p < 2 || p > 1000) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t out = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) out = out * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return out;
}

// canonical residue 0..p-1 of an arbitrary integer
std::uint64_t residue(const Int& n, std::uint64_t p) {
  Int r = n % Int(p);
  if (r < 0) r += Int(p);
  return r.convert_to<std::uint64_t>();
}

void require_same_field(const Field& a, const Field& b) {
  if (!(a == b))
    throw Error("field-mismatch", "cannot combine coefficients over " + to_string(Field{a.p}) +
                                      " and " + to_string(Field{b.p}));
}

void drop_zeros(HahnPoly& a) {
  for (auto it = a.coeffs.begin(); it != a.coeffs.end();)
    it = (it->second == 0) ? a.coeffs.erase(it) : std::next(it);
}

}  // namespace

Field Field::mod(std::uint64_t p) {
  if (!is_small_prime(p))
    throw Error("bad-field", "the modulus must be a small prime, got " + std::to_string(p));
  return Field{p};
}

std::string to_string(const Field& k) {
  return k.p == 0 ? std::string("Q") : "Fp:" + std::to_string(k.p);
}

Rational f_normalize(const Field& k, const Rational& value) {
  if (k.p == 0) return value;
  std::uint64_t den = residue(denominator(value), k.p);
  if (den == 0)
    throw Error("bad-coefficient", "the denominator of " + to_string(value) +
                                       " vanishes modulo " + std::to_string(k.p));
  std::uint64_t num = residue(numerator(value), k.p);
  std::uint64_t inv = mod_pow(den, k.p - 2, k.p);
  return Rational(Int(num * inv % k.p));
}

Rational f_add(const Field& k, const Rational& a, const Rational& b) {
  return f_normalize(k, a + b);
}

Rational f_neg(const Field& k, const Rational& a) { return f_normalize(k, -a); }

Rational f_mul(const Field& k, const Rational& a, const Rational& b) {
  return f_normalize(k, a * b);
}

Rational f_inv(const Field& k, const Rational& a) {
  Rational canon = f_normalize(k, a);
  if (canon == 0) throw Error("division-by-zero", "zero has no multiplicative inverse");
  if (k.p == 0) return 1 / canon;
  std::uint64_t r = residue(numerator(canon), k.p);
  return Rational(Int(mod_pow(r, k.p - 2, k.p)));
}

HahnPoly h_zero(const Field& k) { return HahnPoly{k, {}}; }

HahnPoly h_const(const Field& k, const Rational& c) {
  return h_monomial(k, c, Rational(0));
}

HahnPoly h_monomial(const Field& k, const Rational& coeff, const Rational& exponent) {
  HahnPoly a{k, {}};
  Rational canon = f_normalize(k, coeff);
  if (canon != 0) a.coeffs[exponent] = canon;
  return a;
}

HahnPoly hahn_from_pairs(const Field& k,
                         const std::vector<std::pair<Rational, Rational>>& pairs) {
  HahnPoly a{k, {}};
  for (const auto& [exponent, coeff] : pairs) {
    Rational canon = f_normalize(k, coeff);
    if (canon == 0)
      throw Error("invalid-hahn", "coefficient at exponent " + to_string(exponent) +
                                      " normalizes to zero");
    if (!a.coeffs.emplace(exponent, canon).second)
      throw Error("invalid-hahn", "exponent " + to_string(exponent) + " is repeated");
  }
  return a;
}

std::optional<std::string> validate_hahn(const HahnPoly& a) {
  if (a.field.p != 0 && !is_small_prime(a.field.p))
    return "the field modulus " + std::to_string(a.field.p) + " is not a small prime";
  for (const auto& [exponent, coeff] : a.coeffs) {
    if (coeff == 0) return "a zero coefficient is stored at exponent " + to_string(exponent);
    if (!(f_normalize(a.field, coeff) == coeff))
      return "the coefficient " + to_string(coeff) + " at exponent " + to_string(exponent) +
             " is not in canonical form";
  }
  return std::nullopt;
}

bool h_is_zero(const HahnPoly& a) { return a.coeffs.empty(); }

HahnPoly h_add(const HahnPoly& a, const HahnPoly& b) {
  require_same_field(a.field, b.field);
  HahnPoly out = a;
  for (const auto& [exponent, coeff] : b.coeffs) {
    auto [it, fresh] = out.coeffs.emplace(exponent, coeff);
    if (!fresh) it->second = f_add(a.field, it->second, coeff);
  }
  drop_zeros(out);
  return out;
}

HahnPoly h_neg(const HahnPoly& a) {
  HahnPoly out = a;
  for (auto& [exponent, coeff] : out.coeffs) coeff = f_neg(a.field, coeff);
  return out;
}

HahnPoly h_sub(const HahnPoly& a, const HahnPoly& b) { return h_add(a, h_neg(b)); }

HahnPoly h_mul(const HahnPoly& a, const HahnPoly& b) {
  require_same_field(a.field, b.field);
  HahnPoly out{a.field, {}};
  for (const auto& [qa, ca] : a.coeffs)
    for (const auto& [qb, cb] : b.coeffs) {
      Rational exponent = qa + qb;
      Rational product = f_mul(a.field, ca, cb);
      auto [it, fresh] = out.coeffs.emplace(exponent, product);
      if (!fresh) it->second = f_add(a.field, it->second, product);
    }
  drop_zeros(out);
  return out;
}

std::string to_string(const ValCode& v) {
  return v.is_infinite() ? std::string("inf") : to_string(*v.finite);
}

ValCode valuation(const HahnPoly& a) {
  if (a.coeffs.empty()) return ValCode::infinity();
  return ValCode::of(a.coeffs.begin()->first);
}

HahnPoly invert_truncated(const HahnPoly& a, const Rational& precision) {
  if (h_is_zero(a)) throw Error("zero-inverse", "zero has no inverse");
  const Field& k = a.field;
  const Rational v = a.coeffs.begin()->first;
  const Rational c = a.coeffs.begin()->second;
  HahnPoly unit_inv = h_monomial(k, f_inv(k, c), -v);
  HahnPoly base = h_mul(a, unit_inv);  // 1 + u with v(u) > 0
  HahnPoly u = h_sub(base, h_const(k, Rational(1)));
  HahnPoly series = h_const(k, Rational(1));
  HahnPoly term = h_const(k, Rational(1));
  HahnPoly minus_u = h_neg(u);
  for (;;) {
    term = h_mul(term, minus_u);
    if (h_is_zero(term) || *valuation(term).finite > precision) break;
    series = h_add(series, term);
  }
  return h_mul(unit_inv, series);
}

HahnFrac frac_of(HahnPoly num, HahnPoly den) {
  require_same_field(num.field, den.field);
  if (h_is_zero(den)) throw Error("division-by-zero", "the denominator is zero");
  const Field k = den.field;
  const Rational v = den.coeffs.begin()->first;
  const Rational c = den.coeffs.begin()->second;
  HahnPoly factor = h_monomial(k, f_inv(k, c), -v);
  return HahnFrac{h_mul(std::move(num), factor), h_mul(std::move(den), factor)};
}

HahnFrac frac_poly(HahnPoly a) {
  Field k = a.field;
  return HahnFrac{std::move(a), h_const(k, Rational(1))};
}

std::optional<std::string> validate_frac(const HahnFrac& a) {
  if (!(a.num.field == a.den.field)) return "numerator and denominator fields differ";
  if (auto bad = validate_hahn(a.num)) return "numerator: " + *bad;
  if (auto bad = validate_hahn(a.den)) return "denominator: " + *bad;
  if (h_is_zero(a.den)) return "the denominator is zero";
  if (!(a.den.coeffs.begin()->first == 0)) return "the denominator valuation is not 0";
  if (!(a.den.coeffs.begin()->second == 1)) return "the denominator is not monic from below";
  return std::nullopt;
}

bool fr_is_zero(const HahnFrac& a) { return h_is_zero(a.num); }

HahnFrac fr_add(const HahnFrac& a, const HahnFrac& b) {
  return frac_of(h_add(h_mul(a.num, b.den), h_mul(b.num, a.den)), h_mul(a.den, b.den));
}

HahnFrac fr_neg(const HahnFrac& a) { return HahnFrac{h_neg(a.num), a.den}; }

HahnFrac fr_sub(const HahnFrac& a, const HahnFrac& b) { return fr_add(a, fr_neg(b)); }

HahnFrac fr_mul(const HahnFrac& a, const HahnFrac& b) {
  return frac_of(h_mul(a.num, b.num), h_mul(a.den, b.den));
}

HahnFrac fr_inv(const HahnFrac& a) {
  if (h_is_zero(a.num)) throw Error("division-by-zero", "cannot invert the zero fraction");
  return frac_of(a.den, a.num);
}

bool fr_eq(const HahnFrac& a, const HahnFrac& b) {
  return h_is_zero(h_sub(h_mul(a.num, b.den), h_mul(b.num, a.den)));
}

ValCode frac_valuation(const HahnFrac& a) {
  ValCode top = valuation(a.num);
  if (top.is_infinite()) return top;
  return ValCode::of(*top.finite - *valuation(a.den).finite);
}

Rational distance_code(const ValCode& v) {
  if (v.is_infinite()) return Rational(0);
  const Rational& q = *v.finite;
  if (q >= 0) return 1 / (1 + q);
  return 1 - q;
}

ValCode distance_decode(const Rational& r) {
  if (r < 0) throw Error("bad-input", "a distance cannot be negative: " + to_string(r));
  if (r == 0) return ValCode::infinity();
  if (r <= 1) return ValCode::of(1 / r - 1);
  return ValCode::of(1 - r);
}

UltraSpace ultrametric_reduct(const std::vector<HahnFrac>& sample) {
  const std::size_t n = sample.size();
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational d = distance_code(frac_valuation(fr_sub(sample[i], sample[j])));
      if (d == 0)
        throw Error("duplicate-point", "sample entries " + std::to_string(i) + " and " +
                                           std::to_string(j) + " are equal");
      dist[i][j] = dist[j][i] = d;
    }
  return space_from_matrix(std::move(labels), std::move(dist));
}

VElem to_velem(const HahnPoly& a) {
  VElem f;
  for (const auto& [exponent, coeff] : a.coeffs)
    f.support[distance_code(ValCode::of(exponent))] = coeff;
  return f;
}

bool correspondence_check(const std::vector<HahnPoly>& sample) {
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      Rational expected = distance_code(valuation(h_sub(sample[i], sample[j])));
      if (!(v_distance(to_velem(sample[i]), to_velem(sample[j])) == expected)) return false;
    }
  return true;
}

}  // namespace ultra
