#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ultra/rational.hpp"
#include "ultra/space.hpp"

namespace ultra {

// A finitely supported function from positive rationals to rationals. Keys
// are the support; a missing key means value 0, and zero values are never
// stored. These elements form a universal homogeneous ultrametric space
// under v_distance, with pointwise addition acting by isometries.
struct VElem {
  std::map<Rational, Rational> support;

  // value at r, 0 when r is outside the support
  Rational at(const Rational& r) const;

  bool operator==(const VElem& other) const = default;
};

// Checks the support invariants: every key positive, every value nonzero.
std::optional<std::string> validate_velem(const VElem& f);

// Builds an element from key/value pairs; throws Error("invalid-velem") on a
// nonpositive key, a zero value, or a repeated key.
VElem velem_from_pairs(const std::vector<std::pair<Rational, Rational>>& pairs);

// The largest key where f and g differ, or 0 when f = g.
Rational v_distance(const VElem& f, const VElem& g);

// Pointwise sum with zero cleanup. Translation is an isometry:
// v_distance(f + a, g + a) = v_distance(f, g).
VElem v_add(const VElem& f, const VElem& g);

// Pointwise negation.
VElem v_neg(const VElem& f);

// The convex total order: compare values at r = v_distance(f, g); equal when
// r = 0. Convex with respect to v_distance.
std::strong_ordering v_compare_convex(const VElem& f, const VElem& g);

// Picks a new element realizing prescribed distances to a finite list of
// elements: returns w with v_distance(w, a[i]) = target[i] for every i.
// The targets must be positive and satisfy the two-largest-equal rule
// against the pairwise distances of a; otherwise Error("inconsistent-target")
// names a violating pair. The construction copies an element at minimal
// target above that minimum and places the least non-negative integer value
// distinct from all competitors at the minimum itself. An empty list yields
// the zero function.
VElem extension_witness(const std::vector<VElem>& a, const std::vector<Rational>& target);

// Isometric embedding of a whole space: image[i] realizes the distances of
// point i to all earlier points, built by iterating extension_witness in
// input order. The first point maps to the zero function.
std::vector<VElem> embed_space(const UltraSpace& x);

// An increasing piecewise-linear bijection of the non-negative rationals
// fixing 0. Segment i starts at breakpoints[i] with slope slopes[i]; the
// last segment extends to infinity. breakpoints.front() must be 0, the
// sequence strictly increasing, and every slope positive — this forces a
// continuous increasing bijection that maps rationals to rationals both
// ways.
struct PLAutomorphism {
  std::vector<Rational> breakpoints;
  std::vector<Rational> slopes;

  bool operator==(const PLAutomorphism& other) const = default;
};

// Structural check; nullopt when well-formed.
std::optional<std::string> validate_pl(const PLAutomorphism& h);

// The identity map: one segment of slope 1.
PLAutomorphism pl_identity();

// Canonical form: adjacent segments with equal slopes are merged. Two maps
// are equal as functions iff their normal forms are equal as data.
PLAutomorphism pl_normalize(const PLAutomorphism& h);

// Evaluates h at x >= 0; throws Error("bad-input") on negative x and
// Error("invalid-pl") on a malformed map.
Rational pl_apply(const PLAutomorphism& h, const Rational& x);

// The inverse bijection: breakpoint images become breakpoints, slopes become
// reciprocals.
PLAutomorphism pl_invert(const PLAutomorphism& h);

// The composite x -> then(first(x)), normalized.
PLAutomorphism pl_compose(const PLAutomorphism& first, const PLAutomorphism& then);

// Function equality via normal forms.
bool pl_equal(const PLAutomorphism& a, const PLAutomorphism& b);

// Transport of an element along h: every support key k moves to h(k), values
// unchanged. Satisfies v_distance(section_apply(h, f), section_apply(h, g))
// = h(v_distance(f, g)).
VElem section_apply(const PLAutomorphism& h, const VElem& f);

// Generators of the transformation group: translations (distance-preserving)
// and sections of the distance-scaling projection.
struct Translate {
  VElem shift;
  bool operator==(const Translate& other) const = default;
};
struct Section {
  PLAutomorphism part;
  bool operator==(const Section& other) const = default;
};
using Letter = std::variant<Translate, Section>;

struct GroupWord {
  std::vector<Letter> letters;
  bool operator==(const GroupWord& other) const = default;
};

// Applies the letters left to right: Translate adds, Section transports.
VElem word_apply(const GroupWord& w, const VElem& f);

// The distance action of the word: the composite of the Section parts in
// application order (Translate letters project to the identity). For all
// f, g: v_distance(word_apply(w,f), word_apply(w,g)) =
// pl_apply(word_project(w), v_distance(f,g)).
PLAutomorphism word_project(const GroupWord& w);

struct Factorization {
  GroupWord iso_part;          // projects to the identity
  PLAutomorphism distance_part;  // = word_project of the input
};

// Splits w into a distance-preserving part and a pure section:
// w acts exactly as iso_part followed by Section(distance_part), and
// word_project(iso_part) is the identity.
Factorization word_factorize(const GroupWord& w);

}  // namespace ultra
