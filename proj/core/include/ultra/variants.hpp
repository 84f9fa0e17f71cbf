// Convexly ordered spaces and equilateral-bounded spaces: validation, order
// extension, variant-aware one-point amalgamation, equilateral counting, and
// staged generic colorings.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/amalgam.hpp"
#include "ultra/space.hpp"

namespace ultra {

// A strict total order on the points of a space, listed ascending. The order
// is convex when every ball is an interval; equivalently, for x before y
// before z, d(x,y) <= d(x,z) and d(y,z) <= d(x,z).
struct ConvexOrder {
  UltraSpace space;
  std::vector<std::size_t> order;

  bool operator==(const ConvexOrder&) const = default;
};

struct ConvexViolation {
  std::size_t x = 0, y = 0, z = 0;  // point indices with x before y before z

  std::string message(const UltraSpace& s) const;
};

// Empty result means the order is convex. Structural problems (the sequence
// is not a permutation of the points, invalid space) throw Error
// "invalid-order" or "invalid-space".
std::optional<ConvexViolation> validate_convex_order(const ConvexOrder& c);

// Extends the convex order of a subspace to the whole space: children of
// every closed ball keep the relative order their members already have, and
// unconstrained children follow, least point label first. Passing an empty
// subspace yields the canonical convex order of y. Throws Error
// "not-a-subspace" when c's space does not sit isometrically inside y by
// label.
ConvexOrder extend_convex_order(const ConvexOrder& c, const UltraSpace& y);

struct ConvexAmalgam {
  Amalgam amalgam;
  ConvexOrder order;  // convex order on amalgam.result extending both inputs
  Rational chosen;    // the distance placed between the two new points
};

// One-point amalgamation in the convexly ordered class. The metric side
// follows the forced rule; in the isomorphic case the least positive merged
// value is used only when both orders insert their new point into the same
// gap of the base order, otherwise the distance is raised to the minimum
// distance from the new points to the base so the two insertions stay
// separate. The order side linearizes the combined constraints, least label
// first among free choices.
ConvexAmalgam amalgamate_convex_one_point(const ConvexOrder& base, const ConvexOrder& ext_a,
                                          const ConvexOrder& ext_b);

// A cardinality bound: a finite count (at least 2) or no bound at all.
struct Bound {
  std::optional<std::uint64_t> count;

  static Bound unbounded() { return Bound{}; }
  static Bound of(std::uint64_t n);  // Error "bad-bound" when n < 2
  bool allows(std::size_t size) const { return !count || size <= *count; }
  bool operator==(const Bound&) const = default;
  bool operator<(const Bound& o) const;  // finite ascending, unbounded last
};

std::string to_string(const Bound& b);

// Assigns a bound to every positive value of a sort.
struct BoundingMap {
  DistanceSet sort;
  std::vector<Bound> delta;  // parallel to sort.values without the leading 0

  static BoundingMap uniform(DistanceSet sort, Bound b);
  const Bound& at(const Rational& r) const;  // Error "bad-radius" when absent
  bool operator==(const BoundingMap&) const = default;
};

// Largest number of points pairwise at distance exactly r reachable from x,
// computed as the count of radius-r adjacency classes inside the closed ball
// around x; 1 when r is not attained at x. Throws Error "bad-radius" unless
// r is a positive sort value.
std::size_t equilateral_number(const UltraSpace& s, std::size_t x, const Rational& r);

struct BoundViolation {
  std::size_t x = 0;
  Rational r;

  std::string message(const UltraSpace& s) const;
};

// Empty result means every equilateral number stays within delta. Throws
// Error "bad-radius" when delta misses a positive sort value of the space.
std::optional<BoundViolation> is_delta_bounded(const UltraSpace& s, const BoundingMap& delta);

struct BoundedAmalgam {
  Amalgam amalgam;
  bool identified = false;        // the two new points were merged into one
  std::optional<Rational> chosen; // distance between the new points otherwise
};

// One-point amalgamation in the bounded class: isomorphic extensions are
// merged into a single new point instead of being held apart, because the
// repelling distance could enlarge an equilateral set past its bound; the
// forced case matches the plain amalgam. The result is re-checked against
// delta. delta must cover the merged sort.
BoundedAmalgam amalgamate_bounded_one_point(const UltraSpace& base, const UltraSpace& ext_a,
                                            const UltraSpace& ext_b, const BoundingMap& delta);

// One densification pass of a staged coloring of the positive rationals: the
// first call colors the first enumerated rational with the least color;
// afterwards every gap between adjacent colored rationals receives every
// color of m at evenly spaced interior points (ascending colors left to
// right), and the colored region grows one enumeration-tree step below its
// minimum and above its maximum, both with the least color. Throws Error
// "bad-colors" when m is empty.
std::vector<std::pair<Rational, Bound>> generic_coloring_stage(
    const std::vector<Bound>& m, std::vector<std::pair<Rational, Bound>> current);

}  // namespace ultra
