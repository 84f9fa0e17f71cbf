// Amalgamation over a common base, the precise completion, and the order-
// embedding extension rule used to reconcile distance sorts.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ultra/maps.hpp"
#include "ultra/space.hpp"

namespace ultra {

// Totalizes a strictly increasing partial map (0 included) over domain_sort:
// each unassigned value, taken in ascending order, goes to the midpoint of the
// images of its assigned neighbours, or to the last image plus 1 above the
// top. Filled values additionally dodge the finite avoid set: the midpoint is
// pulled halfway toward its lower bound until clear, the top value steps up
// by 1. Returns the full graph, ascending. Throws Error("not-increasing")
// when the partial map is not strictly increasing or moves 0, and
// Error("outside-domain") when a key lies outside domain_sort.
std::vector<std::pair<Rational, Rational>> extend_order_embedding(
    std::vector<std::pair<Rational, Rational>> partial, const DistanceSet& domain_sort,
    const std::vector<Rational>& avoid = {});

struct PreciseResult {
  UltraSpace space;
  DcMap inclusion;  // isometric inclusion of the input
};

// Attains every positive sort value r_1 < ... < r_m by adding fresh points
// a_0..a_m with d(a_i, a_j) = r_j for i < j and d(b, a_i) = r_m for old b.
// Already precise spaces pass through unchanged unless force is set. A
// nonempty space whose sort is {0} stays unchanged even under force: the
// construction needs a positive value for the old-to-new distances.
PreciseResult make_precise(const UltraSpace& s, bool force = false);

struct Amalgam {
  UltraSpace result;
  DcMap left_leg;
  DcMap right_leg;
};

struct OnePointAmalgam {
  Amalgam amalgam;
  Rational chosen;  // the distance placed between the two new points
};

// One-point amalgamation of two one-point extensions of a common base. The
// new distance is forced to max(d(a,x0), d(b,x0)) by any base point x0 seeing
// the two extensions differently; when no such point exists the least
// positive value of the merged sort is used (1 is introduced if the merged
// sort has no positive value). Legs are isometric inclusions; the result is a
// strong amalgam. Throws Error("label-collision") when both extensions add
// the same label and Error("not-a-subspace") when an input does not extend
// the base.
OnePointAmalgam amalgamate_one_point(const UltraSpace& base, const UltraSpace& ext_a,
                                     const UltraSpace& ext_b);

// General amalgamation of f: A -> B and g: A -> C. The sort of C is recoded
// by extend_order_embedding so that the images of A carry the same values as
// in B, with the fill dodging the values B uses outside A so no two distinct
// distances collapse, then the points of C outside A are added one at a time,
// each distance settled by the one-point rule with already placed points
// treated as prior extensions. The left leg is isometric; both legs are
// dc-embeddings and commute with f and g over A; the result is strong.
Amalgam amalgamate(const DcMap& f, const DcMap& g);

}  // namespace ultra
