// The one-point-extension absorber F = H ∘ G on finite two-sorted spaces:
// G interleaves the sort with fresh levels, H adds for every point and level
// the class of the closest-point extension at that level. F(X) absorbs every
// one-point extension of X, F acts on embeddings, iterates into a fast-growing
// chain, and carries automorphisms along injectively.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ultra/maps.hpp"
#include "ultra/space.hpp"

namespace ultra {

struct FlinResult {
  DistanceSet sort;                     // 0 < e_1 < d_1 < ... < e_k < d_k < e_top
  std::vector<std::size_t> old_to_new;  // input position -> output position
};

// Inserts the midpoint of every positive gap and one value above the top
// (top + 1); 2k+2 values for k positive inputs.
FlinResult flin_object(const DistanceSet& sort);

// Functorial action on a sort embedding phi (given by positions, 0 fixed):
// old values follow phi, the value inserted below d_i goes to the value
// inserted below phi(d_i), top insertion to top insertion. Throws
// Error("not-an-embedding") when phi is not a strictly increasing position
// map fixing 0.
std::vector<std::size_t> flin_map(const DistanceSet& d, const DistanceSet& e,
                                  const std::vector<std::size_t>& phi);

struct GResult {
  UltraSpace space;  // same points and matrix, interleaved sort
  DcMap eta;         // identity on points, sort part the interleaving
};

GResult g_apply(const UltraSpace& s);

struct KatetovResult {
  UltraSpace output;
  DcMap eta;  // input -> output, isometric on points
  // output point -> the (input point, level) pairs collapsed into it
  std::vector<std::vector<std::pair<std::size_t, Rational>>> provenance;
};

// Points of the output are classes of (point, level) pairs, where (x,r) and
// (x',r') collapse iff r = r' and d(x,x') <= r; distances are 0 within a
// class and max{d(x,x'), r, r'} across classes; the sort is unchanged.
// Labels read "<least member label>@<level>". eta sends x to the class of
// (x, 0); the classes at level 0 come first, in point order.
KatetovResult h_apply(const UltraSpace& s);

// F = H after G. Provenance levels live in the interleaved sort.
KatetovResult katetov_apply(const UltraSpace& s);

// Action on a dc-embedding: the class of (x, r) goes to the class of
// (f(x), phi(r)) with phi the interleaved sort part. Natural in f.
DcMap katetov_map(const DcMap& f);

// Embeds a one-point extension of x into F(x) over eta. Two shapes are
// accepted: a sort extension (same points and matrix, new sort values each
// falling into a distinct gap) mapped by sending each new value to its gap's
// inserted level; and a point extension (x plus one point) whose new point
// goes to the class of (closest point, interleaved minimal distance), the
// closest point chosen by least label. Throws Error("not-one-point") for any
// other shape and Error("empty-input") for a point added to the empty space
// (its image under F is empty).
DcMap absorb_one_point(const UltraSpace& x, const UltraSpace& ext);

struct KatetovChain {
  std::vector<UltraSpace> stages;  // stages[0] = the input
  std::vector<DcMap> inclusions;   // stages[i] -> stages[i+1]
};

// Iterates F n times. Throws Error("too-large") before computing a stage
// whose a-priori class-count bound (points times interleaved-sort size)
// exceeds max_points.
KatetovChain katetov_chain(const UltraSpace& x, std::size_t n,
                           std::size_t max_points = 5000);

// F^n on an automorphism (a bijective dc-self-map); the result is again an
// automorphism, the assignment is a group homomorphism, and distinct inputs
// stay distinct. Throws Error("not-an-automorphism") when g is not a
// bijective self-map.
DcMap aut_embed(const DcMap& g, std::size_t n);

}  // namespace ultra
