// Maps between two-sorted spaces: an injective point map plus an order
// embedding of distance sorts fixing 0, commuting with the distance function.
// Isometric embeddings are the special case where the sort part preserves
// values on the nose.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/space.hpp"

namespace ultra {

struct DcMap {
  UltraSpace source;
  UltraSpace target;
  std::vector<std::size_t> point_map;  // source point index -> target point index
  std::vector<std::size_t> dist_map;   // source sort position -> target sort position

  // Value-level application of the sort part; r must lie in source.sort.
  const Rational& map_distance(const Rational& r) const {
    return target.sort.values[dist_map[source.sort.index_of(r)]];
  }
  const std::string& image_label(std::size_t i) const {
    return target.points[point_map[i]];
  }
};

enum class MapDefect {
  bad_space,            // source or target fails validation
  bad_shape,            // map vectors have wrong lengths or out-of-range entries
  not_injective,        // two points share an image
  zero_not_fixed,       // sort part moves 0
  not_order_embedding,  // sort part not strictly increasing
  not_commuting,        // d(f i, f j) != dist-part(d(i, j)); witness (i, j)
};

struct MapViolation {
  MapDefect kind;
  std::size_t i = 0, j = 0;
  std::string message() const;
};

std::optional<MapViolation> validate_map(const DcMap& f);
DcMap checked_map(DcMap f);  // throws Error(kind="invalid-map")

// True when the sort part is value-preserving (an isometric embedding).
bool is_isometric(const DcMap& f);

DcMap identity_map(const UltraSpace& s);

// g after f; requires f.target == g.source exactly.
DcMap compose(const DcMap& f, const DcMap& g);

// Label-matching inclusion sub -> super with value-preserving sort part.
// Throws Error(kind="not-a-subspace") when labels/distances/sorts don't embed.
DcMap isometric_inclusion(const UltraSpace& sub, const UltraSpace& super);

struct RestrictResult {
  UltraSpace space;
  DcMap inclusion;  // into the ambient space
};

// Induced substructure on the given point indices (distinct, in given order).
// The ambient sort is kept unless shrink_sort, which cuts it to attained
// values plus 0.
RestrictResult restrict_space(const UltraSpace& s, const std::vector<std::size_t>& subset,
                              bool shrink_sort = false);
RestrictResult restrict_space(const UltraSpace& s, const std::vector<std::string>& labels,
                              bool shrink_sort = false);

// A partial dc-isomorphism inside one ambient space: finite aligned domain and
// range tuples plus a strictly increasing partial sort map fixing 0.
struct PartialDcMap {
  UltraSpace ambient;
  std::vector<std::size_t> dom;
  std::vector<std::size_t> rng;
  std::vector<std::pair<Rational, Rational>> dist_pairs;  // ascending, contains (0,0)

  std::optional<Rational> map_distance(const Rational& r) const;
};

std::optional<std::string> validate_partial(const PartialDcMap& p);

// Empty partial map on the given ambient space.
PartialDcMap empty_partial(const UltraSpace& ambient);

}  // namespace ultra
