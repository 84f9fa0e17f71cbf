// Two-sorted ultrametric spaces: a finite point set, a finite linearly
// ordered set of distance values containing 0, and a distance matrix whose
// entries come from that value set and satisfy d(x,z) <= max(d(x,y), d(y,z)).
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/rational.hpp"

namespace ultra {

// Strictly increasing nonnegative rationals, always containing 0.
struct DistanceSet {
  std::vector<Rational> values;

  DistanceSet() : values{Rational(0)} {}
  explicit DistanceSet(std::vector<Rational> vals) : values(std::move(vals)) {}

  // Sorts, dedupes, inserts 0; rejects negative values.
  static DistanceSet closure(std::vector<Rational> vals);

  std::size_t size() const { return values.size(); }
  bool contains(const Rational& r) const;
  // Position in the ascending order; throws if absent.
  std::size_t index_of(const Rational& r) const;
  // Least positive value, if any.
  std::optional<Rational> min_positive() const;
  bool subset_of(const DistanceSet& other) const;

  bool operator==(const DistanceSet& other) const = default;
};

DistanceSet merge(const DistanceSet& a, const DistanceSet& b);

struct UltraSpace {
  std::vector<std::string> points;            // labels, pairwise distinct
  std::vector<std::vector<Rational>> dist;    // symmetric, zero diagonal
  DistanceSet sort;

  std::size_t size() const { return points.size(); }
  const Rational& d(std::size_t i, std::size_t j) const { return dist[i][j]; }
  std::optional<std::size_t> find_point(const std::string& label) const;
  // Max pairwise distance; 0 for spaces with fewer than two points.
  Rational diameter() const;

  bool operator==(const UltraSpace& other) const = default;
};

enum class SpaceDefect {
  bad_shape,        // matrix not square of the point count
  bad_sort,         // sort not strictly increasing from 0, or negative values
  duplicate_label,  // two points share a label
  nonzero_diagonal,
  non_symmetric,
  zero_off_diagonal,
  entry_not_in_sort,
  triangle_violation,
};

struct SpaceViolation {
  SpaceDefect kind;
  // Witnesses: for triangle_violation the failing inequality is
  // d(i,j) > max(d(i,k), d(k,j)); other kinds use i/j as applicable.
  std::size_t i = 0, j = 0, k = 0;
  std::string message(const UltraSpace& s) const;
};

// First violated axiom in a fixed deterministic scan order, or nullopt.
std::optional<SpaceViolation> validate_space(const UltraSpace& s);

// Validating constructor; throws Error(kind="invalid-space") on failure.
UltraSpace checked_space(std::vector<std::string> points,
                         std::vector<std::vector<Rational>> dist,
                         DistanceSet sort);

// Convenience: builds the space with sort = attained values plus 0.
UltraSpace space_from_matrix(std::vector<std::string> points,
                             std::vector<std::vector<Rational>> dist);

struct PrecisionReport {
  bool precise = true;
  std::vector<Rational> unattained;  // ascending; never contains 0
};

// A space is precise when every sort value is attained; 0 counts as attained
// exactly when the point set is nonempty, except that the empty space with
// sort {0} is precise by convention.
PrecisionReport is_precise(const UltraSpace& s);

// Fresh label helper: desired, desired_1, desired_2, ... first not taken.
std::string fresh_label(const std::vector<std::string>& taken, const std::string& desired);

}  // namespace ultra
