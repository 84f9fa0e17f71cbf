#include "ultra/space.hpp"

#include <algorithm>
#include <set>

namespace ultra {

DistanceSet DistanceSet::closure(std::vector<Rational> vals) {
  for (const auto& v : vals)
    if (v < 0) throw Error("invalid-sort", "negative distance value " + to_string(v));
  vals.push_back(Rational(0));
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return DistanceSet(std::move(vals));
}

bool DistanceSet::contains(const Rational& r) const {
  return std::binary_search(values.begin(), values.end(), r);
}

std::size_t DistanceSet::index_of(const Rational& r) const {
  auto it = std::lower_bound(values.begin(), values.end(), r);
  if (it == values.end() || *it != r)
    throw Error("value-not-in-sort", "value " + to_string(r) + " not in distance sort");
  return static_cast<std::size_t>(it - values.begin());
}

std::optional<Rational> DistanceSet::min_positive() const {
  if (values.size() < 2) return std::nullopt;
  return values[1];
}

bool DistanceSet::subset_of(const DistanceSet& other) const {
  return std::includes(other.values.begin(), other.values.end(),
                       values.begin(), values.end());
}

DistanceSet merge(const DistanceSet& a, const DistanceSet& b) {
  std::vector<Rational> vals;
  std::set_union(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
                 std::back_inserter(vals));
  return DistanceSet(std::move(vals));
}

std::optional<std::size_t> UltraSpace::find_point(const std::string& label) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == label) return i;
  return std::nullopt;
}

Rational UltraSpace::diameter() const {
  Rational m(0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (dist[i][j] > m) m = dist[i][j];
  return m;
}

std::string SpaceViolation::message(const UltraSpace& s) const {
  auto pt = [&](std::size_t idx) {
    return idx < s.points.size() ? s.points[idx] : "#" + std::to_string(idx);
  };
  switch (kind) {
    case SpaceDefect::bad_shape:
      return "distance matrix is not square of the point count";
    case SpaceDefect::bad_sort:
      return "distance sort is not a strictly increasing run starting at 0";
    case SpaceDefect::duplicate_label:
      return "duplicate point label " + pt(i);
    case SpaceDefect::nonzero_diagonal:
      return "d(" + pt(i) + "," + pt(i) + ") != 0";
    case SpaceDefect::non_symmetric:
      return "d(" + pt(i) + "," + pt(j) + ") != d(" + pt(j) + "," + pt(i) + ")";
    case SpaceDefect::zero_off_diagonal:
      return "d(" + pt(i) + "," + pt(j) + ") = 0 for distinct points";
    case SpaceDefect::entry_not_in_sort:
      return "d(" + pt(i) + "," + pt(j) + ") = " + to_string(s.dist[i][j]) +
             " not in the distance sort";
    case SpaceDefect::triangle_violation:
      return "d(" + pt(i) + "," + pt(j) + ") > max(d(" + pt(i) + "," + pt(k) +
             "), d(" + pt(k) + "," + pt(j) + "))";
  }
  return "unknown defect";
}

std::optional<SpaceViolation> validate_space(const UltraSpace& s) {
  const std::size_t n = s.points.size();
  if (s.dist.size() != n) return SpaceViolation{SpaceDefect::bad_shape};
  for (const auto& row : s.dist)
    if (row.size() != n) return SpaceViolation{SpaceDefect::bad_shape};

  const auto& sv = s.sort.values;
  if (sv.empty() || sv.front() != 0) return SpaceViolation{SpaceDefect::bad_sort};
  for (std::size_t i = 1; i < sv.size(); ++i)
    if (!(sv[i - 1] < sv[i])) return SpaceViolation{SpaceDefect::bad_sort};

  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i)
      if (!seen.insert(s.points[i]).second)
        return SpaceViolation{SpaceDefect::duplicate_label, i};
  }

  for (std::size_t i = 0; i < n; ++i)
    if (s.dist[i][i] != 0) return SpaceViolation{SpaceDefect::nonzero_diagonal, i};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (s.dist[i][j] != s.dist[j][i])
        return SpaceViolation{SpaceDefect::non_symmetric, i, j};
      if (s.dist[i][j] == 0)
        return SpaceViolation{SpaceDefect::zero_off_diagonal, i, j};
      if (!s.sort.contains(s.dist[i][j]))
        return SpaceViolation{SpaceDefect::entry_not_in_sort, i, j};
    }

  // Triangles scanned in lexicographic order of the endpoint pair; the witness
  // is (i, j, k) with d(i,j) > max(d(i,k), d(k,j)).
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Rational& lhs = s.dist[i][j];
        if (lhs > s.dist[i][k] && lhs > s.dist[k][j])
          return SpaceViolation{SpaceDefect::triangle_violation, i, j, k};
      }
  return std::nullopt;
}

UltraSpace checked_space(std::vector<std::string> points,
                         std::vector<std::vector<Rational>> dist,
                         DistanceSet sort) {
  UltraSpace s{std::move(points), std::move(dist), std::move(sort)};
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
  return s;
}

UltraSpace space_from_matrix(std::vector<std::string> points,
                             std::vector<std::vector<Rational>> dist) {
  std::vector<Rational> vals;
  for (std::size_t i = 0; i < dist.size(); ++i)
    for (std::size_t j = i + 1; j < dist[i].size(); ++j) vals.push_back(dist[i][j]);
  return checked_space(std::move(points), std::move(dist), DistanceSet::closure(std::move(vals)));
}

PrecisionReport is_precise(const UltraSpace& s) {
  std::set<Rational> attained;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) attained.insert(s.dist[i][j]);
  PrecisionReport report;
  for (const auto& v : s.sort.values) {
    if (v == 0) continue;  // covered below
    if (!attained.count(v)) report.unattained.push_back(v);
  }
  // 0 is attained by any point with itself; the empty space with sort {0}
  // counts as precise by convention, so 0 is never reported unattained.
  report.precise = report.unattained.empty();
  return report;
}

std::string fresh_label(const std::vector<std::string>& taken, const std::string& desired) {
  auto used = [&](const std::string& cand) {
    return std::find(taken.begin(), taken.end(), cand) != taken.end();
  };
  if (!used(desired)) return desired;
  for (int k = 1;; ++k) {
    std::string cand = desired + "_" + std::to_string(k);
    if (!used(cand)) return cand;
  }
}

}  // namespace ultra
