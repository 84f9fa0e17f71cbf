#include "ultra/maps.hpp"

#include <algorithm>
#include <set>

namespace ultra {

std::string MapViolation::message() const {
  switch (kind) {
    case MapDefect::bad_space: return "source or target space is invalid";
    case MapDefect::bad_shape: return "map components have wrong shape";
    case MapDefect::not_injective:
      return "points " + std::to_string(i) + " and " + std::to_string(j) + " share an image";
    case MapDefect::zero_not_fixed: return "sort part does not fix 0";
    case MapDefect::not_order_embedding: return "sort part is not strictly increasing";
    case MapDefect::not_commuting:
      return "distance of images of points " + std::to_string(i) + "," + std::to_string(j) +
             " differs from the mapped distance";
  }
  return "unknown defect";
}

std::optional<MapViolation> validate_map(const DcMap& f) {
  if (validate_space(f.source) || validate_space(f.target))
    return MapViolation{MapDefect::bad_space};
  const std::size_t n = f.source.size();
  if (f.point_map.size() != n || f.dist_map.size() != f.source.sort.size())
    return MapViolation{MapDefect::bad_shape};
  for (auto t : f.point_map)
    if (t >= f.target.size()) return MapViolation{MapDefect::bad_shape};
  for (auto t : f.dist_map)
    if (t >= f.target.sort.size()) return MapViolation{MapDefect::bad_shape};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (f.point_map[i] == f.point_map[j])
        return MapViolation{MapDefect::not_injective, i, j};

  if (!f.dist_map.empty() && f.dist_map[0] != 0)
    return MapViolation{MapDefect::zero_not_fixed};
  for (std::size_t i = 1; i < f.dist_map.size(); ++i)
    if (!(f.dist_map[i - 1] < f.dist_map[i]))
      return MapViolation{MapDefect::not_order_embedding};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rational& mapped = f.map_distance(f.source.dist[i][j]);
      if (f.target.dist[f.point_map[i]][f.point_map[j]] != mapped)
        return MapViolation{MapDefect::not_commuting, i, j};
    }
  return std::nullopt;
}

DcMap checked_map(DcMap f) {
  if (auto v = validate_map(f)) throw Error("invalid-map", v->message());
  return f;
}

bool is_isometric(const DcMap& f) {
  for (std::size_t i = 0; i < f.source.sort.size(); ++i)
    if (f.target.sort.values[f.dist_map[i]] != f.source.sort.values[i]) return false;
  return true;
}

DcMap identity_map(const UltraSpace& s) {
  DcMap f{s, s, {}, {}};
  f.point_map.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) f.point_map[i] = i;
  f.dist_map.resize(s.sort.size());
  for (std::size_t i = 0; i < s.sort.size(); ++i) f.dist_map[i] = i;
  return f;
}

DcMap compose(const DcMap& f, const DcMap& g) {
  if (!(f.target == g.source))
    throw Error("compose-mismatch", "inner target differs from outer source");
  DcMap h{f.source, g.target, {}, {}};
  h.point_map.resize(f.point_map.size());
  for (std::size_t i = 0; i < f.point_map.size(); ++i)
    h.point_map[i] = g.point_map[f.point_map[i]];
  h.dist_map.resize(f.dist_map.size());
  for (std::size_t i = 0; i < f.dist_map.size(); ++i)
    h.dist_map[i] = g.dist_map[f.dist_map[i]];
  return h;
}

DcMap isometric_inclusion(const UltraSpace& sub, const UltraSpace& super) {
  DcMap f{sub, super, {}, {}};
  f.point_map.reserve(sub.size());
  for (const auto& label : sub.points) {
    auto idx = super.find_point(label);
    if (!idx) throw Error("not-a-subspace", "label " + label + " missing from ambient space");
    f.point_map.push_back(*idx);
  }
  f.dist_map.reserve(sub.sort.size());
  for (const auto& v : sub.sort.values) {
    if (!super.sort.contains(v))
      throw Error("not-a-subspace", "sort value " + to_string(v) + " missing from ambient sort");
    f.dist_map.push_back(super.sort.index_of(v));
  }
  if (auto v = validate_map(f)) throw Error("not-a-subspace", v->message());
  return f;
}

RestrictResult restrict_space(const UltraSpace& s, const std::vector<std::size_t>& subset,
                              bool shrink_sort) {
  {
    std::set<std::size_t> seen;
    for (auto i : subset) {
      if (i >= s.size()) throw Error("bad-subset", "point index out of range");
      if (!seen.insert(i).second) throw Error("bad-subset", "repeated point index");
    }
  }
  UltraSpace sub;
  sub.points.reserve(subset.size());
  for (auto i : subset) sub.points.push_back(s.points[i]);
  sub.dist.assign(subset.size(), std::vector<Rational>(subset.size(), Rational(0)));
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = 0; b < subset.size(); ++b) sub.dist[a][b] = s.dist[subset[a]][subset[b]];
  if (shrink_sort) {
    std::vector<Rational> vals;
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = a + 1; b < subset.size(); ++b) vals.push_back(sub.dist[a][b]);
    sub.sort = DistanceSet::closure(std::move(vals));
  } else {
    sub.sort = s.sort;
  }
  DcMap inc{sub, s, {}, {}};
  inc.point_map = subset;
  inc.dist_map.reserve(sub.sort.size());
  for (const auto& v : sub.sort.values) inc.dist_map.push_back(s.sort.index_of(v));
  return RestrictResult{std::move(sub), std::move(inc)};
}

RestrictResult restrict_space(const UltraSpace& s, const std::vector<std::string>& labels,
                              bool shrink_sort) {
  std::vector<std::size_t> subset;
  subset.reserve(labels.size());
  for (const auto& label : labels) {
    auto idx = s.find_point(label);
    if (!idx) throw Error("bad-subset", "no point labelled " + label);
    subset.push_back(*idx);
  }
  return restrict_space(s, subset, shrink_sort);
}

std::optional<Rational> PartialDcMap::map_distance(const Rational& r) const {
  for (const auto& [from, to] : dist_pairs)
    if (from == r) return to;
  return std::nullopt;
}

std::optional<std::string> validate_partial(const PartialDcMap& p) {
  if (auto v = validate_space(p.ambient)) return "ambient space invalid: " + v->message(p.ambient);
  if (p.dom.size() != p.rng.size()) return std::string("domain and range sizes differ");
  for (auto i : p.dom)
    if (i >= p.ambient.size()) return std::string("domain index out of range");
  for (auto i : p.rng)
    if (i >= p.ambient.size()) return std::string("range index out of range");
  if (std::set<std::size_t>(p.dom.begin(), p.dom.end()).size() != p.dom.size())
    return std::string("domain has repeats");
  if (std::set<std::size_t>(p.rng.begin(), p.rng.end()).size() != p.rng.size())
    return std::string("range has repeats");

  bool has_zero = false;
  for (std::size_t i = 0; i < p.dist_pairs.size(); ++i) {
    const auto& [from, to] = p.dist_pairs[i];
    if (!p.ambient.sort.contains(from) || !p.ambient.sort.contains(to))
      return std::string("sort pair outside the ambient sort");
    if ((from == 0) != (to == 0)) return std::string("sort part does not fix 0");
    if (from == 0) has_zero = true;
    if (i > 0 && !(p.dist_pairs[i - 1].first < from && p.dist_pairs[i - 1].second < to))
      return std::string("sort part is not strictly increasing");
  }
  if (!has_zero) return std::string("sort part is missing the 0 -> 0 pair");

  for (std::size_t a = 0; a < p.dom.size(); ++a)
    for (std::size_t b = a + 1; b < p.dom.size(); ++b) {
      const Rational& d_dom = p.ambient.dist[p.dom[a]][p.dom[b]];
      auto mapped = p.map_distance(d_dom);
      if (!mapped)
        return "attained distance " + to_string(d_dom) + " missing from the sort part";
      if (p.ambient.dist[p.rng[a]][p.rng[b]] != *mapped)
        return "distance of images of " + p.ambient.points[p.dom[a]] + "," +
               p.ambient.points[p.dom[b]] + " differs from the mapped distance";
    }
  return std::nullopt;
}

PartialDcMap empty_partial(const UltraSpace& ambient) {
  PartialDcMap p{ambient, {}, {}, {{Rational(0), Rational(0)}}};
  return p;
}

}  // namespace ultra
