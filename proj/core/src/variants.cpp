#include "ultra/variants.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/maps.hpp"
#include "ultra/tree.hpp"

namespace ultra {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Orders the points of y by walking its precise-ball tree depth first, with
// the children of every ball arranged to respect each given suborder: among
// children meeting a suborder, the one holding the earlier point comes first
// (well-defined because each suborder is convex, so its trace on a child is an
// interval). Remaining freedom goes to the child with the least point label.
// Throws Error("order-conflict") when the suborders cannot be combined.
std::vector<std::size_t> linearize(const UltraSpace& y, const std::vector<const ConvexOrder*>& subs) {
  if (y.size() == 0) return {};

  std::vector<std::vector<std::size_t>> pos(subs.size(),
                                            std::vector<std::size_t>(y.size(), kNone));
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const ConvexOrder& sub = *subs[s];
    for (std::size_t k = 0; k < sub.order.size(); ++k) {
      auto idx = y.find_point(sub.space.points[sub.order[k]]);
      if (!idx) throw Error("not-a-subspace", "an order constraint names a point absent from the space");
      pos[s][*idx] = k;
    }
  }

  MeetTreeResult m = precise_ball_tree(y);
  auto kids = m.tree.children();

  std::vector<std::string> least_label(m.tree.size());
  std::vector<std::vector<std::size_t>> least_pos(
      m.tree.size(), std::vector<std::size_t>(subs.size(), kNone));
  for (std::size_t v = 0; v < m.tree.size(); ++v) {
    least_label[v] = m.extents[v].front();
    for (const std::string& lab : m.extents[v]) {
      std::size_t p = *y.find_point(lab);
      for (std::size_t s = 0; s < subs.size(); ++s)
        least_pos[v][s] = std::min(least_pos[v][s], pos[s][p]);
    }
  }

  auto order_children = [&](const std::vector<std::size_t>& cs) {
    std::vector<std::vector<std::size_t>> adj(cs.size());
    std::vector<std::size_t> indeg(cs.size(), 0);
    for (std::size_t s = 0; s < subs.size(); ++s) {
      std::vector<std::size_t> seen;
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (least_pos[cs[i]][s] != kNone) seen.push_back(i);
      std::sort(seen.begin(), seen.end(), [&](std::size_t l, std::size_t r) {
        return least_pos[cs[l]][s] < least_pos[cs[r]][s];
      });
      for (std::size_t i = 1; i < seen.size(); ++i) {
        adj[seen[i - 1]].push_back(seen[i]);
        ++indeg[seen[i]];
      }
    }
    std::vector<std::size_t> ordered;
    std::set<std::pair<std::string, std::size_t>> ready;
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (indeg[i] == 0) ready.insert({least_label[cs[i]], i});
    while (!ready.empty()) {
      auto [lab, i] = *ready.begin();
      ready.erase(ready.begin());
      ordered.push_back(cs[i]);
      for (std::size_t j : adj[i])
        if (--indeg[j] == 0) ready.insert({least_label[cs[j]], j});
    }
    if (ordered.size() != cs.size())
      throw Error("order-conflict", "the order constraints cannot be combined into one convex order");
    return ordered;
  };

  std::vector<std::size_t> out;
  std::vector<std::size_t> stack = {m.tree.roots().front()};
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (m.leaf_point[v]) {
      out.push_back(*m.leaf_point[v]);
      continue;
    }
    auto ordered = order_children(kids[v]);
    for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

// The point each one-point extension adds, as an index into the extension.
std::size_t added_point(const UltraSpace& base, const UltraSpace& ext, const DcMap& inclusion) {
  if (ext.size() != base.size() + 1)
    throw Error("not-an-extension", "each side must add exactly one point to the base");
  std::vector<bool> hit(ext.size(), false);
  for (std::size_t p : inclusion.point_map) hit[p] = true;
  for (std::size_t p = 0; p < ext.size(); ++p)
    if (!hit[p]) return p;
  throw Error("not-an-extension", "the inclusion already covers every point");
}

}  // namespace

std::string ConvexViolation::message(const UltraSpace& s) const {
  return "convexity fails on " + s.points[x] + " < " + s.points[y] + " < " + s.points[z] +
         ": d=" + to_string(s.d(x, y)) + ", " + to_string(s.d(y, z)) + " against d(" +
         s.points[x] + "," + s.points[z] + ")=" + to_string(s.d(x, z));
}

std::optional<ConvexViolation> validate_convex_order(const ConvexOrder& c) {
  if (auto v = validate_space(c.space)) throw Error("invalid-space", v->message(c.space));
  if (c.order.size() != c.space.size())
    throw Error("invalid-order", "the order must list every point exactly once");
  std::vector<bool> seen(c.space.size(), false);
  for (std::size_t idx : c.order) {
    if (idx >= c.space.size() || seen[idx])
      throw Error("invalid-order", "the order must be a permutation of the point indices");
    seen[idx] = true;
  }
  for (std::size_t p = 0; p < c.order.size(); ++p)
    for (std::size_t q = p + 1; q < c.order.size(); ++q)
      for (std::size_t r = q + 1; r < c.order.size(); ++r) {
        std::size_t x = c.order[p], y = c.order[q], z = c.order[r];
        if (c.space.d(x, y) > c.space.d(x, z) || c.space.d(y, z) > c.space.d(x, z))
          return ConvexViolation{x, y, z};
      }
  return std::nullopt;
}

ConvexOrder extend_convex_order(const ConvexOrder& c, const UltraSpace& y) {
  if (auto v = validate_convex_order(c)) throw Error("not-convex", v->message(c.space));
  if (auto v = validate_space(y)) throw Error("invalid-space", v->message(y));
  isometric_inclusion(c.space, y);
  ConvexOrder out{y, linearize(y, {&c})};
  if (auto v = validate_convex_order(out))
    throw Error("internal", "order extension produced a non-convex order: " + v->message(y));
  return out;
}

ConvexAmalgam amalgamate_convex_one_point(const ConvexOrder& base, const ConvexOrder& ext_a,
                                          const ConvexOrder& ext_b) {
  for (const ConvexOrder* c : {&base, &ext_a, &ext_b})
    if (auto v = validate_convex_order(*c)) throw Error("not-convex", v->message(c->space));

  auto restricts_to_base = [&](const ConvexOrder& ext) {
    std::vector<std::string> restricted;
    for (std::size_t idx : ext.order) {
      const std::string& lab = ext.space.points[idx];
      if (base.space.find_point(lab)) restricted.push_back(lab);
    }
    std::vector<std::string> base_labels;
    base_labels.reserve(base.order.size());
    for (std::size_t idx : base.order) base_labels.push_back(base.space.points[idx]);
    return restricted == base_labels;
  };
  if (!restricts_to_base(ext_a) || !restricts_to_base(ext_b))
    throw Error("not-an-extension", "each extension order must restrict to the base order");

  OnePointAmalgam plain = amalgamate_one_point(base.space, ext_a.space, ext_b.space);

  DcMap inc_a = isometric_inclusion(base.space, ext_a.space);
  DcMap inc_b = isometric_inclusion(base.space, ext_b.space);
  std::size_t ia = added_point(base.space, ext_a.space, inc_a);
  std::size_t ib = added_point(base.space, ext_b.space, inc_b);

  bool isomorphic = true;
  for (std::size_t x = 0; x < base.space.size() && isomorphic; ++x)
    isomorphic = ext_a.space.d(inc_a.point_map[x], ia) == ext_b.space.d(inc_b.point_map[x], ib);

  std::size_t pa = std::find(ext_a.order.begin(), ext_a.order.end(), ia) - ext_a.order.begin();
  std::size_t pb = std::find(ext_b.order.begin(), ext_b.order.end(), ib) - ext_b.order.begin();

  Amalgam am = std::move(plain.amalgam);
  Rational chosen = std::move(plain.chosen);
  if (isomorphic && pa != pb) {
    // The repelling distance would glue the new points into one ball that the
    // two orders place into different gaps of the base; raise it to the least
    // distance from the new points to the base so the insertions stay apart.
    Rational lift = ext_a.space.d(inc_a.point_map[0], ia);
    for (std::size_t x = 1; x < base.space.size(); ++x)
      lift = std::min(lift, ext_a.space.d(inc_a.point_map[x], ia));
    std::size_t i1 = am.left_leg.point_map[ia];
    std::size_t i2 = am.right_leg.point_map[ib];
    for (UltraSpace* sp : {&am.result, &am.left_leg.target, &am.right_leg.target}) {
      sp->dist[i1][i2] = lift;
      sp->dist[i2][i1] = lift;
    }
    chosen = lift;
    if (auto v = validate_space(am.result))
      throw Error("internal", "raised distance broke the amalgam: " + v->message(am.result));
  }

  ConvexOrder order{am.result, linearize(am.result, {&ext_a, &ext_b})};
  if (auto v = validate_convex_order(order))
    throw Error("internal", "amalgam order is not convex: " + v->message(am.result));
  return ConvexAmalgam{std::move(am), std::move(order), std::move(chosen)};
}

Bound Bound::of(std::uint64_t n) {
  if (n < 2) throw Error("bad-bound", "a bound must be at least 2");
  Bound b;
  b.count = n;
  return b;
}

bool Bound::operator<(const Bound& o) const {
  if (!count) return false;  // no bound sits above every finite bound
  if (!o.count) return true;
  return *count < *o.count;
}

std::string to_string(const Bound& b) { return b.count ? std::to_string(*b.count) : "inf"; }

BoundingMap BoundingMap::uniform(DistanceSet sort, Bound b) {
  BoundingMap m;
  m.delta.assign(sort.size() == 0 ? 0 : sort.size() - 1, b);
  m.sort = std::move(sort);
  return m;
}

const Bound& BoundingMap::at(const Rational& r) const {
  if (!(r > 0) || !sort.contains(r) || sort.index_of(r) - 1 >= delta.size())
    throw Error("bad-radius", "no bound is assigned to " + to_string(r));
  return delta[sort.index_of(r) - 1];
}

std::size_t equilateral_number(const UltraSpace& s, std::size_t x, const Rational& r) {
  if (x >= s.size()) throw Error("bad-point", "point index out of range");
  if (!(r > 0) || !s.sort.contains(r))
    throw Error("bad-radius", "the radius must be a positive sort value");
  bool attained = false;
  for (std::size_t y = 0; y < s.size() && !attained; ++y) attained = s.d(x, y) == r;
  if (!attained) return 1;
  // Count the radius-r classes inside the closed ball: membership is mutual
  // distance below r, an equivalence by the ultrametric inequality.
  std::vector<std::size_t> reps;
  for (std::size_t y = 0; y < s.size(); ++y) {
    if (s.d(x, y) > r) continue;
    bool matched = false;
    for (std::size_t rep : reps)
      if (s.d(y, rep) < r) {
        matched = true;
        break;
      }
    if (!matched) reps.push_back(y);
  }
  return reps.size();
}

std::string BoundViolation::message(const UltraSpace& s) const {
  return "equilateral number " + std::to_string(equilateral_number(s, x, r)) + " at point " +
         s.points[x] + ", radius " + to_string(r) + " exceeds its bound";
}

std::optional<BoundViolation> is_delta_bounded(const UltraSpace& s, const BoundingMap& delta) {
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t i = 1; i < s.sort.size(); ++i) {
      const Rational& r = s.sort.values[i];
      if (!delta.at(r).allows(equilateral_number(s, x, r))) return BoundViolation{x, r};
    }
  return std::nullopt;
}

BoundedAmalgam amalgamate_bounded_one_point(const UltraSpace& base, const UltraSpace& ext_a,
                                            const UltraSpace& ext_b, const BoundingMap& delta) {
  if (auto v = is_delta_bounded(ext_a, delta)) throw Error("not-bounded", v->message(ext_a));
  if (auto v = is_delta_bounded(ext_b, delta)) throw Error("not-bounded", v->message(ext_b));

  DcMap inc_a = isometric_inclusion(base, ext_a);
  DcMap inc_b = isometric_inclusion(base, ext_b);
  std::size_t ia = added_point(base, ext_a, inc_a);
  std::size_t ib = added_point(base, ext_b, inc_b);

  bool isomorphic = true;
  for (std::size_t x = 0; x < base.size() && isomorphic; ++x)
    isomorphic = ext_a.d(inc_a.point_map[x], ia) == ext_b.d(inc_b.point_map[x], ib);

  if (!isomorphic) {
    OnePointAmalgam plain = amalgamate_one_point(base, ext_a, ext_b);
    if (auto v = is_delta_bounded(plain.amalgam.result, delta))
      throw Error("internal", "forced amalgam broke its bound: " + v->message(plain.amalgam.result));
    return BoundedAmalgam{std::move(plain.amalgam), false, std::move(plain.chosen)};
  }

  // Equal distance profiles: holding the points apart could enlarge an
  // equilateral set past its bound, so the two become one new point.
  UltraSpace y;
  y.points = base.points;
  y.points.push_back(std::min(ext_a.points[ia], ext_b.points[ib]));
  y.dist.assign(y.points.size(), std::vector<Rational>(y.points.size(), Rational(0)));
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j) y.dist[i][j] = base.dist[i][j];
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Rational& v = ext_a.d(inc_a.point_map[i], ia);
    y.dist[i][base.size()] = v;
    y.dist[base.size()][i] = v;
  }
  y.sort = merge(ext_a.sort, ext_b.sort);
  y = checked_space(std::move(y.points), std::move(y.dist), std::move(y.sort));

  auto leg = [&](const UltraSpace& ext, const DcMap& inc, std::size_t added) {
    DcMap f;
    f.source = ext;
    f.target = y;
    f.point_map.assign(ext.size(), 0);
    for (std::size_t x = 0; x < base.size(); ++x) f.point_map[inc.point_map[x]] = x;
    f.point_map[added] = base.size();
    f.dist_map.reserve(ext.sort.size());
    for (const Rational& v : ext.sort.values) f.dist_map.push_back(y.sort.index_of(v));
    return checked_map(std::move(f));
  };
  Amalgam am{y, leg(ext_a, inc_a, ia), leg(ext_b, inc_b, ib)};
  if (auto v = is_delta_bounded(am.result, delta))
    throw Error("internal", "identified amalgam broke its bound: " + v->message(am.result));
  return BoundedAmalgam{std::move(am), true, std::nullopt};
}

std::vector<std::pair<Rational, Bound>> generic_coloring_stage(
    const std::vector<Bound>& m, std::vector<std::pair<Rational, Bound>> current) {
  if (m.empty()) throw Error("bad-colors", "at least one color is required");
  std::vector<Bound> colors = m;
  std::sort(colors.begin(), colors.end());
  colors.erase(std::unique(colors.begin(), colors.end()), colors.end());

  auto by_value = [](const std::pair<Rational, Bound>& l, const std::pair<Rational, Bound>& r) {
    return l.first < r.first;
  };
  std::sort(current.begin(), current.end(), by_value);
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (!(current[i].first > 0))
      throw Error("bad-coloring", "colored values must be positive rationals");
    if (i > 0 && current[i].first == current[i - 1].first)
      throw Error("bad-coloring", "a rational may carry only one color");
  }

  if (current.empty()) return {{calkin_wilf(0), colors.front()}};

  std::vector<std::pair<Rational, Bound>> out = current;
  const std::size_t k = colors.size();
  for (std::size_t i = 0; i + 1 < current.size(); ++i) {
    const Rational& q1 = current[i].first;
    const Rational& q2 = current[i + 1].first;
    Rational step = (q2 - q1) / Rational(Int(k + 1));
    for (std::size_t c = 0; c < k; ++c) out.push_back({q1 + Rational(Int(c + 1)) * step, colors[c]});
  }
  // One enumeration-tree step outward: the child a/(a+b) below the minimum
  // a/b, the child (a+b)/b above the maximum, both with the least color.
  Int lo_num = numerator(current.front().first), lo_den = denominator(current.front().first);
  out.push_back({make_rational(lo_num, lo_num + lo_den), colors.front()});
  Int hi_num = numerator(current.back().first), hi_den = denominator(current.back().first);
  out.push_back({make_rational(hi_num + hi_den, hi_den), colors.front()});
  std::sort(out.begin(), out.end(), by_value);
  return out;
}

}  // namespace ultra
