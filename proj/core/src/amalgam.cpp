#include "ultra/amalgam.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ultra {

std::vector<std::pair<Rational, Rational>> extend_order_embedding(
    std::vector<std::pair<Rational, Rational>> partial, const DistanceSet& domain_sort,
    const std::vector<Rational>& avoid) {
  std::map<Rational, Rational> assigned;
  assigned.emplace(Rational(0), Rational(0));
  for (auto& [k, v] : partial) {
    auto [it, inserted] = assigned.emplace(k, v);
    if (!inserted && it->second != v)
      throw Error("not-increasing", "conflicting images for " + to_string(k));
  }
  for (auto it = assigned.begin(); std::next(it) != assigned.end(); ++it)
    if (!(it->second < std::next(it)->second))
      throw Error("not-increasing", "partial map is not strictly increasing");
  for (const auto& [k, v] : assigned)
    if (!domain_sort.contains(k))
      throw Error("outside-domain", "key " + to_string(k) + " not in the domain sort");

  std::set<Rational> forbidden(avoid.begin(), avoid.end());
  for (const auto& v : domain_sort.values) {
    if (assigned.count(v)) continue;
    auto hi = assigned.upper_bound(v);
    auto lo = std::prev(hi);  // 0 is always assigned below any positive value
    Rational image;
    if (hi == assigned.end()) {
      image = lo->second + 1;
      while (forbidden.count(image)) image += 1;
    } else {
      image = (lo->second + hi->second) / 2;
      while (forbidden.count(image)) image = (lo->second + image) / 2;
    }
    assigned.emplace(v, std::move(image));
  }
  return {assigned.begin(), assigned.end()};
}

PreciseResult make_precise(const UltraSpace& s, bool force) {
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
  auto report = is_precise(s);
  if (report.precise && !force) return PreciseResult{s, identity_map(s)};

  const std::size_t m = s.sort.size() - 1;  // positive values r_1..r_m
  if (m == 0 && !s.points.empty()) return PreciseResult{s, identity_map(s)};

  UltraSpace out = s;
  std::vector<std::size_t> fresh;  // indices of a_0..a_m
  for (std::size_t i = 0; i <= m; ++i) {
    std::string label = fresh_label(out.points, "a" + std::to_string(i));
    fresh.push_back(out.points.size());
    out.points.push_back(std::move(label));
  }
  const std::size_t total = out.points.size();
  for (auto& row : out.dist) row.resize(total, Rational(0));
  out.dist.resize(total, std::vector<Rational>(total, Rational(0)));

  const Rational& top = s.sort.values.back();
  for (std::size_t old = 0; old < s.size(); ++old)
    for (auto ai : fresh) {
      out.dist[old][ai] = top;
      out.dist[ai][old] = top;
    }
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      const Rational& rj = s.sort.values[j];
      out.dist[fresh[i]][fresh[j]] = rj;
      out.dist[fresh[j]][fresh[i]] = rj;
    }
  if (auto v = validate_space(out))
    throw Error("internal", "precise completion invalid: " + v->message(out));
  return PreciseResult{out, isometric_inclusion(s, out)};
}

namespace {

// Checks ext = base plus exactly one point and returns its index in ext.
std::size_t extension_point(const UltraSpace& base, const UltraSpace& ext) {
  if (ext.size() != base.size() + 1)
    throw Error("not-a-subspace", "extension must add exactly one point");
  isometric_inclusion(base, ext);  // throws when base does not sit inside ext
  for (std::size_t i = 0; i < ext.size(); ++i)
    if (!base.find_point(ext.points[i])) return i;
  throw Error("not-a-subspace", "extension has no new point");
}

}  // namespace

OnePointAmalgam amalgamate_one_point(const UltraSpace& base, const UltraSpace& ext_a,
                                     const UltraSpace& ext_b) {
  if (auto v = validate_space(base)) throw Error("invalid-space", v->message(base));
  if (auto v = validate_space(ext_a)) throw Error("invalid-space", v->message(ext_a));
  if (auto v = validate_space(ext_b)) throw Error("invalid-space", v->message(ext_b));
  std::size_t ia = extension_point(base, ext_a);
  std::size_t ib = extension_point(base, ext_b);
  if (ext_a.points[ia] == ext_b.points[ib])
    throw Error("label-collision", "both extensions add the label " + ext_a.points[ia]);

  DistanceSet merged = merge(ext_a.sort, ext_b.sort);
  std::optional<Rational> ab;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const Rational& da = ext_a.dist[ia][*ext_a.find_point(base.points[k])];
    const Rational& db = ext_b.dist[ib][*ext_b.find_point(base.points[k])];
    if (da != db) {
      ab = std::max(da, db);
      break;
    }
  }
  if (!ab) {
    // Isomorphic extensions: take the least positive value of the merged
    // sort, introducing 1 when there is none.
    if (auto mp = merged.min_positive()) {
      ab = *mp;
    } else {
      ab = Rational(1);
      merged = merge(merged, DistanceSet::closure({Rational(1)}));
    }
  }

  UltraSpace out;
  out.sort = merged;
  out.points = base.points;
  out.points.push_back(ext_a.points[ia]);
  out.points.push_back(ext_b.points[ib]);
  const std::size_t n = base.size();
  out.dist.assign(n + 2, std::vector<Rational>(n + 2, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.dist[i][j] = base.dist[i][j];
  for (std::size_t k = 0; k < n; ++k) {
    const Rational& da = ext_a.dist[ia][*ext_a.find_point(base.points[k])];
    const Rational& db = ext_b.dist[ib][*ext_b.find_point(base.points[k])];
    out.dist[k][n] = da;
    out.dist[n][k] = da;
    out.dist[k][n + 1] = db;
    out.dist[n + 1][k] = db;
  }
  out.dist[n][n + 1] = *ab;
  out.dist[n + 1][n] = *ab;
  if (auto v = validate_space(out))
    throw Error("internal", "one-point amalgam invalid: " + v->message(out));
  Amalgam am{out, isometric_inclusion(ext_a, out), isometric_inclusion(ext_b, out)};
  return OnePointAmalgam{std::move(am), *ab};
}

Amalgam amalgamate(const DcMap& f, const DcMap& g) {
  if (auto v = validate_map(f)) throw Error("invalid-map", "left leg: " + v->message());
  if (auto v = validate_map(g)) throw Error("invalid-map", "right leg: " + v->message());
  if (!(f.source == g.source)) throw Error("base-mismatch", "the two maps have different bases");
  const UltraSpace& a = f.source;
  const UltraSpace& b = f.target;
  const UltraSpace& c = g.target;

  // Recode C's sort so the image of A carries the same values as in B.
  std::vector<std::pair<Rational, Rational>> seed;
  for (std::size_t i = 0; i < a.sort.size(); ++i)
    seed.emplace_back(c.sort.values[g.dist_map[i]], b.sort.values[f.dist_map[i]]);
  auto psi = extend_order_embedding(std::move(seed), c.sort, b.sort.values);
  auto recode = [&](const Rational& r) -> const Rational& {
    auto it = std::lower_bound(psi.begin(), psi.end(), r,
                               [](const auto& p, const Rational& v) { return p.first < v; });
    return it->second;
  };

  // Identify C's points with B's over A; everything else gets a fresh slot.
  std::vector<std::optional<std::size_t>> c_to_b(c.size());
  for (std::size_t i = 0; i < a.size(); ++i) c_to_b[g.point_map[i]] = f.point_map[i];

  UltraSpace out;
  out.points = b.points;
  out.dist = b.dist;
  DistanceSet w = b.sort;
  {
    std::vector<Rational> recoded;
    for (const auto& v : c.sort.values) recoded.push_back(recode(v));
    w = merge(w, DistanceSet::closure(std::move(recoded)));
  }

  std::vector<std::optional<std::size_t>> c_index(c.size());  // c point -> index in out
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c_to_b[j]) c_index[j] = *c_to_b[j];
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c_to_b[j]) continue;
    std::size_t me = out.points.size();
    c_index[j] = me;
    out.points.push_back(fresh_label(out.points, c.points[j]));
    for (auto& row : out.dist) row.emplace_back(0);
    out.dist.emplace_back(me + 1, Rational(0));
    // Distances to the image of A and to earlier C points come from C.
    std::vector<bool> known(me + 1, false);
    known[me] = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k == j || !c_index[k] || *c_index[k] == me) continue;
      const Rational& d = recode(c.dist[j][k]);
      out.dist[me][*c_index[k]] = d;
      out.dist[*c_index[k]][me] = d;
      known[*c_index[k]] = true;
    }
    // Remaining points of the growing amalgam, one at a time.
    for (std::size_t u = 0; u < me; ++u) {
      if (known[u]) continue;
      std::optional<Rational> d;
      for (std::size_t x = 0; x < me; ++x) {
        if (!known[x] || x == u) continue;
        if (out.dist[me][x] != out.dist[u][x]) {
          d = std::max(out.dist[me][x], out.dist[u][x]);
          break;
        }
      }
      if (!d) {
        if (auto mp = w.min_positive()) {
          d = *mp;
        } else {
          d = Rational(1);
          w = merge(w, DistanceSet::closure({Rational(1)}));
        }
      }
      out.dist[me][u] = *d;
      out.dist[u][me] = *d;
      known[u] = true;
    }
  }
  out.sort = w;
  if (auto v = validate_space(out))
    throw Error("internal", "amalgam invalid: " + v->message(out));

  DcMap left = isometric_inclusion(b, out);
  DcMap right{c, out, {}, {}};
  for (auto idx : c_index) right.point_map.push_back(*idx);
  for (const auto& v : c.sort.values) right.dist_map.push_back(out.sort.index_of(recode(v)));
  if (auto v = validate_map(right))
    throw Error("internal", "right leg invalid: " + v->message());
  return Amalgam{std::move(out), std::move(left), std::move(right)};
}

}  // namespace ultra
