#include "ultra/katetov.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ultra/error.hpp"

namespace ultra {

namespace {

void require_valid(const UltraSpace& s) {
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
}

// Position of the inserted level absorbing a value that lies outside the
// sort: 2i-1 for the i-th positive gap, 2k+1 above the top.
std::size_t gap_slot(const DistanceSet& sort, const Rational& v) {
  std::size_t k = sort.size() - 1;
  for (std::size_t i = 1; i <= k; ++i)
    if (v < sort.values[i]) return 2 * i - 1;
  return 2 * k + 1;
}

// (input point, interleaved level position) -> output point index.
std::vector<std::vector<std::size_t>> provenance_index(const KatetovResult& f,
                                                       const UltraSpace& x,
                                                       const DistanceSet& levels) {
  std::vector<std::vector<std::size_t>> idx(x.size(),
                                            std::vector<std::size_t>(levels.size(), 0));
  for (std::size_t p = 0; p < f.provenance.size(); ++p)
    for (const auto& [point, level] : f.provenance[p]) idx[point][levels.index_of(level)] = p;
  return idx;
}

}  // namespace

FlinResult flin_object(const DistanceSet& sort) {
  FlinResult r;
  std::vector<Rational> out;
  const auto& d = sort.values;
  const std::size_t k = d.size() - 1;
  out.reserve(2 * k + 2);
  out.push_back(Rational(0));
  for (std::size_t i = 1; i <= k; ++i) {
    out.push_back((d[i - 1] + d[i]) / 2);
    out.push_back(d[i]);
  }
  out.push_back(d[k] + 1);
  r.sort = DistanceSet(std::move(out));
  r.old_to_new.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r.old_to_new.push_back(2 * i);
  return r;
}

std::vector<std::size_t> flin_map(const DistanceSet& d, const DistanceSet& e,
                                  const std::vector<std::size_t>& phi) {
  if (phi.size() != d.size() || phi.empty() || phi[0] != 0)
    throw Error("not-an-embedding", "the sort part must map every value and fix 0");
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] >= e.size()) throw Error("not-an-embedding", "position out of range");
    if (i > 0 && phi[i] <= phi[i - 1])
      throw Error("not-an-embedding", "the sort part must be strictly increasing");
  }
  FlinResult fd = flin_object(d);
  FlinResult fe = flin_object(e);
  std::vector<std::size_t> out(fd.sort.size(), 0);
  const std::size_t kd = d.size() - 1;
  for (std::size_t i = 0; i < d.size(); ++i) out[fd.old_to_new[i]] = fe.old_to_new[phi[i]];
  for (std::size_t i = 1; i <= kd; ++i) out[2 * i - 1] = fe.old_to_new[phi[i]] - 1;
  out[2 * kd + 1] = fe.sort.size() - 1;
  return out;
}

GResult g_apply(const UltraSpace& s) {
  require_valid(s);
  FlinResult fl = flin_object(s.sort);
  GResult r;
  r.space = s;
  r.space.sort = fl.sort;
  r.eta.source = s;
  r.eta.target = r.space;
  r.eta.point_map.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r.eta.point_map[i] = i;
  r.eta.dist_map = fl.old_to_new;
  r.eta = checked_map(std::move(r.eta));
  return r;
}

KatetovResult h_apply(const UltraSpace& s) {
  require_valid(s);
  struct Cls {
    std::size_t level_pos;
    std::vector<std::size_t> members;
  };
  std::vector<Cls> classes;
  for (std::size_t ri = 0; ri < s.sort.size(); ++ri) {
    const Rational& r = s.sort.values[ri];
    for (std::size_t x = 0; x < s.size(); ++x) {
      bool placed = false;
      for (auto& c : classes) {
        if (c.level_pos != ri) continue;
        if (s.d(x, c.members.front()) <= r) {
          c.members.push_back(x);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back(Cls{ri, {x}});
    }
  }

  KatetovResult res;
  UltraSpace out;
  out.sort = s.sort;
  out.points.reserve(classes.size());
  for (const auto& c : classes)
    out.points.push_back(s.points[c.members.front()] + "@" +
                         to_string(s.sort.values[c.level_pos]));
  out.dist.assign(classes.size(), std::vector<Rational>(classes.size(), Rational(0)));
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      Rational v = std::max({s.d(classes[i].members.front(), classes[j].members.front()),
                             s.sort.values[classes[i].level_pos],
                             s.sort.values[classes[j].level_pos]});
      out.dist[i][j] = v;
      out.dist[j][i] = v;
    }
  res.output = checked_space(std::move(out.points), std::move(out.dist), std::move(out.sort));

  res.eta.source = s;
  res.eta.target = res.output;
  res.eta.point_map.resize(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) res.eta.point_map[x] = x;  // level-0 classes lead
  res.eta.dist_map.resize(s.sort.size());
  for (std::size_t i = 0; i < s.sort.size(); ++i) res.eta.dist_map[i] = i;
  res.eta = checked_map(std::move(res.eta));

  res.provenance.reserve(classes.size());
  for (const auto& c : classes) {
    std::vector<std::pair<std::size_t, Rational>> members;
    members.reserve(c.members.size());
    for (std::size_t x : c.members) members.push_back({x, s.sort.values[c.level_pos]});
    res.provenance.push_back(std::move(members));
  }
  return res;
}

KatetovResult katetov_apply(const UltraSpace& s) {
  GResult g = g_apply(s);
  KatetovResult h = h_apply(g.space);
  KatetovResult res;
  res.output = std::move(h.output);
  res.eta = compose(g.eta, h.eta);
  res.provenance = std::move(h.provenance);
  return res;
}

DcMap katetov_map(const DcMap& f) {
  if (auto v = validate_map(f)) throw Error("invalid-map", v->message());
  KatetovResult fs = katetov_apply(f.source);
  KatetovResult ft = katetov_apply(f.target);
  std::vector<std::size_t> phi = flin_map(f.source.sort, f.target.sort, f.dist_map);

  auto target_index = provenance_index(ft, f.target, ft.output.sort);
  DcMap out;
  out.source = fs.output;
  out.target = ft.output;
  out.point_map.reserve(fs.output.size());
  for (const auto& members : fs.provenance) {
    const auto& [x, level] = members.front();
    std::size_t level_pos = fs.output.sort.index_of(level);
    out.point_map.push_back(target_index[f.point_map[x]][phi[level_pos]]);
  }
  out.dist_map = std::move(phi);
  return checked_map(std::move(out));
}

DcMap absorb_one_point(const UltraSpace& x, const UltraSpace& ext) {
  require_valid(x);
  require_valid(ext);
  KatetovResult f = katetov_apply(x);
  FlinResult fl = flin_object(x.sort);

  // Sort part shared by both shapes: old values keep their interleaved
  // positions, new values land on their gap's inserted level.
  auto build_dist_map = [&]() {
    std::vector<std::size_t> dm;
    dm.reserve(ext.sort.size());
    for (const Rational& v : ext.sort.values)
      dm.push_back(x.sort.contains(v) ? fl.old_to_new[x.sort.index_of(v)]
                                      : gap_slot(x.sort, v));
    for (std::size_t i = 1; i < dm.size(); ++i)
      if (dm[i] <= dm[i - 1])
        throw Error("not-one-point", "two new sort values fall into the same gap");
    return dm;
  };

  if (ext.points == x.points && ext.dist == x.dist) {
    if (!x.sort.subset_of(ext.sort) || ext.sort.size() == x.sort.size())
      throw Error("not-one-point", "a sort extension must add new values over the same points");
    DcMap out;
    out.source = ext;
    out.target = f.output;
    out.point_map = f.eta.point_map;
    out.dist_map = build_dist_map();
    return checked_map(std::move(out));
  }

  if (ext.size() != x.size() + 1)
    throw Error("not-one-point", "expected the same points or exactly one more");
  DcMap inc = isometric_inclusion(x, ext);
  std::vector<bool> hit(ext.size(), false);
  for (std::size_t p : inc.point_map) hit[p] = true;
  std::size_t y = 0;
  while (y < ext.size() && hit[y]) ++y;
  if (x.size() == 0)
    throw Error("empty-input", "the empty space has an empty image, nothing can absorb a point");

  std::size_t closest = inc.point_map[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    std::size_t p = inc.point_map[i];
    if (ext.d(y, p) < ext.d(y, closest) ||
        (ext.d(y, p) == ext.d(y, closest) && ext.points[p] < ext.points[closest]))
      closest = p;
  }
  const Rational& r0 = ext.d(y, closest);

  DcMap out;
  out.source = ext;
  out.target = f.output;
  out.dist_map = build_dist_map();
  const Rational& lifted = fl.sort.values[out.dist_map[ext.sort.index_of(r0)]];
  auto index = provenance_index(f, x, f.output.sort);
  std::size_t closest_in_x = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (inc.point_map[i] == closest) closest_in_x = i;
  out.point_map.assign(ext.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i)
    out.point_map[inc.point_map[i]] = f.eta.point_map[i];
  out.point_map[y] = index[closest_in_x][f.output.sort.index_of(lifted)];
  return checked_map(std::move(out));
}

KatetovChain katetov_chain(const UltraSpace& x, std::size_t n, std::size_t max_points) {
  require_valid(x);
  KatetovChain ch;
  ch.stages.push_back(x);
  for (std::size_t i = 0; i < n; ++i) {
    const UltraSpace& cur = ch.stages.back();
    if (cur.size() * 2 * cur.sort.size() > max_points)
      throw Error("too-large", "stage " + std::to_string(i + 1) + " could reach " +
                                   std::to_string(cur.size() * 2 * cur.sort.size()) +
                                   " points, over the limit of " + std::to_string(max_points));
    KatetovResult r = katetov_apply(cur);
    ch.inclusions.push_back(std::move(r.eta));
    ch.stages.push_back(std::move(r.output));
  }
  return ch;
}

DcMap aut_embed(const DcMap& g, std::size_t n) {
  if (auto v = validate_map(g)) throw Error("invalid-map", v->message());
  if (!(g.source == g.target))
    throw Error("not-an-automorphism", "source and target must be the same space");
  if (g.point_map.size() != g.source.size() || g.source.size() != g.target.size())
    throw Error("not-an-automorphism", "the point map must be a bijection");
  // injective into an equal-size set, so surjective; the sort part is a
  // strictly increasing self-injection of positions, hence the identity
  DcMap cur = g;
  for (std::size_t i = 0; i < n; ++i) cur = katetov_map(cur);
  return cur;
}

}  // namespace ultra
