#include "support.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "ultra/amalgam.hpp"
#include "ultra/rational.hpp"

namespace testsupport {

using namespace ultra;

std::vector<Rational> cw_pool(std::size_t k) {
  std::vector<Rational> pool;
  for (std::size_t i = 0; i < k; ++i) pool.push_back(calkin_wilf(i));
  return pool;
}

UltraSpace random_space(Rng& rng, std::size_t points, const std::vector<Rational>& pool,
                        std::size_t extra_sort_values) {
  UltraSpace s;
  std::vector<Rational> sort_vals;
  for (std::size_t n = 0; n < points; ++n) {
    std::string label = "p" + std::to_string(n);
    if (n == 0) {
      s.points = {label};
      s.dist = {{Rational(0)}};
    } else {
      std::size_t anchor = rng.below(n);
      Rational r = rng.pick(pool);
      std::vector<Rational> row(n + 1, Rational(0));
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = (j == anchor) ? r : std::max(r, s.dist[anchor][j]);
      }
      for (std::size_t j = 0; j < n; ++j) s.dist[j].push_back(row[j]);
      s.dist.push_back(row);
      s.points.push_back(label);
    }
  }
  for (std::size_t j = 0; j < points; ++j)
    for (std::size_t i = 0; i < j; ++i) sort_vals.push_back(s.dist[i][j]);
  for (std::size_t e = 0; e < extra_sort_values; ++e) sort_vals.push_back(rng.pick(pool));
  s.sort = DistanceSet::closure(sort_vals);
  return checked_space(s.points, s.dist, s.sort);
}

LeveledTree random_adjacency_tree(Rng& rng, std::size_t max_nodes) {
  // Build a space and take its adjacency forest; every valid adjacency tree
  // arises this way and validity is guaranteed by construction.
  std::size_t pts = 2 + rng.below(std::max<std::size_t>(max_nodes, 2));
  auto pool = cw_pool(5);
  for (int attempt = 0; attempt < 50; ++attempt) {
    UltraSpace s = random_space(rng, pts, pool);
    AdjacencyForest f = adjacency_ball_tree(s);
    if (f.tree.parent.size() <= max_nodes && !f.tree.parent.empty()) return f.tree;
    if (pts > 2) --pts;
  }
  UltraSpace s = random_space(rng, 2, pool);
  return adjacency_ball_tree(s).tree;
}

DcMap random_embedding(Rng& rng, std::size_t source_points, std::size_t extra_points,
                       const std::vector<Rational>& pool) {
  UltraSpace src = random_space(rng, source_points, pool, rng.below(2));
  // Grow the target from the source, then recode its sort upward.
  UltraSpace grown = src;
  for (std::size_t e = 0; e < extra_points; ++e) {
    std::size_t anchor = rng.below(grown.size());
    Rational r = rng.pick(pool);
    std::size_t n = grown.size();
    std::vector<Rational> row(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
      row[j] = (j == anchor) ? r : std::max(r, grown.dist[anchor][j]);
    for (std::size_t j = 0; j < n; ++j) grown.dist[j].push_back(row[j]);
    grown.dist.push_back(row);
    grown.points.push_back(fresh_label(grown.points, "q" + std::to_string(e)));
    std::vector<Rational> vals;
    for (const Rational& v : grown.sort.values) vals.push_back(v);
    vals.push_back(r);
    grown.sort = DistanceSet::closure(vals);
  }
  // Random strictly increasing recode of the sort: value v goes to
  // v * a + accumulated offsets, realized by an explicit graph.
  std::vector<std::pair<Rational, Rational>> graph;
  Rational prev_out(0);
  bool first = true;
  for (const Rational& v : grown.sort.values) {
    Rational out = first ? Rational(0) : prev_out + Rational(1 + (long long)rng.below(3));
    graph.emplace_back(v, out);
    prev_out = out;
    first = false;
  }
  UltraSpace target = grown;
  std::vector<Rational> tvals;
  auto recode = [&](const Rational& v) {
    for (const auto& [in, out] : graph)
      if (in == v) return out;
    return v;
  };
  for (std::size_t j = 0; j < target.size(); ++j)
    for (std::size_t i = 0; i < target.size(); ++i) target.dist[i][j] = recode(target.dist[i][j]);
  for (const auto& [in, out] : graph) tvals.push_back(out);
  target.sort = DistanceSet::closure(tvals);
  target = checked_space(target.points, target.dist, target.sort);

  DcMap f;
  f.source = src;
  f.target = target;
  for (std::size_t i = 0; i < src.size(); ++i) f.point_map.push_back(i);
  for (const Rational& v : src.sort.values) {
    std::size_t pos = target.sort.index_of(recode(v));
    f.dist_map.push_back(pos);
  }
  return checked_map(f);
}

namespace oracle {

bool trees_isomorphic(const LeveledTree& a, const LeveledTree& b, IsoMode mode) {
  std::size_t n = a.parent.size();
  if (n != b.parent.size()) return false;
  if (a.kind != b.kind) return false;
  if (mode == IsoMode::isometric) {
    if (a.level_sort.values != b.level_sort.values) return false;
  } else {
    if (a.level_sort.values.size() != b.level_sort.values.size()) return false;
  }
  if (n == 0) return true;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  auto level_key = [](const LeveledTree& t, std::size_t v) {
    return t.level_sort.index_of(t.level[v]);
  };
  do {
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      if (level_key(a, v) != level_key(b, perm[v])) ok = false;
      const auto& pa = a.parent[v];
      const auto& pb = b.parent[perm[v]];
      if (pa.has_value() != pb.has_value()) ok = false;
      else if (pa && perm[*pa] != *pb) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::size_t max_equilateral_through(const UltraSpace& s, std::size_t x, const Rational& r) {
  // Candidates: points at distance exactly r from x pairwise at distance r.
  std::vector<std::size_t> cand;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (j != x && s.d(x, j) == r) cand.push_back(j);
  std::size_t best = 1;
  std::size_t m = cand.size();
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1ull << i)) chosen.push_back(cand[i]);
    bool ok = true;
    for (std::size_t i = 0; i < chosen.size() && ok; ++i)
      for (std::size_t j = i + 1; j < chosen.size() && ok; ++j)
        if (s.d(chosen[i], chosen[j]) != r) ok = false;
    if (ok) best = std::max(best, chosen.size() + 1);
  }
  return best;
}

bool order_convex_by_balls(const UltraSpace& s, const std::vector<std::size_t>& order) {
  std::size_t n = s.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  auto interval = [&](const std::vector<bool>& in) {
    std::optional<std::size_t> lo, hi;
    for (std::size_t i = 0; i < n; ++i)
      if (in[order[i]]) {
        if (!lo) lo = i;
        hi = i;
      }
    if (!lo) return true;
    for (std::size_t i = *lo; i <= *hi; ++i)
      if (!in[order[i]]) return false;
    return true;
  };
  for (std::size_t c = 0; c < n; ++c) {
    for (const Rational& r : s.sort.values) {
      std::vector<bool> closed(n, false), open(n, false);
      for (std::size_t j = 0; j < n; ++j) {
        if (s.d(c, j) <= r) closed[j] = true;
        if (s.d(c, j) < r) open[j] = true;
      }
      if (!interval(closed) || !interval(open)) return false;
    }
  }
  return true;
}

}  // namespace oracle

}  // namespace testsupport
