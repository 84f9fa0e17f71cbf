#include "ultra/tree.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ultra {

std::vector<std::vector<std::size_t>> LeveledTree::children() const {
  std::vector<std::vector<std::size_t>> ch(size());
  for (std::size_t v = 0; v < size(); ++v)
    if (parent[v]) ch[*parent[v]].push_back(v);
  return ch;
}

std::vector<std::size_t> LeveledTree::roots() const {
  std::vector<std::size_t> rs;
  for (std::size_t v = 0; v < size(); ++v)
    if (!parent[v]) rs.push_back(v);
  return rs;
}

std::vector<std::size_t> LeveledTree::root_chain(std::size_t v) const {
  std::vector<std::size_t> chain;
  for (std::optional<std::size_t> cur = v; cur; cur = parent[*cur]) chain.push_back(*cur);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::optional<std::string> validate_tree(const LeveledTree& t) {
  const std::size_t n = t.size();
  if (t.level.size() != n) return std::string("level vector has wrong length");
  {
    const auto& sv = t.level_sort.values;
    if (sv.empty() || sv.front() != 0) return std::string("level sort must start at 0");
    for (std::size_t i = 1; i < sv.size(); ++i)
      if (!(sv[i - 1] < sv[i])) return std::string("level sort not strictly increasing");
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (t.parent[v] && *t.parent[v] >= n) return std::string("parent index out of range");
    if (t.parent[v] && *t.parent[v] == v) return std::string("node is its own parent");
    if (!t.level_sort.contains(t.level[v]))
      return "level " + to_string(t.level[v]) + " outside the level sort";
  }
  // Acyclicity: walk up with a step budget.
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t steps = 0;
    for (std::optional<std::size_t> cur = v; cur; cur = t.parent[*cur])
      if (++steps > n) return std::string("parent links contain a cycle");
  }
  for (std::size_t v = 0; v < n; ++v)
    if (t.parent[v] && !(t.level[v] < t.level[*t.parent[v]]))
      return std::string("child level not below parent level");

  auto ch = t.children();
  if (t.kind == TreeKind::meet) {
    if (n > 0 && t.roots().size() != 1) return std::string("meet tree needs a single root");
    for (std::size_t v = 0; v < n; ++v) {
      if (ch[v].empty() && t.level[v] != 0) return std::string("meet-tree leaf above level 0");
      if (ch[v].size() == 1) return std::string("inner node with a single child");
    }
  } else {
    for (std::size_t v = 0; v < n; ++v)
      if (t.level[v] == 0) return std::string("adjacency tree node at level 0");
    auto rs = t.roots();
    if (n > 0 && rs.size() < 2) return std::string("adjacency tree root without a sibling");
    for (std::size_t i = 1; i < rs.size(); ++i)
      if (t.level[rs[i]] != t.level[rs[0]]) return std::string("roots at different levels");
    for (std::size_t v = 0; v < n; ++v) {
      if (ch[v].size() == 1) return std::string("adjacency tree node without a sibling");
      for (std::size_t i = 1; i < ch[v].size(); ++i)
        if (t.level[ch[v][i]] != t.level[ch[v][0]])
          return std::string("siblings at different levels");
    }
  }
  return std::nullopt;
}

namespace {

// Laminar family of extents (index vectors) -> parent links by minimal strict
// containment. Extents must be distinct and sorted ascending.
std::vector<std::optional<std::size_t>> laminar_parents(
    const std::vector<std::vector<std::size_t>>& extents) {
  const std::size_t n = extents.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return extents[a].size() < extents[b].size();
  });
  auto contains = [&](std::size_t big, std::size_t small) {
    return std::includes(extents[big].begin(), extents[big].end(),
                         extents[small].begin(), extents[small].end());
  };
  std::vector<std::optional<std::size_t>> parent(n);
  for (std::size_t oi = 0; oi < n; ++oi) {
    std::size_t v = order[oi];
    for (std::size_t oj = oi + 1; oj < n; ++oj) {
      std::size_t w = order[oj];
      if (extents[w].size() > extents[v].size() && contains(w, v)) {
        parent[v] = w;
        break;
      }
    }
  }
  return parent;
}

std::vector<std::string> label_extent(const UltraSpace& s, const std::vector<std::size_t>& e) {
  std::vector<std::string> out;
  out.reserve(e.size());
  for (auto i : e) out.push_back(s.points[i]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

MeetTreeResult precise_ball_tree(const UltraSpace& s) {
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
  std::set<std::vector<std::size_t>> seen;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      std::vector<std::size_t> extent;
      for (std::size_t z = 0; z < s.size(); ++z)
        if (s.dist[a][z] <= s.dist[a][b]) extent.push_back(z);
      seen.insert(std::move(extent));
    }
  std::vector<std::vector<std::size_t>> extents(seen.begin(), seen.end());

  MeetTreeResult res;
  res.tree.kind = TreeKind::meet;
  res.tree.level_sort = s.sort;
  res.tree.parent = laminar_parents(extents);
  res.tree.level.reserve(extents.size());
  res.extents.reserve(extents.size());
  res.leaf_point.resize(extents.size());
  for (std::size_t v = 0; v < extents.size(); ++v) {
    Rational diam(0);
    for (std::size_t i = 0; i < extents[v].size(); ++i)
      for (std::size_t j = i + 1; j < extents[v].size(); ++j)
        diam = std::max(diam, s.dist[extents[v][i]][extents[v][j]]);
    res.tree.level.push_back(diam);
    res.extents.push_back(label_extent(s, extents[v]));
    if (extents[v].size() == 1) res.leaf_point[v] = extents[v][0];
  }
  return res;
}

UltraSpace space_of_leaves(const LeveledTree& t) {
  if (t.kind != TreeKind::meet) throw Error("malformed-tree", "expected a meet tree");
  if (auto v = validate_tree(t)) throw Error("malformed-tree", *v);
  auto ch = t.children();
  std::vector<std::size_t> leaves;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (ch[v].empty()) leaves.push_back(v);

  std::vector<std::vector<std::size_t>> chains;
  chains.reserve(leaves.size());
  for (auto leaf : leaves) chains.push_back(t.root_chain(leaf));

  UltraSpace s;
  s.sort = t.level_sort;
  for (auto leaf : leaves) s.points.push_back("n" + std::to_string(leaf));
  s.dist.assign(leaves.size(), std::vector<Rational>(leaves.size(), Rational(0)));
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      // Meet = last common node of the two root chains.
      std::size_t k = 0;
      while (k < chains[i].size() && k < chains[j].size() && chains[i][k] == chains[j][k]) ++k;
      if (k == 0) throw Error("malformed-tree", "leaves without a meet");
      const Rational& d = t.level[chains[i][k - 1]];
      s.dist[i][j] = d;
      s.dist[j][i] = d;
    }
  if (auto v = validate_space(s))
    throw Error("malformed-tree", "leaf space invalid: " + v->message(s));
  return s;
}

AdjacencyForest adjacency_ball_tree(const UltraSpace& s) {
  if (auto v = validate_space(s)) throw Error("invalid-space", v->message(s));
  AdjacencyForest f;
  f.tree.kind = TreeKind::adjacency;
  f.tree.level_sort = s.sort;
  if (s.size() < 2) return f;

  std::map<std::vector<std::size_t>, Rational> balls;  // extent -> radius
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b) continue;
      std::vector<std::size_t> extent;
      for (std::size_t z = 0; z < s.size(); ++z)
        if (s.dist[a][z] < s.dist[a][b]) extent.push_back(z);
      balls.emplace(std::move(extent), s.dist[a][b]);
    }
  std::vector<std::vector<std::size_t>> extents;
  extents.reserve(balls.size());
  for (auto& [e, r] : balls) {
    extents.push_back(e);
    f.tree.level.push_back(r);
    f.extents.push_back(label_extent(s, e));
  }
  f.tree.parent = laminar_parents(extents);
  return f;
}

std::pair<std::size_t, std::size_t> adjacency_envelope(const LeveledTree& t,
                                                       std::size_t a, std::size_t b) {
  if (a >= t.size() || b >= t.size()) throw Error("bad-node", "node index out of range");
  auto ca = t.root_chain(a);
  auto cb = t.root_chain(b);
  std::size_t k = 0;
  while (k < ca.size() && k < cb.size() && ca[k] == cb[k]) ++k;
  if (k == ca.size() || k == cb.size())
    throw Error("comparable-nodes", "nodes are comparable in the tree order");
  return {ca[k], cb[k]};
}

UltraSpace space_from_adjacency_tree(const LeveledTree& t) {
  if (t.kind != TreeKind::adjacency) throw Error("malformed-tree", "expected an adjacency tree");
  if (auto v = validate_tree(t)) throw Error("malformed-tree", *v);
  auto ch = t.children();
  std::vector<std::size_t> leaves;
  for (std::size_t v = 0; v < t.size(); ++v)
    if (ch[v].empty()) leaves.push_back(v);

  UltraSpace s;
  s.sort = t.level_sort;
  for (auto leaf : leaves) s.points.push_back("n" + std::to_string(leaf));
  s.dist.assign(leaves.size(), std::vector<Rational>(leaves.size(), Rational(0)));
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      // The distance is the shared level of the first diverging pair.
      auto [p, q] = adjacency_envelope(t, leaves[i], leaves[j]);
      (void)q;
      s.dist[i][j] = t.level[p];
      s.dist[j][i] = t.level[p];
    }
  if (auto v = validate_space(s))
    throw Error("malformed-tree", "leaf space invalid: " + v->message(s));
  return s;
}

std::optional<std::string> validate_ball_map(const BallMap& g) {
  if (auto v = validate_tree(g.source.tree)) return "source tree invalid: " + *v;
  if (auto v = validate_tree(g.target.tree)) return "target tree invalid: " + *v;
  if (g.source.tree.kind != TreeKind::adjacency || g.target.tree.kind != TreeKind::adjacency)
    return std::string("ball maps connect adjacency trees");
  const std::size_t n = g.source.tree.size();
  if (g.node_map.size() != n) return std::string("node map has wrong length");
  if (g.level_map.size() != g.source.tree.level_sort.size())
    return std::string("level map has wrong length");
  for (auto v : g.node_map)
    if (v >= g.target.tree.size()) return std::string("node map image out of range");
  for (auto v : g.level_map)
    if (v >= g.target.tree.level_sort.size()) return std::string("level map image out of range");

  if (!g.level_map.empty() && g.level_map[0] != 0)
    return std::string("level map does not fix 0");
  for (std::size_t i = 1; i < g.level_map.size(); ++i)
    if (!(g.level_map[i - 1] < g.level_map[i]))
      return std::string("level map is not strictly increasing");

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (g.node_map[a] == g.node_map[b]) return std::string("node map is not injective");

  auto mapped_level = [&](std::size_t v) -> const Rational& {
    std::size_t pos = g.source.tree.level_sort.index_of(g.source.tree.level[v]);
    return g.target.tree.level_sort.values[g.level_map[pos]];
  };
  for (std::size_t v = 0; v < n; ++v)
    if (g.target.tree.level[g.node_map[v]] != mapped_level(v))
      return std::string("levels are not carried along the level map");

  // Order preservation: parent edges map to ancestor relations.
  auto is_ancestor = [&](std::size_t up, std::size_t down) {
    for (std::optional<std::size_t> cur = down; cur; cur = g.target.tree.parent[*cur])
      if (*cur == up) return true;
    return false;
  };
  for (std::size_t v = 0; v < n; ++v)
    if (g.source.tree.parent[v] &&
        !is_ancestor(g.node_map[*g.source.tree.parent[v]], g.node_map[v]))
      return std::string("tree order is not preserved");

  // Adjacency preservation: siblings map to siblings.
  auto sib = [](const LeveledTree& t, std::size_t a, std::size_t b) {
    return a != b && t.parent[a] == t.parent[b];
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (sib(g.source.tree, a, b) && !sib(g.target.tree, g.node_map[a], g.node_map[b]))
        return std::string("adjacency is not preserved");
  return std::nullopt;
}

BallMap ball_map_of(const DcMap& f) {
  if (auto v = validate_map(f)) throw Error("invalid-map", v->message());
  BallMap g;
  g.source = adjacency_ball_tree(f.source);
  g.target = adjacency_ball_tree(f.target);
  g.level_map = f.dist_map;
  g.node_map.reserve(g.source.tree.size());
  for (std::size_t v = 0; v < g.source.tree.size(); ++v) {
    // Image ball of B(x, y): centre f(x), radius the mapped level.
    const auto& extent = g.source.extents[v];
    std::size_t x = *f.source.find_point(extent.front());
    std::size_t fx = f.point_map[x];
    const Rational& r = f.map_distance(g.source.tree.level[v]);
    std::vector<std::string> image;
    for (std::size_t z = 0; z < f.target.size(); ++z)
      if (f.target.dist[fx][z] < r) image.push_back(f.target.points[z]);
    std::sort(image.begin(), image.end());
    auto it = std::find(g.target.extents.begin(), g.target.extents.end(), image);
    if (it == g.target.extents.end())
      throw Error("invalid-map", "image extent is not a ball of the target");
    g.node_map.push_back(static_cast<std::size_t>(it - g.target.extents.begin()));
  }
  return g;
}

DcMap lift_ball_map(const BallMap& g, const UltraSpace& x, const UltraSpace& y) {
  if (x.size() < 2) throw Error("not-a-ball-map", "source space needs at least two points");
  if (auto v = validate_ball_map(g)) throw Error("not-a-ball-map", *v);
  if (!(g.source == adjacency_ball_tree(x)) || !(g.target == adjacency_ball_tree(y)))
    throw Error("not-a-ball-map", "ball map is not over the adjacency trees of these spaces");

  DcMap f{x, y, {}, g.level_map};
  f.point_map.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::string> singleton{x.points[i]};
    auto it = std::find(g.source.extents.begin(), g.source.extents.end(), singleton);
    if (it == g.source.extents.end())
      throw Error("not-a-ball-map", "missing singleton ball for " + x.points[i]);
    std::size_t node = static_cast<std::size_t>(it - g.source.extents.begin());
    const auto& image = g.target.extents[g.node_map[node]];
    f.point_map.push_back(*y.find_point(image.front()));
  }
  if (auto v = validate_map(f))
    throw Error("not-a-ball-map", "lift is not a dc-embedding: " + v->message());
  return f;
}

CanonicalForm canonical_form(const LeveledTree& t, IsoMode mode) {
  if (auto v = validate_tree(t)) throw Error("malformed-tree", *v);
  auto level_key = [&](std::size_t v) {
    if (mode == IsoMode::dc) return std::to_string(t.level_sort.index_of(t.level[v]));
    return to_string(t.level[v]);
  };

  auto ch = t.children();
  std::vector<std::string> enc(t.size());
  // Bottom-up: process nodes by decreasing depth.
  std::vector<std::size_t> depth(t.size(), 0);
  for (std::size_t v = 0; v < t.size(); ++v) depth[v] = t.root_chain(v).size();
  std::vector<std::size_t> by_depth(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) by_depth[v] = v;
  std::sort(by_depth.begin(), by_depth.end(),
            [&](std::size_t a, std::size_t b) { return depth[a] > depth[b]; });
  for (auto v : by_depth) {
    std::vector<std::string> parts;
    parts.reserve(ch[v].size());
    for (auto c : ch[v]) parts.push_back(enc[c]);
    std::sort(parts.begin(), parts.end());
    std::string e = "(" + level_key(v) + "|";
    for (auto& p : parts) e += p;
    e += ")";
    enc[v] = std::move(e);
  }

  CanonicalForm form;
  form.bytes = t.kind == TreeKind::meet ? "meet;" : "adj;";
  if (mode == IsoMode::dc) {
    form.bytes += "#" + std::to_string(t.level_sort.size()) + ";";
  } else {
    form.bytes += "sort=";
    for (const auto& v : t.level_sort.values) form.bytes += to_string(v) + ",";
    form.bytes += ";";
  }

  // Canonical traversal: roots and children visited in encoding order, ties
  // broken by node id (equal encodings are isomorphic subtrees).
  auto sorted_by_enc = [&](std::vector<std::size_t> vs) {
    std::sort(vs.begin(), vs.end(), [&](std::size_t a, std::size_t b) {
      return enc[a] != enc[b] ? enc[a] < enc[b] : a < b;
    });
    return vs;
  };
  std::vector<std::size_t> stack = sorted_by_enc(t.roots());
  std::reverse(stack.begin(), stack.end());
  for (auto r : sorted_by_enc(t.roots())) form.bytes += enc[r];
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    form.order.push_back(v);
    auto kids = sorted_by_enc(ch[v]);
    std::reverse(kids.begin(), kids.end());
    for (auto c : kids) stack.push_back(c);
  }
  return form;
}

}  // namespace ultra
