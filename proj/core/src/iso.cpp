#include "ultra/iso.hpp"

#include <algorithm>
#include <numeric>

namespace ultra {

namespace {

bool sorts_compatible(const UltraSpace& a, const UltraSpace& b, IsoMode mode) {
  if (mode == IsoMode::dc) return a.sort.size() == b.sort.size();
  return a.sort == b.sort;
}

// The sort bijection is positional in both modes (in isometric mode the sorts
// are equal, which makes positional and value-preserving the same map).
std::vector<std::size_t> positional_dist_map(const UltraSpace& a) {
  std::vector<std::size_t> m(a.sort.size());
  std::iota(m.begin(), m.end(), std::size_t{0});
  return m;
}

}  // namespace

std::optional<DcMap> is_dc_isomorphic(const UltraSpace& a, const UltraSpace& b, IsoMode mode) {
  if (auto v = validate_space(a)) throw Error("invalid-space", v->message(a));
  if (auto v = validate_space(b)) throw Error("invalid-space", v->message(b));
  if (!sorts_compatible(a, b, mode) || a.size() != b.size()) return std::nullopt;

  auto ta = precise_ball_tree(a);
  auto tb = precise_ball_tree(b);
  auto ca = canonical_form(ta.tree, mode);
  auto cb = canonical_form(tb.tree, mode);
  if (ca.bytes != cb.bytes) return std::nullopt;

  DcMap f{a, b, std::vector<std::size_t>(a.size()), positional_dist_map(a)};
  for (std::size_t k = 0; k < ca.order.size(); ++k) {
    auto pa = ta.leaf_point[ca.order[k]];
    auto pb = tb.leaf_point[cb.order[k]];
    if (pa.has_value() != pb.has_value())
      throw Error("internal", "canonical orders misaligned");
    if (pa) f.point_map[*pa] = *pb;
  }
  if (auto v = validate_map(f))
    throw Error("internal", "canonical witness failed validation: " + v->message());
  return f;
}

std::optional<DcMap> is_dc_isomorphic_brute(const UltraSpace& a, const UltraSpace& b,
                                            IsoMode mode) {
  if (!sorts_compatible(a, b, mode) || a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto dist_map = positional_dist_map(a);
  do {
    bool ok = true;
    for (std::size_t i = 0; ok && i < n; ++i)
      for (std::size_t j = i + 1; ok && j < n; ++j) {
        const Rational& mapped = b.sort.values[dist_map[a.sort.index_of(a.dist[i][j])]];
        if (b.dist[perm[i]][perm[j]] != mapped) ok = false;
      }
    if (ok) {
      DcMap f{a, b, perm, dist_map};
      return f;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace ultra
