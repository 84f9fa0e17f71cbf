// Shared test helpers: a fully specified seeded generator, random space and
// tree builders, and independent oracles that the library code must agree
// with.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ultra/maps.hpp"
#include "ultra/space.hpp"
#include "ultra/tree.hpp"

namespace testsupport {

// xorshift-style generator with explicit reduction so sequences are stable
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return state_ = x;
  }
  // Uniform-ish value in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  ultra::Rational pick(const std::vector<ultra::Rational>& pool) {
    return pool[below(pool.size())];
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

// Default distance pool: the first k values of the canonical enumeration.
std::vector<ultra::Rational> cw_pool(std::size_t k);

// Random valid space grown point by point: each new point attaches to a
// random existing point at a random pool distance, the rest forced by the
// ultrametric maximum rule. extra_sort_values adds unattained sort values.
ultra::UltraSpace random_space(Rng& rng, std::size_t points,
                               const std::vector<ultra::Rational>& pool,
                               std::size_t extra_sort_values = 0);

// Random valid adjacency tree with at most max_nodes nodes (possibly empty).
ultra::LeveledTree random_adjacency_tree(Rng& rng, std::size_t max_nodes);

// Random dc-embedding: source = random space, target extends it by new points
// and the sort is recoded by a random order embedding.
ultra::DcMap random_embedding(Rng& rng, std::size_t source_points, std::size_t extra_points,
                              const std::vector<ultra::Rational>& pool);

namespace oracle {

// Leveled-tree isomorphism by exhaustive node matching (small trees only).
bool trees_isomorphic(const ultra::LeveledTree& a, const ultra::LeveledTree& b,
                      ultra::IsoMode mode);

// Largest set of points pairwise at distance exactly r that contains x.
std::size_t max_equilateral_through(const ultra::UltraSpace& s, std::size_t x,
                                    const ultra::Rational& r);

// Convexity by direct ball enumeration: every open and closed ball around
// every centre must be an interval of the order.
bool order_convex_by_balls(const ultra::UltraSpace& s,
                           const std::vector<std::size_t>& order);

}  // namespace oracle

}  // namespace testsupport
