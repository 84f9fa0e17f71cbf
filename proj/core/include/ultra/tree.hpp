// Tree representations of finite ultrametric spaces.
//
// Meet trees: nodes are the distinct closed balls B(a, d(a,b)) ordered by
// reverse inclusion, levelled by diameter; points are recovered as leaves and
// distances as the level of the meet.
//
// Adjacency trees: nodes are the balls B(x,y) = { z : d(x,z) < d(x,y) },
// levelled by radius (the least distance to the complement). Two nodes are
// adjacent when they are siblings; the adjacency envelope of an incomparable
// pair recovers distances.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultra/maps.hpp"
#include "ultra/space.hpp"

namespace ultra {

enum class TreeKind { meet, adjacency };

// Parent links point from a ball to the smallest ball properly containing it;
// levels strictly decrease from parent to child (see validate_tree).
struct LeveledTree {
  TreeKind kind = TreeKind::meet;
  std::vector<std::optional<std::size_t>> parent;  // nullopt = root
  std::vector<Rational> level;
  DistanceSet level_sort;

  std::size_t size() const { return parent.size(); }
  std::vector<std::vector<std::size_t>> children() const;
  std::vector<std::size_t> roots() const;
  // Chain of nodes from a root down to v, inclusive.
  std::vector<std::size_t> root_chain(std::size_t v) const;

  bool operator==(const LeveledTree& other) const = default;
};

// Kind-specific shape rules:
//   both:      parents acyclic, levels in level_sort, child level < parent level
//   meet:      single root (unless empty), leaves at level 0, inner nodes >= 2 children
//   adjacency: no level-0 node, every node has a sibling (roots included),
//              siblings share their level
std::optional<std::string> validate_tree(const LeveledTree& t);

struct MeetTreeResult {
  LeveledTree tree;
  std::vector<std::vector<std::string>> extents;          // node -> sorted labels
  std::vector<std::optional<std::size_t>> leaf_point;     // node -> point index
};

MeetTreeResult precise_ball_tree(const UltraSpace& s);

// Points are the level-0 leaves (labelled n<id>), distances the level of the
// meet, sort the level sort. Requires a valid meet tree.
UltraSpace space_of_leaves(const LeveledTree& t);

struct AdjacencyForest {
  LeveledTree tree;
  std::vector<std::vector<std::string>> extents;  // node -> sorted labels

  bool operator==(const AdjacencyForest& other) const = default;
};

// Empty forest for spaces with fewer than two points.
AdjacencyForest adjacency_ball_tree(const UltraSpace& s);

// Points are the leaves (labelled n<id>), distances the level of the
// adjacency envelope, sort the level sort. Requires a valid adjacency tree.
UltraSpace space_from_adjacency_tree(const LeveledTree& t);

// The deepest sibling pair (e, e') with e above-or-equal t and e' above-or-
// equal t'; throws Error(kind="comparable-nodes") on comparable inputs.
std::pair<std::size_t, std::size_t> adjacency_envelope(const LeveledTree& t,
                                                       std::size_t a, std::size_t b);

// Structure-preserving node map between adjacency forests: injective, order-
// and adjacency-preserving, carrying levels along an embedding of level sorts.
struct BallMap {
  AdjacencyForest source;
  AdjacencyForest target;
  std::vector<std::size_t> node_map;
  std::vector<std::size_t> level_map;  // source level_sort position -> target position
};

std::optional<std::string> validate_ball_map(const BallMap& g);

// Functor action on a dc-embedding: B(x,y) -> B(f x, f y).
BallMap ball_map_of(const DcMap& f);

// Reconstructs a dc-embedding from a ball map between the computed adjacency
// forests of X and Y: each point goes to the least-label point of the image
// of its singleton ball. Requires X to have at least two points; throws
// Error(kind="not-a-ball-map") when g is invalid or not over these forests.
DcMap lift_ball_map(const BallMap& g, const UltraSpace& x, const UltraSpace& y);

enum class IsoMode { dc, isometric };

// Canonical bytes deciding leveled-tree isomorphism: equal bytes iff the trees
// are isomorphic (levels compared by sort position in dc mode, by exact value
// in isometric mode; the level sort itself is folded in the same way).
// `order` lists the nodes in canonical traversal order, so two trees with
// equal bytes are matched node-by-node by aligning their orders.
struct CanonicalForm {
  std::string bytes;
  std::vector<std::size_t> order;
};

CanonicalForm canonical_form(const LeveledTree& t, IsoMode mode);

}  // namespace ultra
