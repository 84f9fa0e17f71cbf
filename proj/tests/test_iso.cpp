#include "doctest.h"
#include "support.hpp"
#include "ultra/iso.hpp"

using namespace ultra;

TEST_CASE("two-point spaces at different scales match in dc mode only") {
  UltraSpace a = space_from_matrix({"p", "q"}, {{rat(0), rat(1)}, {rat(1), rat(0)}});
  UltraSpace b = space_from_matrix({"u", "v"}, {{rat(0), rat(7)}, {rat(7), rat(0)}});
  auto wit = is_dc_isomorphic(a, b, IsoMode::dc);
  REQUIRE(wit.has_value());
  CHECK(!validate_map(*wit));
  CHECK(wit->map_distance(rat(1)) == rat(7));
  CHECK(!is_dc_isomorphic(a, b, IsoMode::isometric).has_value());
}

TEST_CASE("equilateral triangle differs from the path-shaped triple") {
  UltraSpace eq = space_from_matrix({"a", "b", "c"},
                                    {{rat(0), rat(1), rat(1)},
                                     {rat(1), rat(0), rat(1)},
                                     {rat(1), rat(1), rat(0)}});
  UltraSpace path = space_from_matrix({"x", "y", "z"},
                                      {{rat(0), rat(1), rat(2)},
                                       {rat(1), rat(0), rat(2)},
                                       {rat(2), rat(2), rat(0)}});
  CHECK(!is_dc_isomorphic(eq, path, IsoMode::dc).has_value());
  CHECK(!is_dc_isomorphic(eq, path, IsoMode::isometric).has_value());
  CHECK(!is_dc_isomorphic_brute(eq, path, IsoMode::dc).has_value());
}

TEST_CASE("every space matches itself under relabeling") {
  testsupport::Rng rng(41);
  auto pool = testsupport::cw_pool(5);
  for (int i = 0; i < 60; ++i) {
    UltraSpace s = testsupport::random_space(rng, 1 + rng.below(6), pool, rng.below(2));
    UltraSpace t = s;
    std::vector<std::size_t> perm(s.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    rng.shuffle(perm);
    for (std::size_t k = 0; k < perm.size(); ++k) {
      t.points[k] = "r" + std::to_string(k);
      for (std::size_t l = 0; l < perm.size(); ++l) t.dist[k][l] = s.dist[perm[k]][perm[l]];
    }
    auto wit = is_dc_isomorphic(s, t, IsoMode::isometric);
    REQUIRE(wit.has_value());
    CHECK(is_isometric(*wit));
  }
}

TEST_CASE("fast and brute isomorphism agree on random pairs") {
  testsupport::Rng rng(42);
  auto pool = testsupport::cw_pool(3);
  for (int i = 0; i < 120; ++i) {
    UltraSpace a = testsupport::random_space(rng, 1 + rng.below(5), pool);
    UltraSpace b = testsupport::random_space(rng, 1 + rng.below(5), pool);
    for (IsoMode mode : {IsoMode::dc, IsoMode::isometric}) {
      bool fast = is_dc_isomorphic(a, b, mode).has_value();
      bool brute = is_dc_isomorphic_brute(a, b, mode).has_value();
      CHECK(fast == brute);
    }
  }
}

TEST_CASE("witnesses validate whenever produced") {
  testsupport::Rng rng(43);
  auto pool = testsupport::cw_pool(4);
  for (int i = 0; i < 60; ++i) {
    UltraSpace a = testsupport::random_space(rng, 1 + rng.below(5), pool);
    UltraSpace b = testsupport::random_space(rng, 1 + rng.below(5), pool);
    for (IsoMode mode : {IsoMode::dc, IsoMode::isometric}) {
      auto wit = is_dc_isomorphic(a, b, mode);
      if (wit) {
        CHECK(!validate_map(*wit));
        CHECK(wit->point_map.size() == a.size());
      }
    }
  }
}

TEST_CASE("sort size mismatch blocks dc isomorphism even with equal matrices") {
  UltraSpace a = space_from_matrix({"p", "q"}, {{rat(0), rat(1)}, {rat(1), rat(0)}});
  UltraSpace b = a;
  b.sort = DistanceSet::closure({rat(1), rat(5)});
  CHECK(!is_dc_isomorphic(a, b, IsoMode::dc).has_value());
  UltraSpace c = a;
  c.sort = DistanceSet::closure({rat(1), rat(5)});
  CHECK(is_dc_isomorphic(b, c, IsoMode::dc).has_value());
}
