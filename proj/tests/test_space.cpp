#include "doctest.h"
#include "support.hpp"
#include "ultra/space.hpp"

using namespace ultra;

namespace {

UltraSpace triple(const Rational& dxy, const Rational& dyz, const Rational& dxz) {
  UltraSpace s;
  s.points = {"x", "y", "z"};
  s.dist = {{Rational(0), dxy, dxz}, {dxy, Rational(0), dyz}, {dxz, dyz, Rational(0)}};
  s.sort = DistanceSet::closure({dxy, dyz, dxz});
  return s;
}

}  // namespace

TEST_CASE("validate accepts ultrametric triples and rejects violations") {
  CHECK(!validate_space(triple(rat(1), rat(2), rat(2))));
  auto v = validate_space(triple(rat(1), rat(2), rat(3)));
  REQUIRE(v);
  CHECK(v->kind == SpaceDefect::triangle_violation);
  // d(x,z) = 3 exceeds max(d(x,y), d(y,z)) = 2, witnessed through y.
  CHECK(v->i == 0);
  CHECK(v->j == 2);
  CHECK(v->k == 1);
}

TEST_CASE("validate accepts the single point and empty space") {
  UltraSpace one;
  one.points = {"x"};
  one.dist = {{Rational(0)}};
  CHECK(!validate_space(one));
  UltraSpace none;
  CHECK(!validate_space(none));
}

TEST_CASE("validate catches structural defects") {
  UltraSpace s = triple(rat(1), rat(2), rat(2));
  SUBCASE("asymmetric") {
    s.dist[0][1] = rat(2);
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::non_symmetric);
  }
  SUBCASE("nonzero diagonal") {
    s.dist[1][1] = rat(1);
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::nonzero_diagonal);
  }
  SUBCASE("zero off diagonal") {
    s.dist[0][1] = s.dist[1][0] = rat(0);
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::zero_off_diagonal);
  }
  SUBCASE("distance missing from sort") {
    s.sort = DistanceSet::closure({rat(1)});
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::entry_not_in_sort);
  }
  SUBCASE("duplicate label") {
    s.points[2] = "x";
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::duplicate_label);
  }
  SUBCASE("ragged matrix") {
    s.dist[2].pop_back();
    auto v = validate_space(s);
    REQUIRE(v);
    CHECK(v->kind == SpaceDefect::bad_shape);
  }
}

TEST_CASE("violation message names the offending points") {
  UltraSpace s = triple(rat(1), rat(2), rat(3));
  auto v = validate_space(s);
  REQUIRE(v);
  std::string msg = v->message(s);
  CHECK(msg.find("x") != std::string::npos);
  CHECK(msg.find("z") != std::string::npos);
}

TEST_CASE("precision detection") {
  UltraSpace two;
  two.points = {"a", "b"};
  two.dist = {{rat(0), rat(1)}, {rat(1), rat(0)}};
  two.sort = DistanceSet::closure({rat(1)});
  CHECK(is_precise(two).precise);

  two.sort = DistanceSet::closure({rat(1), rat(2)});
  auto rep = is_precise(two);
  CHECK(!rep.precise);
  REQUIRE(rep.unattained.size() == 1);
  CHECK(rep.unattained[0] == rat(2));

  UltraSpace none;
  CHECK(is_precise(none).precise);

  none.sort = DistanceSet::closure({rat(1)});
  CHECK(!is_precise(none).precise);
}

TEST_CASE("space_from_matrix infers the attained sort") {
  UltraSpace s = space_from_matrix({"a", "b", "c"},
                                   {{rat(0), rat(1), rat(2)},
                                    {rat(1), rat(0), rat(2)},
                                    {rat(2), rat(2), rat(0)}});
  CHECK(s.sort.values == std::vector<Rational>{rat(0), rat(1), rat(2)});
  CHECK(is_precise(s).precise);
}

TEST_CASE("distance set closure sorts, dedupes, inserts zero") {
  DistanceSet d = DistanceSet::closure({rat(2), rat(1), rat(2)});
  CHECK(d.values == std::vector<Rational>{rat(0), rat(1), rat(2)});
  CHECK(d.contains(rat(1)));
  CHECK(!d.contains(rat(3)));
  CHECK(d.min_positive() == rat(1));
  CHECK(d.index_of(rat(2)) == 2);
  CHECK_THROWS_AS(d.index_of(rat(7)), Error);
  CHECK_THROWS_AS(DistanceSet::closure({rat(-1)}), Error);
}

TEST_CASE("random spaces always validate") {
  testsupport::Rng rng(11);
  auto pool = testsupport::cw_pool(6);
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + rng.below(9);
    UltraSpace s = testsupport::random_space(rng, n, pool, rng.below(3));
    CHECK(!validate_space(s));
  }
}

TEST_CASE("validity is invariant under point relabeling and reordering") {
  testsupport::Rng rng(12);
  auto pool = testsupport::cw_pool(5);
  for (int i = 0; i < 100; ++i) {
    UltraSpace s = testsupport::random_space(rng, 2 + rng.below(6), pool);
    std::vector<std::size_t> perm(s.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    rng.shuffle(perm);
    UltraSpace t;
    t.sort = s.sort;
    t.dist.assign(s.size(), std::vector<Rational>(s.size(), Rational(0)));
    for (std::size_t a = 0; a < s.size(); ++a) {
      t.points.push_back(s.points[perm[a]]);
      for (std::size_t b = 0; b < s.size(); ++b) t.dist[a][b] = s.dist[perm[a]][perm[b]];
    }
    CHECK(!validate_space(t));
  }
}

TEST_CASE("fresh_label avoids collisions") {
  CHECK(fresh_label({"a", "b"}, "c") == "c");
  CHECK(fresh_label({"a", "a_1"}, "a") == "a_2");
}
