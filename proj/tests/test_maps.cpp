#include "doctest.h"
#include "support.hpp"
#include "ultra/maps.hpp"

using namespace ultra;

namespace {

UltraSpace chain3() {
  return space_from_matrix({"x", "y", "z"},
                           {{rat(0), rat(1), rat(2)},
                            {rat(1), rat(0), rat(2)},
                            {rat(2), rat(2), rat(0)}});
}

}  // namespace

TEST_CASE("restrict to two points inherits distances") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 1});
  CHECK(r.space.points == std::vector<std::string>{"x", "y"});
  CHECK(r.space.d(0, 1) == rat(1));
  CHECK(r.space.sort == s.sort);
  CHECK(!validate_map(r.inclusion));
  CHECK(is_isometric(r.inclusion));
}

TEST_CASE("restrict to all points is the identity inclusion") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 1, 2});
  CHECK(r.space == s);
  CHECK(r.inclusion.point_map == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("restrict to nothing leaves the sort") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{});
  CHECK(r.space.size() == 0);
  CHECK(r.space.sort == s.sort);
}

TEST_CASE("restrict can shrink the sort to attained values") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 1}, true);
  CHECK(r.space.sort.values == std::vector<Rational>{rat(0), rat(1)});
}

TEST_CASE("restrict by labels matches restrict by indices") {
  UltraSpace s = chain3();
  auto by_label = restrict_space(s, std::vector<std::string>{"z", "x"});
  auto by_index = restrict_space(s, std::vector<std::size_t>{2, 0});
  CHECK(by_label.space == by_index.space);
  CHECK_THROWS_AS(restrict_space(s, std::vector<std::string>{"nope"}), Error);
  CHECK_THROWS_AS(restrict_space(s, std::vector<std::size_t>{0, 0}), Error);
}

TEST_CASE("compose with identity and mismatch") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 2});
  DcMap f = r.inclusion;
  DcMap id = identity_map(s);
  DcMap fid = compose(f, id);
  CHECK(fid.point_map == f.point_map);
  CHECK(fid.dist_map == f.dist_map);
  DcMap id_small = identity_map(r.space);
  CHECK(compose(id_small, f).point_map == f.point_map);
  CHECK_THROWS_AS(compose(f, f), Error);
}

TEST_CASE("two inclusions compose to an inclusion") {
  UltraSpace s = chain3();
  auto r1 = restrict_space(s, std::vector<std::size_t>{0, 1});
  auto r2 = restrict_space(r1.space, std::vector<std::size_t>{1});
  DcMap through = compose(r2.inclusion, r1.inclusion);
  CHECK(!validate_map(through));
  CHECK(is_isometric(through));
  CHECK(through.image_label(0) == "y");
}

TEST_CASE("validate_map rejects broken maps") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 1});
  SUBCASE("not injective") {
    DcMap f = r.inclusion;
    f.point_map = {0, 0};
    auto v = validate_map(f);
    REQUIRE(v);
    CHECK(v->kind == MapDefect::not_injective);
  }
  SUBCASE("zero not fixed") {
    DcMap f = r.inclusion;
    f.dist_map[0] = 1;
    auto v = validate_map(f);
    REQUIRE(v);
    CHECK(v->kind == MapDefect::zero_not_fixed);
  }
  SUBCASE("order broken") {
    DcMap f = r.inclusion;
    std::swap(f.dist_map[1], f.dist_map[2]);
    auto v = validate_map(f);
    REQUIRE(v);
    CHECK(v->kind == MapDefect::not_order_embedding);
  }
  SUBCASE("distances not carried") {
    DcMap f = r.inclusion;
    f.point_map = {0, 2};
    auto v = validate_map(f);
    REQUIRE(v);
    CHECK(v->kind == MapDefect::not_commuting);
  }
}

TEST_CASE("random embeddings validate and compose") {
  testsupport::Rng rng(21);
  auto pool = testsupport::cw_pool(5);
  for (int i = 0; i < 60; ++i) {
    DcMap f = testsupport::random_embedding(rng, 1 + rng.below(5), rng.below(4), pool);
    CHECK(!validate_map(f));
    DcMap g = identity_map(f.target);
    DcMap fg = compose(f, g);
    CHECK(!validate_map(fg));
  }
}

TEST_CASE("isometric inclusion requires a true subspace") {
  UltraSpace s = chain3();
  auto r = restrict_space(s, std::vector<std::size_t>{0, 2});
  DcMap inc = isometric_inclusion(r.space, s);
  CHECK(is_isometric(inc));
  UltraSpace bad = r.space;
  bad.dist[0][1] = bad.dist[1][0] = rat(1);
  bad = checked_space(bad.points, bad.dist, bad.sort);
  CHECK_THROWS_AS(isometric_inclusion(bad, s), Error);
}

TEST_CASE("partial map validation") {
  UltraSpace s = chain3();
  PartialDcMap p = empty_partial(s);
  CHECK(!validate_partial(p));
  p.dom = {0};
  p.rng = {1};
  CHECK(!validate_partial(p));
  p.dom = {0, 1};
  p.rng = {1, 0};
  p.dist_pairs = {{rat(0), rat(0)}, {rat(1), rat(1)}};
  CHECK(!validate_partial(p));
  SUBCASE("distance pair decreasing") {
    p.dist_pairs = {{rat(0), rat(0)}, {rat(1), rat(2)}, {rat(2), rat(1)}};
    CHECK(validate_partial(p));
  }
  SUBCASE("uncovered attained distance") {
    p.dom = {0, 2};
    p.rng = {2, 0};
    CHECK(validate_partial(p));
  }
  SUBCASE("repeated domain point") {
    p.dom = {0, 0};
    p.rng = {0, 1};
    CHECK(validate_partial(p));
  }
}
