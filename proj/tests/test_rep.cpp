#include "ultra/rep.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "ultra/error.hpp"
#include "ultra/rational.hpp"
#include "ultra/space.hpp"
#include "ultra/variants.hpp"

using namespace ultra;
using testsupport::Rng;
using testsupport::cw_pool;
using testsupport::random_space;

namespace {

VElem ve(std::initializer_list<std::pair<Rational, Rational>> pairs) {
  return velem_from_pairs(std::vector<std::pair<Rational, Rational>>(pairs));
}

VElem random_velem(Rng& rng, const std::vector<Rational>& pool) {
  VElem f;
  std::size_t keys = rng.below(4);
  for (std::size_t i = 0; i < keys; ++i) {
    Rational value = Rational(Int(rng.below(7))) - 3;
    if (value == 0) continue;
    f.support[rng.pick(pool)] = value;
  }
  return f;
}

PLAutomorphism random_pl(Rng& rng, const std::vector<Rational>& pool) {
  PLAutomorphism h;
  h.breakpoints.push_back(Rational(0));
  std::vector<Rational> cuts;
  for (std::size_t i = rng.below(3); i > 0; --i) cuts.push_back(rng.pick(pool));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (const Rational& c : cuts) h.breakpoints.push_back(c);
  for (std::size_t i = 0; i < h.breakpoints.size(); ++i) h.slopes.push_back(rng.pick(pool));
  return h;
}

// the finite sample as an abstract space, for reuse of the space validators
UltraSpace induced_space(const std::vector<VElem>& els) {
  std::vector<std::string> points;
  std::vector<std::vector<Rational>> m(els.size(), std::vector<Rational>(els.size(), Rational(0)));
  for (std::size_t i = 0; i < els.size(); ++i) {
    points.push_back("v" + std::to_string(i));
    for (std::size_t j = 0; j < els.size(); ++j) m[i][j] = v_distance(els[i], els[j]);
  }
  return space_from_matrix(points, m);
}

std::vector<VElem> distinct_sample(Rng& rng, const std::vector<Rational>& pool, std::size_t want) {
  std::vector<VElem> out;
  while (out.size() < want) {
    VElem f = random_velem(rng, pool);
    bool fresh = true;
    for (const VElem& g : out) fresh &= !(g == f);
    if (fresh) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("support functions measure their last disagreement") {
  SUBCASE("a single difference is the distance") {
    CHECK(v_distance(ve({{rat(1), rat(2)}}), VElem{}) == rat(1));
  }
  SUBCASE("agreement above masks disagreement below") {
    VElem f = ve({{rat(2), rat(1)}, {rat(1), rat(3)}});
    VElem g = ve({{rat(2), rat(1)}, {rat(1), rat(5)}});
    CHECK(v_distance(f, g) == rat(1));
  }
  SUBCASE("equal elements sit at distance zero") {
    VElem f = ve({{rat(3), rat(-2)}});
    CHECK(v_distance(f, f) == rat(0));
    CHECK(v_distance(VElem{}, VElem{}) == rat(0));
  }
  SUBCASE("a higher key wins even against a larger value") {
    CHECK(v_distance(ve({{rat(2), rat(1)}}), ve({{rat(1), rat(3)}})) == rat(2));
  }
  SUBCASE("finite samples induce valid ultrametric spaces") {
    Rng rng(81);
    auto pool = cw_pool(6);
    for (int it = 0; it < 50; ++it) {
      std::vector<VElem> sample = distinct_sample(rng, pool, 1 + rng.below(5));
      CHECK(!validate_space(induced_space(sample)));
    }
  }
  SUBCASE("stored junk is rejected") {
    VElem bad;
    bad.support[rat(1)] = rat(0);
    CHECK_THROWS_AS(v_distance(bad, VElem{}), Error);
    CHECK_THROWS_AS(velem_from_pairs({{rat(-1), rat(2)}}), Error);
    CHECK_THROWS_AS(velem_from_pairs({{rat(1), rat(2)}, {rat(1), rat(3)}}), Error);
  }
}

TEST_CASE("translations act by isometries") {
  SUBCASE("an element cancels its negation") {
    VElem f = ve({{rat(1), rat(2)}, {rat(3), rat(-1)}});
    CHECK(v_add(f, v_neg(f)) == VElem{});
  }
  SUBCASE("the empty element is neutral") {
    VElem f = ve({{rat(2), rat(5)}});
    CHECK(v_add(f, VElem{}) == f);
    CHECK(v_add(VElem{}, f) == f);
  }
  SUBCASE("partial cancellation cleans up zeros") {
    VElem f = ve({{rat(1), rat(2)}, {rat(2), rat(1)}});
    VElem g = ve({{rat(1), rat(-2)}});
    CHECK(v_add(f, g) == ve({{rat(2), rat(1)}}));
  }
  SUBCASE("translation preserves distances") {
    Rng rng(82);
    auto pool = cw_pool(5);
    for (int it = 0; it < 60; ++it) {
      VElem f = random_velem(rng, pool);
      VElem g = random_velem(rng, pool);
      VElem a = random_velem(rng, pool);
      CHECK(v_distance(v_add(f, a), v_add(g, a)) == v_distance(f, g));
    }
  }
  SUBCASE("a single translation word moves any point to any other") {
    Rng rng(83);
    auto pool = cw_pool(5);
    for (int it = 0; it < 40; ++it) {
      VElem f = random_velem(rng, pool);
      VElem g = random_velem(rng, pool);
      GroupWord w{{Translate{v_add(g, v_neg(f))}}};
      CHECK(word_apply(w, f) == g);
    }
  }
}

TEST_CASE("the value-at-split order is total and convex") {
  SUBCASE("larger value at the split means later") {
    CHECK(v_compare_convex(VElem{}, ve({{rat(1), rat(1)}})) == std::strong_ordering::less);
    CHECK(v_compare_convex(ve({{rat(1), rat(-1)}}), VElem{}) == std::strong_ordering::less);
    CHECK(v_compare_convex(ve({{rat(2), rat(1)}}), ve({{rat(2), rat(1)}})) ==
          std::strong_ordering::equal);
    CHECK(v_compare_convex(ve({{rat(1), rat(1)}}), VElem{}) == std::strong_ordering::greater);
  }
  SUBCASE("sorted samples validate as convex orders") {
    Rng rng(84);
    auto pool = cw_pool(5);
    for (int it = 0; it < 40; ++it) {
      std::vector<VElem> sample = distinct_sample(rng, pool, 1 + rng.below(6));
      std::sort(sample.begin(), sample.end(), [](const VElem& a, const VElem& b) {
        return v_compare_convex(a, b) == std::strong_ordering::less;
      });
      UltraSpace s = induced_space(sample);
      std::vector<std::size_t> order(sample.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      CHECK(!validate_convex_order(ConvexOrder{s, order}));
    }
  }
  SUBCASE("comparison is antisymmetric on distinct elements") {
    Rng rng(85);
    auto pool = cw_pool(5);
    for (int it = 0; it < 60; ++it) {
      VElem f = random_velem(rng, pool);
      VElem g = random_velem(rng, pool);
      auto fg = v_compare_convex(f, g);
      auto gf = v_compare_convex(g, f);
      if (f == g) {
        CHECK(fg == std::strong_ordering::equal);
      } else {
        CHECK(fg != std::strong_ordering::equal);
        CHECK((fg == std::strong_ordering::less) == (gf == std::strong_ordering::greater));
      }
    }
  }
}

TEST_CASE("new elements realize prescribed distances") {
  SUBCASE("above the zero function") {
    VElem w = extension_witness({VElem{}}, {rat(1)});
    CHECK(w == ve({{rat(1), rat(1)}}));
  }
  SUBCASE("copy above the minimum, fresh at it") {
    VElem f = ve({{rat(2), rat(5)}});
    VElem g = VElem{};
    REQUIRE(v_distance(f, g) == rat(2));
    VElem w = extension_witness({f, g}, {rat(1), rat(2)});
    CHECK(w == ve({{rat(2), rat(5)}, {rat(1), rat(1)}}));
    CHECK(v_distance(w, f) == rat(1));
    CHECK(v_distance(w, g) == rat(2));
  }
  SUBCASE("the fresh value skips every competitor") {
    VElem a0 = VElem{};
    VElem a1 = ve({{rat(1), rat(1)}});
    VElem a2 = ve({{rat(1), rat(2)}});
    VElem w = extension_witness({a0, a1, a2}, {rat(1), rat(1), rat(1)});
    CHECK(w == ve({{rat(1), rat(3)}}));
  }
  SUBCASE("a zero fresh value is simply absent") {
    VElem a = ve({{rat(1), rat(4)}});
    VElem w = extension_witness({a}, {rat(1)});
    CHECK(w == VElem{});
  }
  SUBCASE("violating targets name the pair") {
    VElem f = ve({{rat(2), rat(5)}});
    CHECK_THROWS_WITH_AS(extension_witness({f, VElem{}}, {rat(1), rat(1)}),
                         doctest::Contains("two-largest"), Error);
    CHECK_THROWS_WITH_AS(extension_witness({f}, {rat(0)}), doctest::Contains("not positive"),
                         Error);
    CHECK_THROWS_WITH_AS(extension_witness({f}, {rat(1), rat(2)}), doctest::Contains("per element"),
                         Error);
  }
  SUBCASE("the empty task returns the zero function") {
    CHECK(extension_witness({}, {}) == VElem{});
  }
  SUBCASE("random one-point extensions are realized exactly") {
    Rng rng(86);
    auto pool = cw_pool(5);
    for (int it = 0; it < 50; ++it) {
      UltraSpace s = random_space(rng, 2 + rng.below(5), pool, 0);
      std::vector<VElem> images = embed_space(s);
      std::size_t last = s.size() - 1;
      std::vector<VElem> a(images.begin(), images.begin() + last);
      std::vector<Rational> target;
      for (std::size_t i = 0; i < last; ++i) target.push_back(s.d(last, i));
      VElem w = extension_witness(a, target);
      for (std::size_t i = 0; i < last; ++i) CHECK(v_distance(w, a[i]) == target[i]);
    }
  }
}

TEST_CASE("whole spaces embed isometrically") {
  SUBCASE("a pair at distance one") {
    UltraSpace s = space_from_matrix({"a", "b"}, {{rat(0), rat(1)}, {rat(1), rat(0)}});
    std::vector<VElem> images = embed_space(s);
    REQUIRE(images.size() == 2);
    CHECK(images[0] == VElem{});
    CHECK(images[1] == ve({{rat(1), rat(1)}}));
  }
  SUBCASE("an equilateral triangle spreads over values") {
    UltraSpace s = space_from_matrix({"a", "b", "c"},
                                     {{rat(0), rat(1), rat(1)},
                                      {rat(1), rat(0), rat(1)},
                                      {rat(1), rat(1), rat(0)}});
    std::vector<VElem> images = embed_space(s);
    REQUIRE(images.size() == 3);
    CHECK(images[0] == VElem{});
    CHECK(images[1] == ve({{rat(1), rat(1)}}));
    CHECK(images[2] == ve({{rat(1), rat(2)}}));
  }
  SUBCASE("the empty space maps to nothing") {
    CHECK(embed_space(UltraSpace{}).empty());
  }
  SUBCASE("random spaces keep all pairwise distances") {
    Rng rng(87);
    auto pool = cw_pool(6);
    for (int it = 0; it < 40; ++it) {
      UltraSpace s = random_space(rng, 1 + rng.below(7), pool, rng.below(2));
      std::vector<VElem> images = embed_space(s);
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
          CHECK(v_distance(images[i], images[j]) == s.d(i, j));
      CHECK(embed_space(s) == images);  // deterministic
    }
  }
}

TEST_CASE("piecewise-linear maps form a group") {
  PLAutomorphism doubling{{rat(0)}, {rat(2)}};
  PLAutomorphism bent{{rat(0), rat(1)}, {rat(1), rat(2)}};
  SUBCASE("evaluation follows the segments") {
    CHECK(pl_apply(pl_identity(), rat(7, 3)) == rat(7, 3));
    CHECK(pl_apply(doubling, rat(3)) == rat(6));
    CHECK(pl_apply(bent, rat(1, 2)) == rat(1, 2));
    CHECK(pl_apply(bent, rat(1)) == rat(1));
    CHECK(pl_apply(bent, rat(2)) == rat(3));
    CHECK_THROWS_AS(pl_apply(bent, rat(-1)), Error);
  }
  SUBCASE("malformed maps are rejected") {
    CHECK(validate_pl(PLAutomorphism{}).has_value());
    CHECK(validate_pl(PLAutomorphism{{rat(1)}, {rat(1)}}).has_value());
    CHECK(validate_pl(PLAutomorphism{{rat(0), rat(0)}, {rat(1), rat(1)}}).has_value());
    CHECK(validate_pl(PLAutomorphism{{rat(0)}, {rat(0)}}).has_value());
    CHECK(validate_pl(PLAutomorphism{{rat(0)}, {rat(1), rat(2)}}).has_value());
    CHECK(!validate_pl(bent));
  }
  SUBCASE("inversion mirrors the graph") {
    PLAutomorphism half = pl_invert(doubling);
    CHECK(pl_apply(half, rat(6)) == rat(3));
    PLAutomorphism back = pl_invert(bent);
    CHECK(back.breakpoints == std::vector<Rational>{rat(0), rat(1)});
    CHECK(back.slopes == std::vector<Rational>{rat(1), rat(1, 2)});
    CHECK(pl_equal(pl_invert(back), bent));
  }
  SUBCASE("doubling then halving is the identity") {
    CHECK(pl_equal(pl_compose(doubling, pl_invert(doubling)), pl_identity()));
    CHECK(pl_equal(pl_compose(pl_identity(), bent), bent));
    CHECK(pl_equal(pl_compose(bent, pl_identity()), bent));
  }
  SUBCASE("composites refine breakpoints without explosion") {
    PLAutomorphism b{{rat(0), rat(2)}, {rat(1), rat(3)}};
    PLAutomorphism c = pl_compose(bent, b);
    CHECK(c.breakpoints.size() <= 3);
    CHECK(pl_apply(c, rat(3)) == pl_apply(b, pl_apply(bent, rat(3))));
  }
  SUBCASE("composition agrees with evaluation everywhere sampled") {
    Rng rng(88);
    auto pool = cw_pool(6);
    for (int it = 0; it < 60; ++it) {
      PLAutomorphism a = random_pl(rng, pool);
      PLAutomorphism b = random_pl(rng, pool);
      PLAutomorphism ab = pl_compose(a, b);
      for (int probe = 0; probe < 5; ++probe) {
        Rational x = rng.pick(pool) * Rational(Int(rng.below(3)));
        CHECK(pl_apply(ab, x) == pl_apply(b, pl_apply(a, x)));
        CHECK(pl_apply(a, pl_apply(pl_invert(a), x)) == x);
      }
      CHECK(pl_equal(pl_compose(a, pl_invert(a)), pl_identity()));
      PLAutomorphism c = random_pl(rng, pool);
      CHECK(pl_equal(pl_compose(pl_compose(a, b), c), pl_compose(a, pl_compose(b, c))));
    }
  }
}

TEST_CASE("transport along a map rescales distances") {
  PLAutomorphism doubling{{rat(0)}, {rat(2)}};
  SUBCASE("identity transport changes nothing") {
    VElem f = ve({{rat(1), rat(5)}, {rat(3), rat(1)}});
    CHECK(section_apply(pl_identity(), f) == f);
  }
  SUBCASE("keys move, values stay") {
    CHECK(section_apply(doubling, ve({{rat(1), rat(5)}})) == ve({{rat(2), rat(5)}}));
  }
  SUBCASE("the distance law holds on random pairs") {
    Rng rng(89);
    auto pool = cw_pool(5);
    for (int it = 0; it < 80; ++it) {
      PLAutomorphism h = random_pl(rng, pool);
      VElem f = random_velem(rng, pool);
      VElem g = random_velem(rng, pool);
      CHECK(v_distance(section_apply(h, f), section_apply(h, g)) ==
            pl_apply(h, v_distance(f, g)));
    }
  }
  SUBCASE("transport is an action") {
    Rng rng(90);
    auto pool = cw_pool(5);
    for (int it = 0; it < 40; ++it) {
      PLAutomorphism a = random_pl(rng, pool);
      PLAutomorphism b = random_pl(rng, pool);
      VElem f = random_velem(rng, pool);
      CHECK(section_apply(pl_compose(a, b), f) == section_apply(b, section_apply(a, f)));
    }
  }
}

TEST_CASE("generator words act and project") {
  PLAutomorphism doubling{{rat(0)}, {rat(2)}};
  VElem a = ve({{rat(1), rat(2)}});
  SUBCASE("a translation projects to the identity") {
    GroupWord w{{Translate{a}}};
    CHECK(pl_equal(word_project(w), pl_identity()));
    CHECK(word_apply(w, VElem{}) == a);
  }
  SUBCASE("a section keeps its projection") {
    GroupWord w{{Section{doubling}, Translate{a}}};
    CHECK(pl_equal(word_project(w), doubling));
    CHECK(word_apply(w, VElem{}) == a);
    CHECK(word_apply(w, ve({{rat(1), rat(7)}})) == v_add(ve({{rat(2), rat(7)}}), a));
  }
  SUBCASE("the empty word is the identity") {
    GroupWord w;
    CHECK(pl_equal(word_project(w), pl_identity()));
    CHECK(word_apply(w, a) == a);
  }
  SUBCASE("the distance action is the projection") {
    Rng rng(91);
    auto pool = cw_pool(5);
    for (int it = 0; it < 50; ++it) {
      GroupWord w;
      for (std::size_t i = rng.below(5); i > 0; --i) {
        if (rng.below(2))
          w.letters.push_back(Translate{random_velem(rng, pool)});
        else
          w.letters.push_back(Section{random_pl(rng, pool)});
      }
      PLAutomorphism h = word_project(w);
      for (int probe = 0; probe < 4; ++probe) {
        VElem f = random_velem(rng, pool);
        VElem g = random_velem(rng, pool);
        CHECK(v_distance(word_apply(w, f), word_apply(w, g)) ==
              pl_apply(h, v_distance(f, g)));
      }
    }
  }
  SUBCASE("trivial projection means distance-preserving") {
    Rng rng(92);
    auto pool = cw_pool(5);
    for (int it = 0; it < 40; ++it) {
      PLAutomorphism h = random_pl(rng, pool);
      GroupWord w{{Section{h}, Translate{random_velem(rng, pool)},
                   Section{pl_invert(h)}, Translate{random_velem(rng, pool)}}};
      REQUIRE(pl_equal(word_project(w), pl_identity()));
      for (int probe = 0; probe < 4; ++probe) {
        VElem f = random_velem(rng, pool);
        VElem g = random_velem(rng, pool);
        CHECK(v_distance(word_apply(w, f), word_apply(w, g)) == v_distance(f, g));
      }
    }
  }
}

TEST_CASE("words split into an isometry and a section") {
  PLAutomorphism doubling{{rat(0)}, {rat(2)}};
  SUBCASE("a pure section leaves a trivial isometry part") {
    Factorization fac = word_factorize(GroupWord{{Section{doubling}}});
    CHECK(pl_equal(fac.distance_part, doubling));
    Rng rng(93);
    auto pool = cw_pool(5);
    for (int it = 0; it < 10; ++it) {
      VElem f = random_velem(rng, pool);
      CHECK(word_apply(fac.iso_part, f) == f);
    }
  }
  SUBCASE("a pure translation keeps its action and a trivial scale") {
    VElem a = ve({{rat(2), rat(3)}});
    Factorization fac = word_factorize(GroupWord{{Translate{a}}});
    CHECK(pl_equal(fac.distance_part, pl_identity()));
    CHECK(word_apply(fac.iso_part, VElem{}) == a);
  }
  SUBCASE("random words reassemble exactly") {
    Rng rng(94);
    auto pool = cw_pool(5);
    for (int it = 0; it < 30; ++it) {
      GroupWord w;
      for (int letters = 0; letters < 6; ++letters) {
        if (rng.below(2))
          w.letters.push_back(Translate{random_velem(rng, pool)});
        else
          w.letters.push_back(Section{random_pl(rng, pool)});
      }
      Factorization fac = word_factorize(w);
      CHECK(pl_equal(fac.distance_part, word_project(w)));
      CHECK(pl_equal(word_project(fac.iso_part), pl_identity()));
      GroupWord reassembled = fac.iso_part;
      reassembled.letters.push_back(Section{fac.distance_part});
      for (int probe = 0; probe < 8; ++probe) {
        VElem f = random_velem(rng, pool);
        CHECK(word_apply(reassembled, f) == word_apply(w, f));
      }
    }
  }
}

TEST_CASE("partial rescaled matchings extend point by point") {
  Rng rng(95);
  auto pool = cw_pool(5);
  SUBCASE("images built by transport") {
    for (int it = 0; it < 30; ++it) {
      PLAutomorphism h = random_pl(rng, pool);
      std::vector<VElem> dom = distinct_sample(rng, pool, 1 + rng.below(5));
      std::vector<VElem> rng_side;
      for (const VElem& f : dom) rng_side.push_back(section_apply(h, f));
      for (int step = 0; step < 3; ++step) {
        VElem next = random_velem(rng, pool);
        bool seen = false;
        for (const VElem& f : dom) seen |= f == next;
        if (seen) continue;
        std::vector<Rational> target;
        for (const VElem& f : dom) target.push_back(pl_apply(h, v_distance(next, f)));
        VElem image = extension_witness(rng_side, target);
        for (std::size_t i = 0; i < dom.size(); ++i)
          CHECK(v_distance(image, rng_side[i]) == pl_apply(h, v_distance(next, dom[i])));
        dom.push_back(next);
        rng_side.push_back(image);
      }
    }
  }
  SUBCASE("images built by independent re-embedding") {
    for (int it = 0; it < 30; ++it) {
      PLAutomorphism h = random_pl(rng, pool);
      std::vector<VElem> dom = distinct_sample(rng, pool, 2 + rng.below(4));
      UltraSpace scaled = induced_space(dom);
      for (auto& row : scaled.dist)
        for (auto& value : row) value = pl_apply(h, value);
      scaled.sort = DistanceSet{};
      for (const auto& row : scaled.dist)
        scaled.sort = merge(scaled.sort, DistanceSet::closure(row));
      REQUIRE(!validate_space(scaled));
      std::vector<VElem> rng_side = embed_space(scaled);
      for (int step = 0; step < 2; ++step) {
        VElem next = random_velem(rng, pool);
        bool seen = false;
        for (const VElem& f : dom) seen |= f == next;
        if (seen) continue;
        std::vector<Rational> target;
        for (const VElem& f : dom) target.push_back(pl_apply(h, v_distance(next, f)));
        VElem image = extension_witness(rng_side, target);
        for (std::size_t i = 0; i < dom.size(); ++i)
          CHECK(v_distance(image, rng_side[i]) == pl_apply(h, v_distance(next, dom[i])));
        dom.push_back(next);
        rng_side.push_back(image);
      }
    }
  }
}
