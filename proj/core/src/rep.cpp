#include "ultra/rep.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "ultra/error.hpp"

namespace ultra {

namespace {

void require_velem(const VElem& f) {
  if (auto v = validate_velem(f)) throw Error("invalid-velem", *v);
}

void require_pl(const PLAutomorphism& h) {
  if (auto v = validate_pl(h)) throw Error("invalid-pl", *v);
}

// images of the breakpoints, accumulated segment by segment
std::vector<Rational> breakpoint_values(const PLAutomorphism& h) {
  std::vector<Rational> vals(h.breakpoints.size());
  vals[0] = Rational(0);
  for (std::size_t i = 1; i < h.breakpoints.size(); ++i)
    vals[i] = vals[i - 1] + h.slopes[i - 1] * (h.breakpoints[i] - h.breakpoints[i - 1]);
  return vals;
}

// index of the segment whose half-open interval [b_i, b_{i+1}) contains x
std::size_t segment_at(const PLAutomorphism& h, const Rational& x) {
  std::size_t lo = 0;
  for (std::size_t i = 1; i < h.breakpoints.size(); ++i)
    if (h.breakpoints[i] <= x) lo = i;
  return lo;
}

}  // namespace

Rational VElem::at(const Rational& r) const {
  auto it = support.find(r);
  return it == support.end() ? Rational(0) : it->second;
}

std::optional<std::string> validate_velem(const VElem& f) {
  for (const auto& [key, value] : f.support) {
    if (!(key > 0)) return "support key " + to_string(key) + " is not positive";
    if (value == 0) return "zero value stored at key " + to_string(key);
  }
  return std::nullopt;
}

VElem velem_from_pairs(const std::vector<std::pair<Rational, Rational>>& pairs) {
  VElem f;
  for (const auto& [key, value] : pairs) {
    if (!f.support.emplace(key, value).second)
      throw Error("invalid-velem", "repeated support key " + to_string(key));
  }
  if (auto v = validate_velem(f)) throw Error("invalid-velem", *v);
  return f;
}

Rational v_distance(const VElem& f, const VElem& g) {
  require_velem(f);
  require_velem(g);
  auto fi = f.support.rbegin();
  auto gi = g.support.rbegin();
  while (fi != f.support.rend() || gi != g.support.rend()) {
    if (gi == g.support.rend() || (fi != f.support.rend() && fi->first > gi->first))
      return (fi++)->first;
    if (fi == f.support.rend() || gi->first > fi->first) return (gi++)->first;
    if (fi->second != gi->second) return fi->first;
    ++fi;
    ++gi;
  }
  return Rational(0);
}

VElem v_add(const VElem& f, const VElem& g) {
  require_velem(f);
  require_velem(g);
  VElem out = f;
  for (const auto& [key, value] : g.support) {
    auto [it, inserted] = out.support.emplace(key, value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0) out.support.erase(it);
    }
  }
  return out;
}

VElem v_neg(const VElem& f) {
  require_velem(f);
  VElem out;
  for (const auto& [key, value] : f.support) out.support.emplace(key, -value);
  return out;
}

std::strong_ordering v_compare_convex(const VElem& f, const VElem& g) {
  Rational r = v_distance(f, g);
  if (r == 0) return std::strong_ordering::equal;
  Rational fv = f.at(r);
  Rational gv = g.at(r);
  return fv < gv ? std::strong_ordering::less : std::strong_ordering::greater;
}

VElem extension_witness(const std::vector<VElem>& a, const std::vector<Rational>& target) {
  if (a.size() != target.size())
    throw Error("inconsistent-target", "one target distance per element is required");
  for (const VElem& f : a) require_velem(f);
  for (const Rational& t : target)
    if (!(t > 0))
      throw Error("inconsistent-target", "target distance " + to_string(t) + " is not positive");
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const Rational d = v_distance(a[i], a[j]);
      const Rational top = std::max({d, target[i], target[j]});
      int hits = (d == top) + (target[i] == top) + (target[j] == top);
      if (hits < 2)
        throw Error("inconsistent-target",
                    "elements " + std::to_string(i) + " and " + std::to_string(j) +
                        " sit at distance " + to_string(d) + " but the targets " +
                        to_string(target[i]) + " and " + to_string(target[j]) +
                        " break the two-largest-equal rule");
    }
  if (a.empty()) return VElem{};

  const Rational r = *std::min_element(target.begin(), target.end());
  std::size_t base = a.size();
  std::set<Rational> competitors;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (target[i] == r) {
      if (base == a.size()) base = i;
      competitors.insert(a[i].at(r));
    }
  Rational fresh(0);
  while (competitors.count(fresh)) fresh += 1;

  VElem out;
  for (const auto& [key, value] : a[base].support)
    if (key > r) out.support.emplace(key, value);
  if (fresh != 0) out.support.emplace(r, fresh);

  for (std::size_t i = 0; i < a.size(); ++i)
    if (v_distance(out, a[i]) != target[i])
      throw Error("internal", "witness construction missed a target distance");
  return out;
}

std::vector<VElem> embed_space(const UltraSpace& x) {
  if (auto v = validate_space(x)) throw Error("invalid-space", v->message(x));
  std::vector<VElem> images;
  images.reserve(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::vector<Rational> target;
    target.reserve(k);
    for (std::size_t i = 0; i < k; ++i) target.push_back(x.d(k, i));
    images.push_back(extension_witness(images, target));
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (v_distance(images[i], images[j]) != x.d(i, j))
        throw Error("internal", "embedding missed a pairwise distance");
  return images;
}

std::optional<std::string> validate_pl(const PLAutomorphism& h) {
  if (h.breakpoints.empty()) return "a map needs at least one segment";
  if (h.breakpoints.size() != h.slopes.size()) return "one slope per breakpoint is required";
  if (h.breakpoints.front() != 0) return "the first breakpoint must be 0";
  for (std::size_t i = 1; i < h.breakpoints.size(); ++i)
    if (!(h.breakpoints[i - 1] < h.breakpoints[i]))
      return "breakpoints must be strictly increasing";
  for (const Rational& s : h.slopes)
    if (!(s > 0)) return "slope " + to_string(s) + " is not positive";
  return std::nullopt;
}

PLAutomorphism pl_identity() { return PLAutomorphism{{Rational(0)}, {Rational(1)}}; }

PLAutomorphism pl_normalize(const PLAutomorphism& h) {
  require_pl(h);
  PLAutomorphism out;
  for (std::size_t i = 0; i < h.breakpoints.size(); ++i) {
    if (!out.slopes.empty() && out.slopes.back() == h.slopes[i]) continue;
    out.breakpoints.push_back(h.breakpoints[i]);
    out.slopes.push_back(h.slopes[i]);
  }
  return out;
}

Rational pl_apply(const PLAutomorphism& h, const Rational& x) {
  require_pl(h);
  if (x < 0) throw Error("bad-input", "the map is only defined for non-negative arguments");
  std::vector<Rational> vals = breakpoint_values(h);
  std::size_t i = segment_at(h, x);
  return vals[i] + h.slopes[i] * (x - h.breakpoints[i]);
}

PLAutomorphism pl_invert(const PLAutomorphism& h) {
  require_pl(h);
  PLAutomorphism out;
  out.breakpoints = breakpoint_values(h);
  out.slopes.reserve(h.slopes.size());
  for (const Rational& s : h.slopes) out.slopes.push_back(1 / s);
  return pl_normalize(out);
}

PLAutomorphism pl_compose(const PLAutomorphism& first, const PLAutomorphism& then) {
  require_pl(first);
  require_pl(then);
  PLAutomorphism back = pl_invert(first);
  std::vector<Rational> cuts = first.breakpoints;
  for (const Rational& b : then.breakpoints) cuts.push_back(pl_apply(back, b));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  PLAutomorphism out;
  out.breakpoints = cuts;
  out.slopes.reserve(cuts.size());
  for (const Rational& c : cuts) {
    Rational mid = pl_apply(first, c);
    out.slopes.push_back(first.slopes[segment_at(first, c)] *
                         then.slopes[segment_at(then, mid)]);
  }
  return pl_normalize(out);
}

bool pl_equal(const PLAutomorphism& a, const PLAutomorphism& b) {
  return pl_normalize(a) == pl_normalize(b);
}

VElem section_apply(const PLAutomorphism& h, const VElem& f) {
  require_pl(h);
  require_velem(f);
  VElem out;
  for (const auto& [key, value] : f.support) out.support.emplace(pl_apply(h, key), value);
  return out;
}

VElem word_apply(const GroupWord& w, const VElem& f) {
  VElem cur = f;
  for (const Letter& letter : w.letters) {
    if (const auto* t = std::get_if<Translate>(&letter))
      cur = v_add(cur, t->shift);
    else
      cur = section_apply(std::get<Section>(letter).part, cur);
  }
  return cur;
}

PLAutomorphism word_project(const GroupWord& w) {
  PLAutomorphism cur = pl_identity();
  for (const Letter& letter : w.letters)
    if (const auto* s = std::get_if<Section>(&letter)) cur = pl_compose(cur, s->part);
  return cur;
}

Factorization word_factorize(const GroupWord& w) {
  Factorization out;
  out.distance_part = word_project(w);
  out.iso_part = w;
  out.iso_part.letters.push_back(Section{pl_invert(out.distance_part)});
  return out;
}

}  // namespace ultra
