#include "ultra/fraisse.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "ultra/amalgam.hpp"
#include "ultra/error.hpp"

namespace ultra {
namespace {

// ---------------------------------------------------------------------------
// small shared helpers
// ---------------------------------------------------------------------------

// Advances an ascending k-combination over [0, n); false when exhausted.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] + (k - i) < n) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// All ascending subsets of [0, n) with 1 <= size <= max_size, smallest first.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t max_size, Fn&& fn) {
  for (std::size_t k = 1; k <= max_size && k <= n; ++k) {
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    do {
      fn(c);
    } while (next_combination(c, n));
  }
}

// All assignments of budget values to k slots, odometer order (last slot
// fastest); emits exactly one empty tuple when k == 0.
template <typename Fn>
void for_each_tuple(const std::vector<Rational>& budget, std::size_t k, Fn&& fn) {
  if (k == 0) {
    fn(std::vector<Rational>{});
    return;
  }
  if (budget.empty()) return;
  std::vector<std::size_t> idx(k, 0);
  std::vector<Rational> tuple(k, budget[0]);
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) tuple[i] = budget[idx[i]];
    fn(tuple);
    std::size_t i = k;
    while (i-- > 0) {
      if (++idx[i] < budget.size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

bool contains_index(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool contains_value(const std::vector<Rational>& v, const Rational& r) {
  return std::find(v.begin(), v.end(), r) != v.end();
}

// rank[i] = position of point index i in the order sequence
std::vector<std::size_t> order_ranks(const std::vector<std::size_t>& order) {
  std::vector<std::size_t> rank(order.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
  return rank;
}

// members reordered by their position in `order`
std::vector<std::size_t> trace_order(const std::vector<std::size_t>& order,
                                     const std::vector<std::size_t>& members) {
  std::vector<std::size_t> out;
  out.reserve(members.size());
  for (std::size_t idx : order)
    if (contains_index(members, idx)) out.push_back(idx);
  return out;
}

// Appends one point at the given distances to every existing point.
UltraSpace extend_by_point(const UltraSpace& base, const std::vector<Rational>& distances,
                           const std::string& label) {
  UltraSpace ext = base;
  ext.points.push_back(label);
  for (std::size_t i = 0; i < base.size(); ++i) ext.dist[i].push_back(distances[i]);
  std::vector<Rational> row = distances;
  row.push_back(Rational(0));
  ext.dist.push_back(std::move(row));
  ext.sort = merge(base.sort, DistanceSet::closure(distances));
  return ext;
}

// Structural checks shared by every driver's check_spec; throws "spec-invalid".
void check_spec_shape(const StageState& st, const ExtensionSpec& spec) {
  if (spec.anchor.size() != spec.distances.size())
    throw Error("spec-invalid", "anchor and distance lists differ in length");
  for (std::size_t i = 0; i < spec.anchor.size(); ++i) {
    if (spec.anchor[i] >= st.space.size())
      throw Error("spec-invalid",
                  "anchor index " + std::to_string(spec.anchor[i]) + " is out of range");
    if (i > 0 && spec.anchor[i - 1] >= spec.anchor[i])
      throw Error("spec-invalid", "anchor indices must be strictly increasing");
    if (spec.distances[i] <= Rational(0))
      throw Error("spec-invalid", "extension distances must be positive");
  }
}

// The small extension space an anchored spec describes, over the shrunk
// restriction of the stage to the anchor.
UltraSpace spec_extension_space(const StageState& st, const ExtensionSpec& spec) {
  RestrictResult base = restrict_space(st.space, spec.anchor, /*shrink_sort=*/true);
  return extend_by_point(base.space, spec.distances, fresh_label(base.space.points, "z"));
}

bool anchor_distances_match(const StageState& st, const ExtensionSpec& spec, std::size_t z) {
  if (z >= st.space.size()) return false;
  for (std::size_t i = 0; i < spec.anchor.size(); ++i)
    if (st.space.d(z, spec.anchor[i]) != spec.distances[i]) return false;
  return true;
}

// Distances from one new point to the whole stage: anchor distances are kept
// exactly; every other point x (in index order) receives the forced value
// max(d(z, y), d(x, y)) at the first already-settled y seeing them apart, or
// the least positive value of the working sort when no point separates them.
// This is iterated one-point amalgamation with the settled points treated as
// prior extensions.
std::vector<Rational> chain_distances(const StageState& st, const ExtensionSpec& spec) {
  const UltraSpace& s = st.space;
  const std::size_t n = s.size();
  std::vector<Rational> known(n, Rational(0));
  std::vector<bool> settled(n, false);
  std::vector<std::size_t> dom;
  dom.reserve(n);
  for (std::size_t i = 0; i < spec.anchor.size(); ++i) {
    known[spec.anchor[i]] = spec.distances[i];
    settled[spec.anchor[i]] = true;
    dom.push_back(spec.anchor[i]);
  }
  DistanceSet zsort = DistanceSet::closure(spec.distances);
  for (std::size_t x = 0; x < n; ++x) {
    if (settled[x]) continue;
    bool forced = false;
    Rational value;
    for (std::size_t y : dom) {
      if (known[y] != s.d(x, y)) {
        value = std::max(known[y], s.d(x, y));
        forced = true;
        break;
      }
    }
    if (!forced) {
      DistanceSet merged = merge(s.sort, zsort);
      value = merged.size() > 1 ? merged.values[1] : Rational(1);
    }
    known[x] = value;
    settled[x] = true;
    zsort = merge(zsort, DistanceSet::closure({value}));
    dom.push_back(x);
  }
  return known;
}

StageState append_point(const StageState& st, const std::vector<Rational>& row,
                        const std::string& label, std::vector<std::size_t> order) {
  const UltraSpace& s = st.space;
  std::vector<std::string> points = s.points;
  points.push_back(label);
  std::vector<std::vector<Rational>> dist = s.dist;
  for (std::size_t i = 0; i < s.size(); ++i) dist[i].push_back(row[i]);
  std::vector<Rational> last = row;
  last.push_back(Rational(0));
  dist.push_back(std::move(last));
  DistanceSet sort = merge(s.sort, DistanceSet::closure(row));
  StageState next;
  try {
    next.space = checked_space(std::move(points), std::move(dist), std::move(sort));
  } catch (const Error& e) {
    throw Error("internal", std::string("amalgamated stage failed validation: ") + e.what());
  }
  next.order = std::move(order);
  return next;
}

// ---------------------------------------------------------------------------
// plain driver
// ---------------------------------------------------------------------------

class PlainDriver : public ClassDriver {
 public:
  std::string name() const override { return "plain"; }

  void check_stage(const StageState& st) const override {
    if (auto v = validate_space(st.space))
      throw Error("invalid-stage", v->message(st.space));
    if (!st.order.empty())
      throw Error("invalid-stage", "this class carries no order data");
  }

  void check_spec(const StageState& st, const ExtensionSpec& spec) const override {
    check_spec_shape(st, spec);
    if (spec.position)
      throw Error("spec-invalid", "this class takes no order position");
    UltraSpace ext = spec_extension_space(st, spec);
    if (auto v = validate_space(ext))
      throw Error("spec-invalid", v->message(ext));
  }

  std::vector<ExtensionSpec> enumerate(const StageState& st,
                                       const std::vector<std::size_t>& subset,
                                       const std::vector<Rational>& budget) const override {
    std::vector<ExtensionSpec> out;
    for_each_tuple(budget, subset.size(), [&](const std::vector<Rational>& tuple) {
      ExtensionSpec spec{subset, tuple, std::nullopt};
      UltraSpace ext = spec_extension_space(st, spec);
      if (!validate_space(ext)) out.push_back(std::move(spec));
    });
    return out;
  }

  bool witnessed_by(const StageState& st, const ExtensionSpec& spec,
                    std::size_t z) const override {
    return anchor_distances_match(st, spec, z);
  }

  StageState realize(const StageState& st, const ExtensionSpec& spec,
                     const std::string& label) const override {
    return append_point(st, chain_distances(st, spec), label, {});
  }
};

// ---------------------------------------------------------------------------
// convex driver
// ---------------------------------------------------------------------------

class ConvexDriver : public ClassDriver {
 public:
  std::string name() const override { return "convex"; }

  void check_stage(const StageState& st) const override {
    if (auto v = validate_space(st.space))
      throw Error("invalid-stage", v->message(st.space));
    ConvexOrder co{st.space, st.order};
    std::optional<ConvexViolation> bad;
    try {
      bad = validate_convex_order(co);
    } catch (const Error& e) {
      throw Error("invalid-stage", e.what());
    }
    if (bad) throw Error("invalid-stage", bad->message(st.space));
  }

  void check_spec(const StageState& st, const ExtensionSpec& spec) const override {
    check_spec_shape(st, spec);
    if (!spec.position)
      throw Error("spec-invalid", "this class needs an order position");
    if (*spec.position > spec.anchor.size())
      throw Error("spec-invalid", "order position is out of range");
    ConvexOrder ext = spec_ordered_extension(st, spec);
    if (auto v = validate_space(ext.space))
      throw Error("spec-invalid", v->message(ext.space));
    if (auto v = validate_convex_order(ext))
      throw Error("spec-invalid", v->message(ext.space));
  }

  std::vector<ExtensionSpec> enumerate(const StageState& st,
                                       const std::vector<std::size_t>& subset,
                                       const std::vector<Rational>& budget) const override {
    std::vector<ExtensionSpec> out;
    for_each_tuple(budget, subset.size(), [&](const std::vector<Rational>& tuple) {
      for (std::size_t pos = 0; pos <= subset.size(); ++pos) {
        ExtensionSpec spec{subset, tuple, pos};
        ConvexOrder ext = spec_ordered_extension(st, spec);
        if (validate_space(ext.space)) continue;
        if (validate_convex_order(ext)) continue;
        out.push_back(std::move(spec));
      }
    });
    return out;
  }

  bool witnessed_by(const StageState& st, const ExtensionSpec& spec,
                    std::size_t z) const override {
    if (!anchor_distances_match(st, spec, z)) return false;
    std::vector<std::size_t> rank = order_ranks(st.order);
    std::size_t slot = 0;
    for (std::size_t a : spec.anchor)
      if (rank[a] < rank[z]) ++slot;
    return spec.position && slot == *spec.position;
  }

  StageState realize(const StageState& st, const ExtensionSpec& spec,
                     const std::string& label) const override {
    const UltraSpace& s = st.space;
    const std::size_t n = s.size();
    // accumulated extension: the processed stage points (in chain order) plus
    // the new point, with a convex order extending the stage's trace
    std::vector<std::size_t> dom = spec.anchor;
    std::vector<Rational> known(n, Rational(0));
    for (std::size_t i = 0; i < spec.anchor.size(); ++i)
      known[spec.anchor[i]] = spec.distances[i];

    ConvexOrder acc;
    {
      RestrictResult base = restrict_space(s, dom, /*shrink_sort=*/false);
      acc.space = extend_by_point(base.space, spec.distances, label);
      std::vector<std::size_t> traced = trace_order(st.order, dom);
      std::vector<std::size_t> ord;
      for (std::size_t idx : traced)
        ord.push_back(static_cast<std::size_t>(
            std::find(dom.begin(), dom.end(), idx) - dom.begin()));
      ord.insert(ord.begin() + static_cast<std::ptrdiff_t>(*spec.position), dom.size());
      acc.order = std::move(ord);
    }

    for (std::size_t x = 0; x < n; ++x) {
      if (contains_index(dom, x)) continue;
      RestrictResult base = restrict_space(s, dom, /*shrink_sort=*/false);
      ConvexOrder base_co{base.space, {}};
      for (std::size_t idx : trace_order(st.order, dom))
        base_co.order.push_back(static_cast<std::size_t>(
            std::find(dom.begin(), dom.end(), idx) - dom.begin()));

      std::vector<std::size_t> with_x = dom;
      with_x.push_back(x);
      RestrictResult bext = restrict_space(s, with_x, /*shrink_sort=*/false);
      ConvexOrder ext_b{bext.space, {}};
      for (std::size_t idx : trace_order(st.order, with_x))
        ext_b.order.push_back(static_cast<std::size_t>(
            std::find(with_x.begin(), with_x.end(), idx) - with_x.begin()));

      ConvexAmalgam ca;
      try {
        ca = amalgamate_convex_one_point(base_co, acc, ext_b);
      } catch (const Error& e) {
        throw Error("internal", std::string("amalgamation step failed: ") + e.what());
      }
      known[x] = ca.chosen;

      // rebuild the accumulator over dom + {x} directly from known data
      ConvexOrder next;
      next.space = extend_by_point(bext.space, [&] {
        std::vector<Rational> zrow;
        for (std::size_t idx : with_x) zrow.push_back(known[idx]);
        return zrow;
      }(), label);
      for (std::size_t p : ca.order.order) {
        const std::string& lab = ca.order.space.points[p];
        auto found = next.space.find_point(lab);
        if (!found) throw Error("internal", "amalgam dropped the point " + lab);
        next.order.push_back(*found);
      }
      acc = std::move(next);
      dom.push_back(x);
    }

    std::vector<Rational> row(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) row[i] = known[i];
    // map the accumulated order back to stage indices (new point last = n)
    std::vector<std::size_t> order;
    for (std::size_t p : acc.order) order.push_back(p < dom.size() ? dom[p] : n);
    StageState next = append_point(st, row, label, std::move(order));

    // the stage's own order must sit inside the new one unchanged
    std::vector<std::size_t> traced;
    for (std::size_t idx : next.order)
      if (idx < n) traced.push_back(idx);
    if (traced != st.order)
      throw Error("internal", "amalgamation disturbed the existing order");
    if (auto v = validate_convex_order(ConvexOrder{next.space, next.order}))
      throw Error("internal", "amalgamated order failed validation: " + v->message(next.space));
    return next;
  }

 private:
  // the anchored one-point extension together with its requested order slot
  ConvexOrder spec_ordered_extension(const StageState& st, const ExtensionSpec& spec) const {
    RestrictResult base = restrict_space(st.space, spec.anchor, /*shrink_sort=*/true);
    ConvexOrder ext;
    ext.space = extend_by_point(base.space, spec.distances,
                                fresh_label(base.space.points, "z"));
    for (std::size_t idx : trace_order(st.order, spec.anchor))
      ext.order.push_back(static_cast<std::size_t>(
          std::find(spec.anchor.begin(), spec.anchor.end(), idx) - spec.anchor.begin()));
    std::size_t pos = spec.position.value_or(spec.anchor.size());
    if (pos > ext.order.size()) pos = ext.order.size();
    ext.order.insert(ext.order.begin() + static_cast<std::ptrdiff_t>(pos), spec.anchor.size());
    return ext;
  }
};

// ---------------------------------------------------------------------------
// bounded driver
// ---------------------------------------------------------------------------

class BoundedDriver : public ClassDriver {
 public:
  BoundedDriver(std::function<Bound(const Rational&)> rule, std::string tag)
      : rule_(std::move(rule)), tag_(std::move(tag)) {}

  std::string name() const override { return "bounded"; }
  std::string signature() const override { return "bounded/" + tag_; }

  void check_stage(const StageState& st) const override {
    if (auto v = validate_space(st.space))
      throw Error("invalid-stage", v->message(st.space));
    if (!st.order.empty())
      throw Error("invalid-stage", "this class carries no order data");
    if (auto v = is_delta_bounded(st.space, bounds_for(st.space.sort)))
      throw Error("invalid-stage", v->message(st.space));
  }

  void check_spec(const StageState& st, const ExtensionSpec& spec) const override {
    check_spec_shape(st, spec);
    if (spec.position)
      throw Error("spec-invalid", "this class takes no order position");
    UltraSpace ext = spec_extension_space(st, spec);
    if (auto v = validate_space(ext))
      throw Error("spec-invalid", v->message(ext));
    if (auto v = is_delta_bounded(ext, bounds_for(ext.sort)))
      throw Error("spec-invalid", "the extension breaks the bound: " + v->message(ext));
  }

  std::vector<ExtensionSpec> enumerate(const StageState& st,
                                       const std::vector<std::size_t>& subset,
                                       const std::vector<Rational>& budget) const override {
    std::vector<ExtensionSpec> out;
    for_each_tuple(budget, subset.size(), [&](const std::vector<Rational>& tuple) {
      ExtensionSpec spec{subset, tuple, std::nullopt};
      UltraSpace ext = spec_extension_space(st, spec);
      if (validate_space(ext)) return;
      if (is_delta_bounded(ext, bounds_for(ext.sort))) return;
      out.push_back(std::move(spec));
    });
    return out;
  }

  bool witnessed_by(const StageState& st, const ExtensionSpec& spec,
                    std::size_t z) const override {
    return anchor_distances_match(st, spec, z);
  }

  StageState realize(const StageState& st, const ExtensionSpec& spec,
                     const std::string& label) const override {
    StageState next = append_point(st, chain_distances(st, spec), label, {});
    if (auto v = is_delta_bounded(next.space, bounds_for(next.space.sort)))
      throw Error("internal",
                  "amalgamated stage broke its bound: " + v->message(next.space));
    return next;
  }

 private:
  BoundingMap bounds_for(const DistanceSet& sort) const {
    BoundingMap map;
    map.sort = sort;
    for (std::size_t i = 1; i < sort.size(); ++i) map.delta.push_back(rule_(sort.values[i]));
    return map;
  }

  std::function<Bound(const Rational&)> rule_;
  std::string tag_;
};

}  // namespace

std::shared_ptr<const ClassDriver> plain_driver() {
  static const auto instance = std::make_shared<const PlainDriver>();
  return instance;
}

std::shared_ptr<const ClassDriver> convex_driver() {
  static const auto instance = std::make_shared<const ConvexDriver>();
  return instance;
}

std::shared_ptr<const ClassDriver> bounded_driver(std::function<Bound(const Rational&)> rule,
                                                  std::string config_tag) {
  return std::make_shared<const BoundedDriver>(std::move(rule), std::move(config_tag));
}

std::shared_ptr<const ClassDriver> bounded_driver_uniform(const Bound& b) {
  return bounded_driver([b](const Rational&) { return b; }, "uniform-" + to_string(b));
}

// ---------------------------------------------------------------------------
// LimitBuilder
// ---------------------------------------------------------------------------

LimitBuilder::LimitBuilder(std::shared_ptr<const ClassDriver> driver, std::uint64_t seed,
                           std::size_t subset_bound)
    : driver_(std::move(driver)), seed_(seed), subset_bound_(subset_bound), engine_(seed) {
  if (!driver_) throw Error("bad-input", "a class driver is required");
  if (subset_bound_ == 0) throw Error("bad-input", "the subset bound must be positive");
  history_.push_back(StageSnapshot{0, state_.space.sort});
  enqueue_batch(driver_->enumerate(state_, {}, {}));
}

std::vector<Rational> LimitBuilder::budget() const {
  std::vector<Rational> out;
  out.reserve(budget_level_);
  for (std::size_t i = 0; i < budget_level_; ++i)
    out.push_back(calkin_wilf(static_cast<std::uint64_t>(i)));
  return out;
}

StageState LimitBuilder::stage_at(std::size_t k) const {
  if (k >= history_.size())
    throw Error("bad-input", "no snapshot " + std::to_string(k));
  const StageSnapshot& snap = history_[k];
  StageState st;
  st.space.points.assign(state_.space.points.begin(),
                         state_.space.points.begin() + static_cast<std::ptrdiff_t>(snap.points));
  st.space.dist.resize(snap.points);
  for (std::size_t i = 0; i < snap.points; ++i)
    st.space.dist[i].assign(state_.space.dist[i].begin(),
                            state_.space.dist[i].begin() + static_cast<std::ptrdiff_t>(snap.points));
  st.space.sort = snap.sort;
  for (std::size_t idx : state_.order)
    if (idx < snap.points) st.order.push_back(idx);
  return st;
}

DcMap LimitBuilder::inclusion(std::size_t i, std::size_t j) const {
  if (i > j) throw Error("bad-input", "snapshot order reversed");
  StageState lo = stage_at(i);
  StageState hi = stage_at(j);
  DcMap f;
  f.point_map.resize(lo.space.size());
  for (std::size_t p = 0; p < lo.space.size(); ++p) f.point_map[p] = p;
  for (const Rational& v : lo.space.sort.values)
    f.dist_map.push_back(hi.space.sort.index_of(v));
  f.source = std::move(lo.space);
  f.target = std::move(hi.space);
  return checked_map(std::move(f));
}

void LimitBuilder::step() {
  while (queue_.empty()) release_wave();
  ExtensionSpec spec = std::move(queue_.front());
  queue_.pop_front();
  realize_index(spec);
  ++stages_run_;
}

std::string LimitBuilder::realize(const ExtensionSpec& spec) {
  return state_.space.points[realize_index(spec)];
}

std::size_t LimitBuilder::realize_index(const ExtensionSpec& spec) {
  driver_->check_spec(state_, spec);
  for (std::size_t z = 0; z < state_.space.size(); ++z)
    if (driver_->witnessed_by(state_, spec, z)) return z;
  state_ = driver_->realize(state_, spec, fresh_label(state_.space.points, "p"));
  on_new_point();
  return state_.space.size() - 1;
}

void LimitBuilder::release_wave() {
  if (state_.space.size() == 0)
    throw Error("internal", "budget wave requested before the first point exists");
  ++budget_level_;
  const Rational fresh = calkin_wilf(static_cast<std::uint64_t>(budget_level_ - 1));
  const std::vector<Rational> all = budget();
  std::vector<ExtensionSpec> batch;
  for_each_subset(state_.space.size(), subset_bound_, [&](const std::vector<std::size_t>& subset) {
    for (ExtensionSpec& spec : driver_->enumerate(state_, subset, all))
      if (contains_value(spec.distances, fresh)) batch.push_back(std::move(spec));
  });
  enqueue_batch(std::move(batch));
}

void LimitBuilder::enqueue_batch(std::vector<ExtensionSpec> batch) {
  for (std::size_t i = batch.size(); i > 1; --i)
    std::swap(batch[i - 1], batch[engine_() % i]);
  for (ExtensionSpec& spec : batch) queue_.push_back(std::move(spec));
}

void LimitBuilder::on_new_point() {
  history_.push_back(StageSnapshot{state_.space.size(), state_.space.sort});
  if (budget_level_ == 0) return;
  const std::size_t fresh_point = state_.space.size() - 1;
  const std::vector<Rational> all = budget();
  std::vector<ExtensionSpec> batch;
  for_each_subset(state_.space.size(), subset_bound_, [&](const std::vector<std::size_t>& subset) {
    if (!contains_index(subset, fresh_point)) return;
    for (ExtensionSpec& spec : driver_->enumerate(state_, subset, all))
      batch.push_back(std::move(spec));
  });
  enqueue_batch(std::move(batch));
}

// ---------------------------------------------------------------------------
// free operations
// ---------------------------------------------------------------------------

std::string realize_extension(LimitBuilder& b, const ExtensionSpec& spec) {
  return b.realize(spec);
}

void run_stages(LimitBuilder& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) b.step();
}

ExtensionReport verify_extension_property(LimitBuilder& b, std::size_t size_cutoff,
                                          const std::vector<Rational>& pool) {
  ExtensionReport report;
  const std::size_t frozen = b.stage().size();
  auto examine = [&](const std::vector<std::size_t>& subset) {
    ++report.subsets_checked;
    for (const ExtensionSpec& spec : b.driver().enumerate(b.state(), subset, pool)) {
      ++report.extensions_checked;
      const std::size_t before = b.stage().size();
      b.realize(spec);
      if (b.stage().size() > before)
        ++report.realized;
      else
        ++report.already_present;
    }
  };
  examine({});
  for_each_subset(frozen, size_cutoff, examine);
  return report;
}

namespace {

// the anchored spec matching point `k` of `from` against the paired images
ExtensionSpec matching_spec(const StageState& from, const std::vector<std::size_t>& dom,
                            const std::vector<std::size_t>& img, std::size_t k, bool convex) {
  std::vector<std::pair<std::size_t, Rational>> pairs;
  pairs.reserve(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i)
    pairs.emplace_back(img[i], from.space.d(k, dom[i]));
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ExtensionSpec spec;
  for (auto& [idx, r] : pairs) {
    spec.anchor.push_back(idx);
    spec.distances.push_back(r);
  }
  if (convex) {
    std::vector<std::size_t> rank = order_ranks(from.order);
    std::size_t slot = 0;
    for (std::size_t d : dom)
      if (rank[d] < rank[k]) ++slot;
    spec.position = slot;
  }
  return spec;
}

}  // namespace

DcMap back_and_forth_iso(LimitBuilder& b1, LimitBuilder& b2, std::size_t depth) {
  if (b1.driver().signature() != b2.driver().signature())
    throw Error("driver-mismatch", "the builders grow different classes: " +
                                       b1.driver().signature() + " vs " +
                                       b2.driver().signature());
  const bool convex = b1.driver().name() == "convex";
  std::vector<std::size_t> dom1, dom2;  // paired indices, dom1 in b1, dom2 in b2
  auto match = [&](LimitBuilder& from, LimitBuilder& to, std::vector<std::size_t>& dside,
                   std::vector<std::size_t>& iside, std::size_t k) {
    while (from.stage().size() <= k) from.step();
    if (contains_index(dside, k)) return;
    ExtensionSpec spec = matching_spec(from.state(), dside, iside, k, convex);
    std::size_t image = to.realize_index(spec);
    dside.push_back(k);
    iside.push_back(image);
  };
  for (std::size_t k = 0; k < depth; ++k) {
    match(b1, b2, dom1, dom2, k);
    match(b2, b1, dom2, dom1, k);
  }
  RestrictResult source = restrict_space(b1.stage(), dom1, /*shrink_sort=*/true);
  DcMap f;
  f.point_map = dom2;
  for (const Rational& v : source.space.sort.values)
    f.dist_map.push_back(b2.stage().sort.index_of(v));
  f.source = std::move(source.space);
  f.target = b2.stage();
  return checked_map(std::move(f));
}

PartialDcMap extend_partial_automorphism(LimitBuilder& b, const PartialDcMap& p,
                                         const PLAutomorphism& h,
                                         const std::vector<std::size_t>& targets) {
  if (auto v = validate_partial(p)) throw Error("invalid-partial", *v);
  if (!(p.ambient == b.stage()))
    throw Error("invalid-partial", "the map does not live on the current stage");
  if (auto v = validate_pl(h)) throw Error("bad-input", *v);
  for (const auto& [r, image] : p.dist_pairs)
    if (pl_apply(h, r) != image)
      throw Error("incompatible-h", "the distance action sends " + to_string(r) + " to " +
                                        to_string(pl_apply(h, r)) + " but the map records " +
                                        to_string(image));
  for (std::size_t t : targets)
    if (t >= b.stage().size())
      throw Error("bad-point", "target index " + std::to_string(t) + " is out of range");

  const PLAutomorphism back = pl_invert(h);
  const bool convex = b.driver().name() == "convex";
  std::vector<std::size_t> dom = p.dom;
  std::vector<std::size_t> rng = p.rng;

  auto absorb = [&](std::size_t t, const std::vector<std::size_t>& anchors_src,
                    const std::vector<std::size_t>& anchors_img, const PLAutomorphism& action) {
    std::vector<std::pair<std::size_t, Rational>> pairs;
    for (std::size_t i = 0; i < anchors_src.size(); ++i)
      pairs.emplace_back(anchors_img[i], pl_apply(action, b.stage().d(t, anchors_src[i])));
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& c) { return a.first < c.first; });
    ExtensionSpec spec;
    for (auto& [idx, r] : pairs) {
      spec.anchor.push_back(idx);
      spec.distances.push_back(r);
    }
    if (convex) {
      std::vector<std::size_t> rank = order_ranks(b.state().order);
      std::size_t slot = 0;
      for (std::size_t d : anchors_src)
        if (rank[d] < rank[t]) ++slot;
      spec.position = slot;
    }
    return b.realize_index(spec);
  };

  for (std::size_t t : targets) {
    if (!contains_index(dom, t)) {
      std::size_t image = absorb(t, dom, rng, h);
      dom.push_back(t);
      rng.push_back(image);
    }
    if (!contains_index(rng, t)) {
      std::size_t pre = absorb(t, rng, dom, back);
      dom.push_back(pre);
      rng.push_back(t);
    }
  }

  std::set<std::pair<Rational, Rational>> pairs;
  pairs.emplace(Rational(0), Rational(0));
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = i + 1; j < dom.size(); ++j) {
      const Rational& r = b.stage().d(dom[i], dom[j]);
      pairs.emplace(r, pl_apply(h, r));
    }
  PartialDcMap out;
  out.ambient = b.stage();
  out.dom = std::move(dom);
  out.rng = std::move(rng);
  out.dist_pairs.assign(pairs.begin(), pairs.end());
  if (auto v = validate_partial(out))
    throw Error("internal", "the enlarged map failed validation: " + *v);
  return out;
}

}  // namespace ultra
