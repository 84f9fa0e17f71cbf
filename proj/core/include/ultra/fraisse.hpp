#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ultra/maps.hpp"
#include "ultra/rational.hpp"
#include "ultra/rep.hpp"
#include "ultra/space.hpp"
#include "ultra/variants.hpp"

namespace ultra {

// A one-point extension request over a subset of a stage: the new point is to
// sit at distances[i] from the point with index anchor[i]. For the convex
// class, position says where the new point lands in the anchor's induced
// order (0 = before everything, anchor.size() = after everything); the other
// classes reject a position.
struct ExtensionSpec {
  std::vector<std::size_t> anchor;   // strictly increasing stage indices
  std::vector<Rational> distances;   // parallel to anchor, all positive
  std::optional<std::size_t> position;

  bool operator==(const ExtensionSpec& other) const = default;
};

// A growing stage with its class decorations: the convex class maintains a
// linear order of the stage's point indices; the other classes leave it
// empty.
struct StageState {
  UltraSpace space;
  std::vector<std::size_t> order;
};

// One growth class: how to enumerate one-point extensions, recognize
// witnesses, validate specs, and amalgamate a realized point past the rest
// of a stage. Instances are stateless and shared.
class ClassDriver {
 public:
  virtual ~ClassDriver() = default;

  virtual std::string name() const = 0;
  // distinguishes differently configured drivers of the same name
  virtual std::string signature() const { return name(); }

  // Throws Error("invalid-stage") when the decorated stage is broken.
  virtual void check_stage(const StageState& st) const = 0;

  // Throws Error("spec-invalid") when the spec is malformed or the extension
  // it describes falls outside the class.
  virtual void check_spec(const StageState& st, const ExtensionSpec& spec) const = 0;

  // Every valid one-point extension of the given subset whose new distances
  // are drawn from budget. Deterministic order; every emitted spec passes
  // check_spec.
  virtual std::vector<ExtensionSpec> enumerate(const StageState& st,
                                               const std::vector<std::size_t>& subset,
                                               const std::vector<Rational>& budget) const = 0;

  // Does the existing stage point z realize the spec exactly?
  virtual bool witnessed_by(const StageState& st, const ExtensionSpec& spec,
                            std::size_t z) const = 0;

  // Grows the stage by one point realizing the (already checked) spec, the
  // new point appended last with the given label. Distances to non-anchor
  // points are produced by running this class's one-point amalgamation
  // against each of them in index order. Existing distances and the
  // existing order trace are never altered.
  virtual StageState realize(const StageState& st, const ExtensionSpec& spec,
                             const std::string& label) const = 0;
};

// The unrestricted class of finite spaces.
std::shared_ptr<const ClassDriver> plain_driver();

// Convexly ordered spaces; order data lives in StageState::order.
std::shared_ptr<const ClassDriver> convex_driver();

// Spaces whose equilateral numbers respect a bound rule r -> delta(r); the
// rule must return a bound for every positive rational.
std::shared_ptr<const ClassDriver> bounded_driver(std::function<Bound(const Rational&)> rule,
                                                  std::string config_tag);

// Convenience: the same bound at every radius.
std::shared_ptr<const ClassDriver> bounded_driver_uniform(const Bound& b);

// Compact chain history: stages only ever append points and enlarge the
// sort, so an earlier stage is the point-prefix of the current one plus its
// recorded sort (and, for the convex class, the traced order prefix).
struct StageSnapshot {
  std::size_t points;
  DistanceSet sort;
};

// Grows one Fraissé chain for a driver. All randomness flows from the seed:
// a rebuilt instance given the same seed and the same call sequence passes
// through identical states. Tasks are kept in a fair FIFO queue; when the
// queue runs dry the next value of the canonical rational enumeration is
// released and every subset up to subset_bound is re-examined against it.
class LimitBuilder {
 public:
  LimitBuilder(std::shared_ptr<const ClassDriver> driver, std::uint64_t seed,
               std::size_t subset_bound = 3);

  const ClassDriver& driver() const { return *driver_; }
  const std::shared_ptr<const ClassDriver>& driver_ptr() const { return driver_; }
  const UltraSpace& stage() const { return state_.space; }
  const StageState& state() const { return state_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t subset_bound() const { return subset_bound_; }
  std::size_t stages_run() const { return stages_run_; }
  std::size_t queue_size() const { return queue_.size(); }
  // how many values of the canonical rational enumeration are released
  std::size_t budget_level() const { return budget_level_; }
  std::vector<Rational> budget() const;
  const std::deque<ExtensionSpec>& queue() const { return queue_; }
  const std::vector<StageSnapshot>& history() const { return history_; }

  // The stage as it stood after snapshot k (0 = the initial empty stage).
  StageState stage_at(std::size_t k) const;
  // The recorded isometric inclusion between two snapshots, i <= j.
  DcMap inclusion(std::size_t i, std::size_t j) const;

  // Consumes one task: releases budget waves until the queue is nonempty,
  // then dequeues and realizes (or witnesses) the front task.
  void step();

  // Used by the free operations below; grows the stage by one point unless a
  // witness exists. Returns the witnessing or new label.
  std::string realize(const ExtensionSpec& spec);
  // Index variant of realize.
  std::size_t realize_index(const ExtensionSpec& spec);

 private:
  void release_wave();
  void enqueue_batch(std::vector<ExtensionSpec> batch);
  void on_new_point();

  std::shared_ptr<const ClassDriver> driver_;
  std::uint64_t seed_;
  std::size_t subset_bound_;
  StageState state_;
  std::deque<ExtensionSpec> queue_;
  std::vector<StageSnapshot> history_;
  std::size_t budget_level_ = 0;
  std::size_t stages_run_ = 0;
  std::mt19937_64 engine_;
};

// Realizes a one-point extension in the builder's stage: if some existing
// point already matches the spec it is returned, otherwise the stage grows
// by one point whose anchor distances match the spec exactly and whose
// other distances come from iterated one-point amalgamation. Throws
// Error("spec-invalid") for a spec the driver rejects.
std::string realize_extension(LimitBuilder& b, const ExtensionSpec& spec);

// Runs n dequeue-and-realize steps.
void run_stages(LimitBuilder& b, std::size_t n);

struct ExtensionReport {
  std::size_t subsets_checked = 0;
  std::size_t extensions_checked = 0;
  std::size_t already_present = 0;
  std::size_t realized = 0;
};

// For every subset of the current stage with at most size_cutoff points and
// every driver extension of it with distances in pool: find a witness or
// realize one. The report says how many extensions were examined and how
// many had to be realized; a second pass over an unchanged stage reports
// realized = 0 exactly when the stage is saturated at these cutoffs.
ExtensionReport verify_extension_property(LimitBuilder& b, std::size_t size_cutoff,
                                          const std::vector<Rational>& pool);

// Builds a partial dc-isomorphism between two chains of the same driver by
// the alternating method: point k of the first stage is matched forward,
// then point k of the second stage backward, each side realizing whatever
// extension it is missing, until the first `depth` points of both stages are
// covered. Both builders may grow. The result is returned as a total
// isometric map from the restriction of b1's stage onto its matched points
// (in matching order, sort shrunk to attained values) into b2's stage; it
// always validates, and deeper runs extend shallower ones pair for pair.
// Throws Error("driver-mismatch") when the builders grow different classes.
DcMap back_and_forth_iso(LimitBuilder& b1, LimitBuilder& b2, std::size_t depth);

// Enlarges a partial automorphism p of the builder's stage along a
// prescribed distance action h: every target index is absorbed into the
// domain (its image found or realized at distances h(d(target, a)) to the
// images of dom) and symmetrically into the range (its preimage found or
// realized along the inverse of h). Throws Error("incompatible-h") when h
// disagrees with p's recorded distance pairs, Error("invalid-partial") when
// p does not live on the current stage. The result lives on the (possibly
// grown) stage and its distance pairs follow h on every attained value.
PartialDcMap extend_partial_automorphism(LimitBuilder& b, const PartialDcMap& p,
                                         const PLAutomorphism& h,
                                         const std::vector<std::size_t>& targets);

}  // namespace ultra
