#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "probemin/bits.hpp"
#include "probemin/errors.hpp"
#include "probemin/matroid.hpp"
#include "probemin/rational.hpp"

namespace probemin {

using ElementId = int;
using Weight = int;
using Value = long long;  // objective values; bounded by k * m

// Finite distribution on {0, ..., m}: (value, probability) pairs with values
// strictly ascending and probabilities summing to one.
struct WeightDistribution {
  std::vector<std::pair<Weight, Rat>> support;

  Rat below_prob(Weight t) const;  // P(X <= t)
  Rat above_prob(Weight t) const { return Rat(1) - below_prob(t); }
  Weight max_value() const { return support.empty() ? 0 : support.back().first; }

  static WeightDistribution point(Weight v) { return {{{v, Rat(1)}}}; }
  static WeightDistribution two_point(Weight lo, const Rat& p_lo, Weight hi);
};

struct Element {
  ElementId id = 0;
  Rat cost;
  WeightDistribution dist;
};

enum class ConstraintKind { Knapsack, Cardinality, Matroid };

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::Cardinality;
  Rat budget;           // knapsack
  int cardinality = 0;  // cardinality
};

enum class ObjectiveKind { MinElement, MinK, MinBasis };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::MinElement;
};

// A fixed outcome profile: one weight per element. Fixing outcomes makes
// adaptive runs deterministic per trial and lets couplings be tested exactly.
struct Realization {
  std::vector<Weight> weights;
};

struct Instance {
  std::vector<Element> elements;
  int m = 1;  // weights take values in {0, ..., m}
  int k = 1;  // min-k target / inner matroid rank
  ConstraintSpec constraint;
  ObjectiveSpec objective;
  std::optional<MatroidSpec> inner_matroid;
  std::optional<MatroidSpec> outer_matroid;
  // True when every probability and cost in the source document was an exact
  // literal (integer or "a/b"). Equality-asserting tests require this.
  bool rational_inputs = true;

  int size() const { return static_cast<int>(elements.size()); }
  IdSet universe() const { return full_set(size()); }
  Rat cost_of(IdSet s) const;
  Rat below_prob(ElementId e, Weight t) const { return elements[e].dist.below_prob(t); }
  Rat above_prob(ElementId e, Weight t) const { return elements[e].dist.above_prob(t); }
  Matroid outer() const;
  Matroid inner() const;
  // Throws ParseError on any invariant violation. Also builds the matroid
  // oracles once, so inner()/outer() are cheap afterwards.
  void validate();

 private:
  std::shared_ptr<const Matroid> inner_cache_;
  std::shared_ptr<const Matroid> outer_cache_;
};

Instance parse_instance(const std::string& text);
std::string instance_to_json(const Instance& inst);

// Replaces every distribution by {(0, P(X <= t)), (m, P(X > t))}. Rank
// problems are invariant under this collapse.
Instance collapse_to_bernoulli(const Instance& inst, Weight t);

// Enumeration / DP state budget; PROBEMIN_STATE_CAP overrides the default
// of 2^22.
std::uint64_t state_cap();

// Number of outcome profiles (product of support sizes); throws CapExceeded
// past the cap.
std::uint64_t realization_count(const Instance& inst);

// Streams every outcome profile with its product probability, in
// lexicographic (element id, support index) order. Probabilities sum to one.
void for_each_realization(const Instance& inst,
                          const std::function<void(const Realization&, const Rat&)>& fn);

// One independent draw per element, derived by counter-based splitting from
// (seed, trial, element id). Pure function of its arguments.
Realization sample_realization(const Instance& inst, std::uint64_t seed, std::uint64_t trial);

}  // namespace probemin
