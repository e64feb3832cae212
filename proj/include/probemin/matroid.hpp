#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "probemin/bits.hpp"
#include "probemin/errors.hpp"

namespace probemin {

// Declarative description of a matroid, as it appears in instance documents.
struct MatroidSpec {
  enum class Kind { Uniform, Partition, Explicit };
  Kind kind = Kind::Uniform;
  IdSet ground = 0;
  int rank = 0;                                   // uniform
  std::vector<std::pair<IdSet, int>> blocks;      // partition: (ids, capacity)
  std::vector<IdSet> independent;                 // explicit, possibly not closed
};

// Verifies non-emptiness (contains the empty set), downward closure and the
// exchange axiom by enumeration. Ground size must be at most 16.
bool check_axioms(IdSet ground, const std::vector<IdSet>& family);

// Independence oracle with lazy contraction. Instances are immutable and
// cheap to copy; contract() shares the underlying family.
class Matroid {
 public:
  static Matroid uniform(IdSet ground, int rank);
  static Matroid partition(std::vector<std::pair<IdSet, int>> blocks);
  // Closes the listed family downward, then runs check_axioms.
  static Matroid explicit_family(IdSet ground, std::vector<IdSet> independent);
  static Matroid from_spec(const MatroidSpec& spec);

  IdSet ground() const;
  bool is_independent(IdSet s) const;  // throws on s outside the ground set

  // Matroid on ground() - s whose oracle accepts t iff t | s is independent
  // here. Requires s independent.
  Matroid contract(IdSet s) const;

  // Size of a maximum independent subset of s, by greedy augmentation.
  int rank(IdSet s) const;
  int rank() const { return rank(ground()); }

  // Greedy scan of s in ascending (weight, id) order, keeping elements that
  // preserve independence. Returns ids in addition order; the result is a
  // minimum-weight maximum-size independent subset of s.
  std::vector<int> min_weight_basis(const std::vector<int>& weights, IdSet s) const;

 private:
  struct Base;
  Matroid(std::shared_ptr<const Base> base, IdSet contracted)
      : base_(std::move(base)), contracted_(contracted) {}

  std::shared_ptr<const Base> base_;
  IdSet contracted_ = 0;
};

}  // namespace probemin
