#include "probemin/testgen.hpp"

#include <algorithm>
#include <set>

namespace probemin {

std::uint64_t TestRng::next() {
  // xorshift64* is plenty for test-case generation.
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  state_ = state_ ? state_ : 0x9e3779b97f4a7c15ULL;
  return state_ * 0x2545f4914f6cdd1dULL;
}

int TestRng::uniform(int lo, int hi) {
  return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

Rat TestRng::probability(bool allow_zero_one) {
  static const int denominators[] = {2, 3, 4, 5, 8};
  const int d = denominators[uniform(0, 4)];
  const int a = allow_zero_one ? uniform(0, d) : uniform(1, d - 1);
  return Rat(a, d);
}

namespace {

WeightDistribution random_distribution(TestRng& rng, int m, int max_support) {
  const int size = rng.uniform(1, std::min(max_support, m + 1));
  std::set<Weight> values;
  while (static_cast<int>(values.size()) < size) values.insert(rng.uniform(0, m));
  WeightDistribution dist;
  Rat remaining(1);
  int left = size;
  for (Weight v : values) {
    if (left == 1) {
      dist.support.emplace_back(v, remaining);
      break;
    }
    // Split off a rational share of what is left; shares stay positive.
    const Rat share = rng.probability(false) * remaining;
    dist.support.emplace_back(v, share);
    remaining -= share;
    --left;
  }
  return dist;
}

}  // namespace

GeneratedKnapsack random_knapsack_instance(TestRng& rng, const KnapsackGenOptions& options) {
  GeneratedKnapsack out;
  Instance& inst = out.instance;
  const int n = rng.uniform(options.min_n, options.max_n);
  inst.m = rng.uniform(1, options.max_m);
  inst.k = 1;
  inst.objective.kind = ObjectiveKind::MinElement;
  inst.constraint.kind = ConstraintKind::Knapsack;
  int budget;
  int max_cost;
  if (options.cost_divisor > 0) {
    budget = rng.uniform(options.cost_divisor, 3 * options.cost_divisor);
    max_cost = std::max(1, budget / options.cost_divisor);
  } else {
    max_cost = options.max_cost;
    budget = rng.uniform(1, 2 * options.max_cost);
  }
  inst.constraint.budget = Rat(budget);
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = i;
    e.cost = Rat(rng.uniform(1, max_cost));
    e.dist = random_distribution(rng, inst.m, options.max_support);
    inst.elements.push_back(std::move(e));
  }
  out.t = rng.uniform(0, inst.m - 1);
  inst.validate();
  return out;
}

MatroidSpec random_matroid_spec(TestRng& rng, int n, int max_rank) {
  MatroidSpec spec;
  spec.ground = full_set(n);
  switch (rng.uniform(0, 2)) {
    case 0:
      spec.kind = MatroidSpec::Kind::Uniform;
      spec.rank = rng.uniform(1, max_rank);
      break;
    case 1: {
      spec.kind = MatroidSpec::Kind::Partition;
      // Chop the ground into contiguous blocks; total capacity stays within
      // max_rank, so late blocks may be all loops.
      int start = 0;
      int allowance = max_rank;
      while (start < n) {
        const int len = std::min(n - start, rng.uniform(1, 3));
        IdSet ids = 0;
        for (int i = start; i < start + len; ++i) ids |= id_bit(i);
        const int cap = std::min(allowance, rng.uniform(1, std::min(len, max_rank)));
        allowance -= cap;
        spec.blocks.emplace_back(ids, cap);
        start += len;
      }
      break;
    }
    default: {
      // Column matroid of random vectors over GF(2): independence is linear
      // independence, so the axioms hold by construction.
      spec.kind = MatroidSpec::Kind::Explicit;
      const int dim = std::max(1, std::min(max_rank, 4));
      std::vector<unsigned> columns(n);
      for (auto& c : columns) c = static_cast<unsigned>(rng.uniform(1, (1 << dim) - 1));
      for (IdSet s = 0; s < (IdSet{1} << n); ++s) {
        // Gaussian elimination over GF(2).
        std::vector<unsigned> rows;
        bool independent = true;
        for_each_id(s, [&](int e) {
          unsigned v = columns[e];
          for (unsigned r : rows) v = std::min(v, v ^ r);
          if (v == 0) {
            independent = false;
          } else {
            rows.push_back(v);
          }
        });
        if (independent) spec.independent.push_back(s);
      }
      break;
    }
  }
  return spec;
}

GeneratedMatroidInstance random_matroid_rank_instance(TestRng& rng, int max_n, int max_rank) {
  GeneratedMatroidInstance out;
  Instance& inst = out.instance;
  const int n = rng.uniform(2, max_n);
  inst.m = rng.uniform(1, 4);
  inst.constraint.kind = ConstraintKind::Matroid;
  inst.outer_matroid = random_matroid_spec(rng, n, max_rank);
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = i;
    e.cost = Rat(1);
    e.dist = random_distribution(rng, inst.m, 3);
    inst.elements.push_back(std::move(e));
  }
  inst.objective.kind = ObjectiveKind::MinK;
  inst.k = std::max(1, Matroid::from_spec(*inst.outer_matroid).rank());
  out.t = rng.uniform(0, inst.m - 1);
  inst.validate();
  return out;
}

GeneratedMinBasis random_minbasis_instance(TestRng& rng, int max_n, int max_budget) {
  GeneratedMinBasis out;
  Instance& inst = out.instance;
  const int n = rng.uniform(2, max_n);
  inst.m = rng.uniform(1, 4);
  // Explicit inner matroids only, realized as GF(2) column matroids.
  MatroidSpec spec;
  while (true) {
    spec = random_matroid_spec(rng, n, 3);
    if (spec.kind == MatroidSpec::Kind::Explicit) break;
  }
  inst.inner_matroid = spec;
  inst.constraint.kind = ConstraintKind::Cardinality;
  out.budget = rng.uniform(1, std::min(n, max_budget));
  inst.constraint.cardinality = out.budget;
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = i;
    e.cost = Rat(1);
    e.dist = random_distribution(rng, inst.m, 3);
    inst.elements.push_back(std::move(e));
  }
  inst.objective.kind = ObjectiveKind::MinBasis;
  inst.k = std::max(1, Matroid::from_spec(spec).rank());
  out.t = rng.uniform(0, inst.m - 1);
  inst.validate();
  return out;
}

Instance gap_instance(long long N) {
  if (N < 2) throw Error("gap instance needs N >= 2");
  const long long n2 = N * N;
  const long long high = n2 * n2;  // the shared blow-up value N^4
  if (high > (1LL << 30)) throw Error("gap instance N too large");
  // High outcomes must dwarf N^3, or the fixed pair {0,1} would match the
  // adaptive policy: its only loss is the joint blow-up, worth high / N^3.
  Instance inst;
  inst.m = static_cast<int>(high);
  inst.k = 1;
  inst.objective.kind = ObjectiveKind::MinElement;
  inst.constraint.kind = ConstraintKind::Cardinality;
  inst.constraint.cardinality = 2;
  Element risky_low;
  risky_low.id = 0;
  risky_low.cost = Rat(1);
  risky_low.dist.support = {{1, Rat(n2 - 1, n2)}, {static_cast<Weight>(high), Rat(1, n2)}};
  Element risky_zero;
  risky_zero.id = 1;
  risky_zero.cost = Rat(1);
  risky_zero.dist.support = {{0, Rat(N - 1, N)}, {static_cast<Weight>(high), Rat(1, N)}};
  Element safe;
  safe.id = 2;
  safe.cost = Rat(1);
  safe.dist.support = {{static_cast<Weight>(N), Rat(1)}};
  inst.elements = {risky_low, risky_zero, safe};
  inst.validate();
  return inst;
}

namespace {

class GapPolicyRun : public PolicyRun {
 public:
  Action next() override {
    switch (step_) {
      case 0:
        return Probe{0};
      case 1:
        return Probe{saw_one_ ? 1 : 2};
      default:
        return Stop{};
    }
  }

  void observe(ElementId e, Weight w) override {
    if (e == 0) saw_one_ = w == 1;
    ++step_;
  }

 private:
  int step_ = 0;
  bool saw_one_ = false;
};

class GapPolicy : public Policy {
 public:
  std::unique_ptr<PolicyRun> start(const Instance&) const override {
    return std::make_unique<GapPolicyRun>();
  }
};

}  // namespace

std::unique_ptr<Policy> gap_adaptive_policy() { return std::make_unique<GapPolicy>(); }

Rat gap_policy_expectation(long long N) {
  // (1 - 1/N^2) * (1/N) * 1 + (1/N^2) * N.
  return Rat(2 * N * N - 1, N * N * N);
}

}  // namespace probemin
