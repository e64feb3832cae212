#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "probemin/model.hpp"
#include "probemin/testgen.hpp"

using namespace probemin;

namespace {

const char* kGapN10 = R"({
  "m": 10000,
  "k": 1,
  "constraint": {"type": "cardinality", "budget": 2},
  "objective": {"type": "min"},
  "elements": [
    {"id": 0, "cost": 1, "dist": [[1, "99/100"], [10000, "1/100"]]},
    {"id": 1, "cost": 1, "dist": [[0, "9/10"], [10000, "1/10"]]},
    {"id": 2, "cost": 1, "dist": [[10, 1]]}
  ]
})";

}  // namespace

TEST_CASE("parse_instance accepts the three-element gap document") {
  const Instance inst = parse_instance(kGapN10);
  CHECK(inst.m == 10000);
  CHECK(inst.size() == 3);
  CHECK(inst.constraint.kind == ConstraintKind::Cardinality);
  CHECK(inst.constraint.cardinality == 2);
  CHECK(inst.rational_inputs);
  CHECK(inst.elements[1].dist.support[0].second == Rat(9, 10));
  // Matches the programmatic builder.
  const Instance built = gap_instance(10);
  CHECK(instance_to_json(inst) == instance_to_json(built));
}

TEST_CASE("parse_instance accepts a degenerate singleton") {
  const Instance inst = parse_instance(R"({
    "m": 1, "constraint": {"type": "knapsack", "budget": 1},
    "objective": {"type": "min"},
    "elements": [{"id": 0, "cost": 1, "dist": [[0, 1.0]]}]
  })");
  CHECK(inst.size() == 1);
  CHECK(inst.elements[0].dist.support[0].second == 1);
}

TEST_CASE("parse_instance rejects bad documents") {
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  // Probabilities summing to 0.9.
  CHECK_THROWS_AS(parse_instance(R"({
    "m": 2, "constraint": {"type": "knapsack", "budget": 1},
    "objective": {"type": "min"},
    "elements": [{"id": 0, "cost": 1, "dist": [[0, "9/10"]]}]
  })"),
                  ParseError);
  // Value above m.
  CHECK_THROWS_AS(parse_instance(R"({
    "m": 2, "constraint": {"type": "knapsack", "budget": 1},
    "objective": {"type": "min"},
    "elements": [{"id": 0, "cost": 1, "dist": [[3, 1]]}]
  })"),
                  ParseError);
  // Duplicate ids.
  CHECK_THROWS_AS(parse_instance(R"({
    "m": 2, "constraint": {"type": "knapsack", "budget": 1},
    "objective": {"type": "min"},
    "elements": [{"id": 0, "cost": 1, "dist": [[0, 1]]},
                  {"id": 0, "cost": 1, "dist": [[0, 1]]}]
  })"),
                  ParseError);
}

TEST_CASE("below_prob sums support mass at or below t") {
  WeightDistribution d{{{0, Rat(1, 2)}, {3, Rat(1, 2)}}};
  CHECK(d.below_prob(0) == Rat(1, 2));
  CHECK(d.below_prob(2) == Rat(1, 2));
  CHECK(d.below_prob(3) == 1);
  CHECK(d.below_prob(100) == 1);

  const Instance gap = gap_instance(10);
  CHECK(gap.below_prob(1, 50) == Rat(9, 10));
}

TEST_CASE("below_prob is monotone in t") {
  TestRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    KnapsackGenOptions gen;
    const auto [inst, t0] = random_knapsack_instance(rng, gen);
    (void)t0;
    for (const Element& e : inst.elements) {
      Rat prev(0);
      for (Weight t = 0; t <= inst.m; ++t) {
        const Rat cur = e.dist.below_prob(t);
        CHECK(cur >= prev);
        prev = cur;
      }
      CHECK(prev == 1);
    }
  }
}

TEST_CASE("sample_realization is deterministic and respects point masses") {
  const Instance inst = gap_instance(10);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const Realization a = sample_realization(inst, 42, trial);
    const Realization b = sample_realization(inst, 42, trial);
    CHECK(a.weights == b.weights);
    CHECK(a.weights[2] == 10);  // point mass
  }
  // Different trials differ somewhere.
  int distinct = 0;
  for (std::uint64_t trial = 0; trial < 64; ++trial) {
    if (sample_realization(inst, 42, trial).weights != sample_realization(inst, 42, trial + 1).weights)
      ++distinct;
  }
  CHECK(distinct > 0);
}

TEST_CASE("sample_realization empirical mean matches a fair coin") {
  Instance inst;
  inst.m = 1;
  Element e;
  e.id = 0;
  e.cost = Rat(1);
  e.dist.support = {{0, Rat(1, 2)}, {1, Rat(1, 2)}};
  inst.elements = {e};
  inst.constraint.kind = ConstraintKind::Cardinality;
  inst.constraint.cardinality = 1;
  inst.validate();
  long long sum = 0;
  const int trials = 100000;
  for (int trial = 0; trial < trials; ++trial) sum += sample_realization(inst, 9, trial).weights[0];
  const double mean = static_cast<double>(sum) / trials;
  CHECK(mean > 0.49);
  CHECK(mean < 0.51);
}

TEST_CASE("per-element marginals pass a chi-square test") {
  TestRng rng(11);
  KnapsackGenOptions gen;
  gen.min_n = 3;
  gen.max_n = 5;
  const auto [inst, t0] = random_knapsack_instance(rng, gen);
  (void)t0;
  const int trials = 100000;
  std::vector<std::map<Weight, long long>> counts(inst.size());
  for (int trial = 0; trial < trials; ++trial) {
    const Realization x = sample_realization(inst, 123, trial);
    for (int e = 0; e < inst.size(); ++e) counts[e][x.weights[e]] += 1;
  }
  for (int e = 0; e < inst.size(); ++e) {
    const auto& support = inst.elements[e].dist.support;
    if (support.size() < 2) continue;
    double stat = 0;
    for (const auto& [v, p] : support) {
      const double expect = to_double(p) * trials;
      const double diff = counts[e][v] - expect;
      stat += diff * diff / expect;
    }
    const boost::math::chi_squared dist(static_cast<double>(support.size() - 1));
    CHECK(stat < boost::math::quantile(dist, 0.999));
  }
}

TEST_CASE("enumerate_realizations covers the product space with mass one") {
  const Instance gap = gap_instance(10);
  int profiles = 0;
  Rat total(0);
  for_each_realization(gap, [&](const Realization& x, const Rat& p) {
    ++profiles;
    total += p;
    CHECK(x.weights.size() == 3);
  });
  CHECK(profiles == 4);  // 2 * 2 * 1
  CHECK(total == 1);
}

TEST_CASE("enumerate_realizations handles a single point mass") {
  Instance inst;
  inst.m = 5;
  Element e;
  e.id = 0;
  e.cost = Rat(1);
  e.dist = WeightDistribution::point(5);
  inst.elements = {e};
  inst.constraint.kind = ConstraintKind::Cardinality;
  inst.constraint.cardinality = 1;
  inst.validate();
  int profiles = 0;
  for_each_realization(inst, [&](const Realization& x, const Rat& p) {
    ++profiles;
    CHECK(p == 1);
    CHECK(x.weights[0] == 5);
  });
  CHECK(profiles == 1);
}

TEST_CASE("enumeration respects the state cap") {
  Instance inst;
  inst.m = 3;
  for (int i = 0; i < 4; ++i) {
    Element e;
    e.id = i;
    e.cost = Rat(1);
    e.dist.support = {{0, Rat(1, 2)}, {1, Rat(1, 4)}, {2, Rat(1, 4)}};
    inst.elements.push_back(e);
  }
  inst.constraint.kind = ConstraintKind::Cardinality;
  inst.constraint.cardinality = 2;
  inst.validate();
  setenv("PROBEMIN_STATE_CAP", "16", 1);
  CHECK_THROWS_AS(realization_count(inst), CapExceeded);
  unsetenv("PROBEMIN_STATE_CAP");
  CHECK(realization_count(inst) == 81);
}

TEST_CASE("instance JSON round-trips") {
  TestRng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    KnapsackGenOptions gen;
    const Instance inst = random_knapsack_instance(rng, gen).instance;
    const std::string once = instance_to_json(inst);
    const std::string twice = instance_to_json(parse_instance(once));
    CHECK(once == twice);
  }
  const Instance minb = random_minbasis_instance(rng, 6, 3).instance;
  CHECK(instance_to_json(minb) == instance_to_json(parse_instance(instance_to_json(minb))));
}

TEST_CASE("collapse_to_bernoulli preserves the below probability") {
  const Instance gap = gap_instance(10);
  const Instance two = collapse_to_bernoulli(gap, 50);
  for (int e = 0; e < gap.size(); ++e) {
    CHECK(two.below_prob(e, 50) == gap.below_prob(e, 50));
    CHECK(two.elements[e].dist.support.size() <= 2);
  }
}
