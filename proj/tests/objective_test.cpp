#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "probemin/objective.hpp"
#include "probemin/testgen.hpp"

using namespace probemin;

namespace {

Realization weights(std::vector<Weight> w) { return Realization{std::move(w)}; }

}  // namespace

TEST_CASE("f_min takes the minimum and pads the empty set with m") {
  const Realization x = weights({3, 7, 9});
  CHECK(f_min(0b011, x, 100) == 3);
  CHECK(f_min(0, x, 100) == 100);
  // Gap-instance trace: first element low, risky element zero.
  const Realization trace = weights({1, 0, 10});
  CHECK(f_min(0b011, trace, 100) == 0);
}

TEST_CASE("y_i is the i-th order statistic with m padding") {
  const Realization x = weights({4, 1, 9});
  CHECK(y_i(0b111, x, 1, 10) == 1);
  CHECK(y_i(0b111, x, 2, 10) == 4);
  CHECK(y_i(0b111, x, 3, 10) == 9);
  CHECK(y_i(0b001, x, 3, 10) == 10);  // too few elements
  CHECK(f_mink(0b111, x, 2, 10) == 5);
}

TEST_CASE("f_mink sums the k smallest and reduces to f_min at k=1") {
  const Realization x = weights({4, 1, 9});
  CHECK(f_mink(0b111, x, 1, 10) == f_min(0b111, x, 10));
  CHECK(f_mink(0, x, 3, 5) == 15);
  TestRng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Weight> w(5);
    for (auto& v : w) v = rng.uniform(0, 9);
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(5);
    const int k = rng.uniform(1, 4);
    // Sort oracle.
    std::vector<Weight> in;
    for_each_id(s, [&](int e) { in.push_back(w[e]); });
    std::sort(in.begin(), in.end());
    Value expect = 0;
    for (int i = 0; i < k; ++i) expect += i < static_cast<int>(in.size()) ? in[i] : 9;
    CHECK(f_mink(s, weights(std::vector<Weight>(w)), k, 9) == expect);
  }
}

TEST_CASE("g_i equals y_i under a uniform inner matroid") {
  const Matroid uniform = Matroid::uniform(full_set(4), 2);
  TestRng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Weight> w(4);
    for (auto& v : w) v = rng.uniform(0, 5);
    const Realization x = weights(std::vector<Weight>(w));
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(4);
    for (int i = 1; i <= 2; ++i) CHECK(g_i(s, x, uniform, i, 5) == y_i(s, x, i, 5));
  }
  CHECK(g_i(0, weights({0, 0, 0, 0}), uniform, 1, 5) == 5);
  CHECK(g_i(0, weights({0, 0, 0, 0}), uniform, 2, 5) == 5);
}

TEST_CASE("f_minbasis matches the exhaustive minimum over contained bases") {
  TestRng rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform(2, 6);
    const Matroid inner = Matroid::from_spec(random_matroid_spec(rng, n, 3));
    const int k = inner.rank();
    std::vector<Weight> w(n);
    for (auto& v : w) v = rng.uniform(0, 4);
    const Realization x = weights(std::vector<Weight>(w));
    for (IdSet s = 0; s < (IdSet{1} << n); ++s) {
      // Brute force: min total weight over independent subsets of s of size
      // rank(s), padded up to k with m.
      const int r = inner.rank(s);
      long long best = -1;
      for (IdSet sub = s;; sub = (sub - 1) & s) {
        if (set_size(sub) == r && inner.is_independent(sub)) {
          long long total = 0;
          for_each_id(sub, [&](int e) { total += w[e]; });
          if (best < 0 || total < best) best = total;
        }
        if (sub == 0) break;
      }
      best += static_cast<long long>(k - r) * 4;
      CHECK(f_minbasis(s, x, inner, 4) == best);
    }
  }
}

TEST_CASE("g-sequence is non-decreasing in i and decomposes f_minbasis") {
  TestRng rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.uniform(2, 6);
    const Matroid inner = Matroid::from_spec(random_matroid_spec(rng, n, 3));
    const int k = inner.rank();
    std::vector<Weight> w(n);
    for (auto& v : w) v = rng.uniform(0, 4);
    const Realization x = weights(std::vector<Weight>(w));
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(n);
    Value sum = 0;
    Value prev = 0;
    for (int i = 1; i <= k; ++i) {
      const Value gi = g_i(s, x, inner, i, 4);
      CHECK(gi >= prev);
      prev = gi;
      sum += gi;
    }
    CHECK(sum == f_minbasis(s, x, inner, 4));
  }
}

TEST_CASE("trank counts below-threshold elements") {
  const Realization x = weights({0, 5, 2});
  CHECK(trank(0b111, x, 2) == 2);
  CHECK(trank(0b111, x, 5) == 3);  // t = m
  CHECK(trank(0b010, x, 2) == 0);
}

TEST_CASE("y_i <= t iff trank >= i") {
  TestRng rng(29);
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Weight> w(6);
    for (auto& v : w) v = rng.uniform(0, 6);
    const Realization x = weights(std::vector<Weight>(w));
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(6);
    const int i = rng.uniform(1, 6);
    const Weight t = rng.uniform(0, 5);
    // m = 6 > t keeps the padding out of the below-threshold range.
    CHECK((y_i(s, x, i, 6) <= t) == (trank(s, x, t) >= i));
  }
}

TEST_CASE("mtrank specializes and mirrors g_i") {
  const Matroid uniform = Matroid::uniform(full_set(5), 3);
  TestRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Weight> w(5);
    for (auto& v : w) v = rng.uniform(0, 4);
    const Realization x = weights(std::vector<Weight>(w));
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(5);
    const Weight t = rng.uniform(0, 3);
    CHECK(mtrank(uniform, s, x, t) == std::min(3, trank(s, x, t)));
  }
  // No below-threshold elements.
  CHECK(mtrank(uniform, full_set(5), weights({4, 4, 4, 4, 4}), 2) == 0);
}

TEST_CASE("g_i <= t iff mtrank >= i, exhaustively on small grounds") {
  TestRng rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = rng.uniform(2, 6);
    const Matroid inner = Matroid::from_spec(random_matroid_spec(rng, n, 3));
    const int k = inner.rank();
    std::vector<Weight> w(n);
    for (auto& v : w) v = rng.uniform(0, 3);
    const Realization x = weights(std::vector<Weight>(w));
    for (IdSet s = 0; s < (IdSet{1} << n); ++s) {
      for (Weight t = 0; t < 3; ++t) {  // t < m so padding never reads as below
        for (int i = 1; i <= k; ++i) {
          CHECK((g_i(s, x, inner, i, 3) <= t) == (mtrank(inner, s, x, t) >= i));
        }
      }
    }
  }
}

TEST_CASE("every objective is non-increasing under set growth") {
  TestRng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 6;
    const Matroid inner = Matroid::from_spec(random_matroid_spec(rng, n, 3));
    std::vector<Weight> w(n);
    for (auto& v : w) v = rng.uniform(0, 7);
    const Realization x = weights(std::vector<Weight>(w));
    const IdSet big = static_cast<IdSet>(rng.next()) & full_set(n);
    const IdSet small = static_cast<IdSet>(rng.next()) & big;
    CHECK(f_min(big, x, 7) <= f_min(small, x, 7));
    CHECK(f_mink(big, x, 3, 7) <= f_mink(small, x, 3, 7));
    CHECK(f_minbasis(big, x, inner, 7) <= f_minbasis(small, x, inner, 7));
  }
}

TEST_CASE("width and reward agree with the product formulas") {
  const Instance gap = gap_instance(10);
  // Elements 0 and 1 at t=50: P(X > t) = 1/100 and 1/10.
  CHECK(width(gap, 0b011, 50) == Rat(1) - Rat(1, 100) * Rat(1, 10));
  CHECK(width(gap, 0, 50) == 0);
  CHECK(width(gap, 0b100, 50) == 1);     // X_2 = 10 <= 50 surely
  CHECK(reward(gap, 2, 5) == 0.0);       // P(X_2 > 5) = 1
  CHECK(std::isinf(reward(gap, 2, 50)));  // P(X_2 > 50) = 0
}

TEST_CASE("two fair coins have width 3/4") {
  Instance inst;
  inst.m = 1;
  for (int i = 0; i < 2; ++i) {
    Element e;
    e.id = i;
    e.cost = Rat(1);
    e.dist.support = {{0, Rat(1, 2)}, {1, Rat(1, 2)}};
    inst.elements.push_back(e);
  }
  inst.constraint.kind = ConstraintKind::Cardinality;
  inst.constraint.cardinality = 2;
  inst.validate();
  CHECK(width(inst, 0b11, 0) == Rat(3, 4));
}

TEST_CASE("width increments follow the product decomposition") {
  TestRng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    KnapsackGenOptions gen;
    gen.max_n = 6;
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    const IdSet s = static_cast<IdSet>(rng.next()) & full_set(inst.size());
    const int u = rng.uniform(0, inst.size() - 1);
    if (set_contains(s, u)) continue;
    Rat survive(1);
    for_each_id(s, [&](int e) { survive *= inst.above_prob(e, t); });
    const Rat lhs = width(inst, s | id_bit(u), t) - width(inst, s, t);
    CHECK(lhs == survive * inst.below_prob(u, t));
  }
}
