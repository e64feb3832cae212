#include "probemin/matroid.hpp"

#include <algorithm>
#include <string>

namespace probemin {

namespace {

constexpr int kExplicitCap = 16;

std::string set_str(IdSet s) {
  std::string out = "{";
  bool first = true;
  for_each_id(s, [&](int i) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  });
  return out + "}";
}

}  // namespace

struct Matroid::Base {
  MatroidSpec::Kind kind;
  IdSet ground = 0;
  int rank = 0;
  std::vector<std::pair<IdSet, int>> blocks;
  std::vector<bool> table;  // explicit: indexed by bitmask

  bool independent(IdSet s) const {
    switch (kind) {
      case MatroidSpec::Kind::Uniform:
        return set_size(s) <= rank;
      case MatroidSpec::Kind::Partition:
        for (const auto& [ids, cap] : blocks) {
          if (set_size(s & ids) > cap) return false;
        }
        return true;
      case MatroidSpec::Kind::Explicit:
        return table[s];
    }
    return false;
  }
};

bool check_axioms(IdSet ground, const std::vector<IdSet>& family) {
  if (set_size(ground) > kExplicitCap) throw ParseError("explicit matroid ground too large");
  std::vector<bool> in(std::size_t{1} << set_size(ground), false);
  // Compact ids so the table is indexed by masks over [0, |ground|).
  std::vector<int> pos(kMaxUniverse, -1);
  int next = 0;
  for_each_id(ground, [&](int i) { pos[i] = next++; });
  auto compact = [&](IdSet s) {
    IdSet c = 0;
    for_each_id(s, [&](int i) { c |= id_bit(pos[i]); });
    return c;
  };
  for (IdSet s : family) {
    if ((s & ~ground) != 0) return false;
    in[compact(s)] = true;
  }
  if (!in[0]) return false;
  const IdSet all = full_set(next);
  for (IdSet s = 0; s <= all; ++s) {
    if (!in[s]) continue;
    IdSet rest = s;
    while (rest) {
      const IdSet e = rest & (IdSet(0) - rest);
      if (!in[s ^ e]) return false;  // not downward-closed
      rest ^= e;
    }
  }
  // Exchange: checking |b| = |a| + 1 suffices; the general case follows by
  // restricting b (the family is downward-closed by now).
  for (IdSet a = 0; a <= all; ++a) {
    if (!in[a]) continue;
    for (IdSet b = 0; b <= all; ++b) {
      if (!in[b] || set_size(b) != set_size(a) + 1) continue;
      bool found = false;
      for_each_id(b & ~a, [&](int i) {
        if (in[a | id_bit(i)]) found = true;
      });
      if (!found) return false;
    }
  }
  return true;
}

Matroid Matroid::uniform(IdSet ground, int rank) {
  if (rank < 0) throw ParseError("uniform matroid needs rank >= 0");
  auto base = std::make_shared<Base>();
  base->kind = MatroidSpec::Kind::Uniform;
  base->ground = ground;
  base->rank = rank;
  return Matroid(std::move(base), 0);
}

Matroid Matroid::partition(std::vector<std::pair<IdSet, int>> blocks) {
  auto base = std::make_shared<Base>();
  base->kind = MatroidSpec::Kind::Partition;
  IdSet ground = 0;
  for (const auto& [ids, cap] : blocks) {
    if (cap < 0) throw ParseError("partition block capacity must be >= 0");
    if (ids & ground) throw ParseError("partition blocks must be disjoint");
    ground |= ids;
  }
  base->ground = ground;
  base->blocks = std::move(blocks);
  return Matroid(std::move(base), 0);
}

Matroid Matroid::explicit_family(IdSet ground, std::vector<IdSet> independent) {
  if (std::bit_width(ground) > kExplicitCap)
    throw ParseError("explicit matroid ids must be below 16");
  auto base = std::make_shared<Base>();
  base->kind = MatroidSpec::Kind::Explicit;
  base->ground = ground;
  base->table.assign(std::size_t{1} << std::bit_width(ground), false);
  // Close downward: every subset of a listed set is independent.
  for (IdSet s : independent) {
    if ((s & ~ground) != 0) throw ParseError("independent set outside ground");
    IdSet sub = s;
    while (true) {
      base->table[sub] = true;
      if (sub == 0) break;
      sub = (sub - 1) & s;
    }
  }
  base->table[0] = true;
  std::vector<IdSet> family;
  for (IdSet s = 0; s < IdSet(base->table.size()); ++s) {
    if (base->table[s]) family.push_back(s);
  }
  if (!check_axioms(ground, family)) throw ParseError("explicit family violates matroid axioms");
  return Matroid(std::move(base), 0);
}

Matroid Matroid::from_spec(const MatroidSpec& spec) {
  switch (spec.kind) {
    case MatroidSpec::Kind::Uniform:
      return uniform(spec.ground, spec.rank);
    case MatroidSpec::Kind::Partition:
      return partition(spec.blocks);
    case MatroidSpec::Kind::Explicit:
      return explicit_family(spec.ground, spec.independent);
  }
  throw ParseError("bad matroid spec");
}

IdSet Matroid::ground() const { return base_->ground & ~contracted_; }

bool Matroid::is_independent(IdSet s) const {
  if ((s & ~ground()) != 0)
    throw Error("independence query outside ground set: " + set_str(s & ~ground()));
  return base_->independent(s | contracted_);
}

Matroid Matroid::contract(IdSet s) const {
  if (!is_independent(s)) throw Error("contraction by a dependent set " + set_str(s));
  return Matroid(base_, contracted_ | s);
}

int Matroid::rank(IdSet s) const {
  if ((s & ~ground()) != 0) throw Error("rank query outside ground set");
  IdSet acc = 0;
  for_each_id(s, [&](int i) {
    if (is_independent(acc | id_bit(i))) acc |= id_bit(i);
  });
  return set_size(acc);
}

std::vector<int> Matroid::min_weight_basis(const std::vector<int>& weights, IdSet s) const {
  std::vector<int> ids = set_to_ids(s);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (weights[a] != weights[b]) return weights[a] < weights[b];
    return a < b;
  });
  std::vector<int> out;
  IdSet acc = 0;
  for (int e : ids) {
    if (is_independent(acc | id_bit(e))) {
      acc |= id_bit(e);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace probemin
