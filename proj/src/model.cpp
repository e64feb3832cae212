#include "probemin/model.hpp"

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

namespace probemin {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Rat WeightDistribution::below_prob(Weight t) const {
  if (t < 0) throw Error("below_prob needs a threshold >= 0");
  Rat acc(0);
  for (const auto& [v, p] : support) {
    if (v > t) break;
    acc += p;
  }
  return acc;
}

WeightDistribution WeightDistribution::two_point(Weight lo, const Rat& p_lo, Weight hi) {
  if (p_lo == 1) return point(lo);
  if (p_lo == 0) return point(hi);
  return {{{lo, p_lo}, {hi, Rat(1) - p_lo}}};
}

Rat Instance::cost_of(IdSet s) const {
  Rat acc(0);
  for_each_id(s, [&](int e) { acc += elements[e].cost; });
  return acc;
}

Matroid Instance::outer() const {
  if (outer_cache_) return *outer_cache_;
  if (!outer_matroid) throw Error("instance has no outer matroid");
  return Matroid::from_spec(*outer_matroid);
}

Matroid Instance::inner() const {
  if (inner_cache_) return *inner_cache_;
  if (!inner_matroid) throw Error("instance has no inner matroid");
  return Matroid::from_spec(*inner_matroid);
}

void Instance::validate() {
  if (m < 1) throw ParseError("m must be >= 1");
  if (k < 1) throw ParseError("k must be >= 1");
  if (size() > kMaxUniverse) throw ParseError("universe larger than 64 elements");
  for (int i = 0; i < size(); ++i) {
    const Element& e = elements[i];
    if (e.id != i) throw ParseError("element ids must be dense and 0-based");
    if (e.cost < 0) throw ParseError("negative cost on element " + std::to_string(i));
    if (e.dist.support.empty()) throw ParseError("empty distribution on element " + std::to_string(i));
    Rat sum(0);
    Weight prev = -1;
    for (const auto& [v, p] : e.dist.support) {
      if (v <= prev) throw ParseError("duplicate distribution value on element " + std::to_string(i));
      if (v < 0 || v > m) throw ParseError("distribution value outside [0, m] on element " + std::to_string(i));
      if (p < 0 || p > 1) throw ParseError("probability outside [0, 1] on element " + std::to_string(i));
      sum += p;
      prev = v;
    }
    if (rational_inputs) {
      if (sum != 1) throw ParseError("probabilities of element " + std::to_string(i) + " sum to " + to_fraction_string(sum) + ", not 1");
    } else {
      const Rat tol = Rat(1, 1000000000000LL);
      if (sum > Rat(1) + tol || sum < Rat(1) - tol)
        throw ParseError("probabilities of element " + std::to_string(i) + " do not sum to 1 within 1e-12");
    }
  }
  switch (constraint.kind) {
    case ConstraintKind::Knapsack:
      if (constraint.budget < 0) throw ParseError("knapsack budget must be >= 0");
      break;
    case ConstraintKind::Cardinality:
      if (constraint.cardinality < 0) throw ParseError("cardinality budget must be >= 0");
      break;
    case ConstraintKind::Matroid:
      if (!outer_matroid) throw ParseError("matroid constraint needs an outer_matroid");
      break;
  }
  if (inner_matroid) {
    inner_cache_ = std::make_shared<const Matroid>(Matroid::from_spec(*inner_matroid));
    if (inner_cache_->ground() & ~universe()) throw ParseError("inner matroid ground outside the universe");
  }
  if (outer_matroid) {
    outer_cache_ = std::make_shared<const Matroid>(Matroid::from_spec(*outer_matroid));
    if (outer_cache_->ground() & ~universe()) throw ParseError("outer matroid ground outside the universe");
  }
  if (objective.kind == ObjectiveKind::MinBasis) {
    if (!inner_matroid) throw ParseError("min_basis objective needs an inner_matroid");
    const int r = inner().rank();
    if (r != k) throw ParseError("k must equal the inner matroid rank (" + std::to_string(r) + ")");
  }
}

namespace {

// Numbers may be integers (exact), doubles (converted to their exact dyadic
// value, flagged inexact) or "a/b" strings.
Rat parse_number(const json& j, bool& exact) {
  if (j.is_string()) return parse_fraction(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) {
    exact = false;
    return rat_from_double(j.get<double>());
  }
  throw ParseError("expected a number or \"a/b\" string");
}

IdSet parse_ids(const json& j) {
  if (!j.is_array()) throw ParseError("expected an id array");
  IdSet s = 0;
  for (const auto& v : j) {
    const int i = v.get<int>();
    if (i < 0 || i >= kMaxUniverse) throw ParseError("id out of range");
    s |= id_bit(i);
  }
  return s;
}

MatroidSpec parse_matroid_spec(const json& j) {
  MatroidSpec spec;
  const std::string type = j.at("type").get<std::string>();
  if (type == "uniform") {
    spec.kind = MatroidSpec::Kind::Uniform;
    spec.ground = parse_ids(j.at("ground"));
    spec.rank = j.at("rank").get<int>();
    if (spec.rank < 0) throw ParseError("uniform rank must be >= 0");
  } else if (type == "partition") {
    spec.kind = MatroidSpec::Kind::Partition;
    for (const auto& b : j.at("blocks")) {
      const IdSet ids = parse_ids(b.at("ids"));
      spec.blocks.emplace_back(ids, b.at("cap").get<int>());
      spec.ground |= ids;
    }
  } else if (type == "explicit") {
    spec.kind = MatroidSpec::Kind::Explicit;
    spec.ground = parse_ids(j.at("ground"));
    for (const auto& s : j.at("independent")) spec.independent.push_back(parse_ids(s));
  } else {
    throw ParseError("unknown matroid type '" + type + "'");
  }
  return spec;
}

json matroid_spec_to_json(const MatroidSpec& spec) {
  ordered_json j;
  switch (spec.kind) {
    case MatroidSpec::Kind::Uniform:
      j["type"] = "uniform";
      j["rank"] = spec.rank;
      j["ground"] = set_to_ids(spec.ground);
      break;
    case MatroidSpec::Kind::Partition: {
      j["type"] = "partition";
      auto blocks = json::array();
      for (const auto& [ids, cap] : spec.blocks) blocks.push_back({{"ids", set_to_ids(ids)}, {"cap", cap}});
      j["blocks"] = blocks;
      break;
    }
    case MatroidSpec::Kind::Explicit: {
      j["type"] = "explicit";
      j["ground"] = set_to_ids(spec.ground);
      auto fam = json::array();
      for (IdSet s : spec.independent) fam.push_back(set_to_ids(s));
      j["independent"] = fam;
      break;
    }
  }
  return j;
}

json number_to_json(const Rat& q) {
  if (den(q) == 1 && num(q) >= -(BigInt(1) << 40) && num(q) <= (BigInt(1) << 40))
    return num(q).convert_to<long long>();
  return to_fraction_string(q);
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  Instance inst;
  bool exact = true;
  try {
    inst.m = doc.at("m").get<int>();
    inst.k = doc.value("k", 1);
    const json& cons = doc.at("constraint");
    const std::string ckind = cons.at("type").get<std::string>();
    if (ckind == "knapsack") {
      inst.constraint.kind = ConstraintKind::Knapsack;
      inst.constraint.budget = parse_number(cons.at("budget"), exact);
    } else if (ckind == "cardinality") {
      inst.constraint.kind = ConstraintKind::Cardinality;
      inst.constraint.cardinality = cons.at("budget").get<int>();
    } else if (ckind == "matroid") {
      inst.constraint.kind = ConstraintKind::Matroid;
    } else {
      throw ParseError("unknown constraint type '" + ckind + "'");
    }
    const std::string okind = doc.at("objective").at("type").get<std::string>();
    if (okind == "min") {
      inst.objective.kind = ObjectiveKind::MinElement;
    } else if (okind == "min_k") {
      inst.objective.kind = ObjectiveKind::MinK;
    } else if (okind == "min_basis") {
      inst.objective.kind = ObjectiveKind::MinBasis;
    } else {
      throw ParseError("unknown objective type '" + okind + "'");
    }
    for (const auto& je : doc.at("elements")) {
      Element e;
      e.id = je.at("id").get<int>();
      e.cost = parse_number(je.at("cost"), exact);
      for (const auto& pair : je.at("dist")) {
        if (!pair.is_array() || pair.size() != 2) throw ParseError("dist entries must be [value, prob] pairs");
        e.dist.support.emplace_back(pair[0].get<int>(), parse_number(pair[1], exact));
      }
      std::sort(e.dist.support.begin(), e.dist.support.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      inst.elements.push_back(std::move(e));
    }
    if (doc.contains("inner_matroid")) inst.inner_matroid = parse_matroid_spec(doc.at("inner_matroid"));
    if (doc.contains("outer_matroid")) inst.outer_matroid = parse_matroid_spec(doc.at("outer_matroid"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad instance document: ") + e.what());
  }
  inst.rational_inputs = exact;
  std::sort(inst.elements.begin(), inst.elements.end(),
            [](const Element& a, const Element& b) { return a.id < b.id; });
  inst.validate();
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["m"] = inst.m;
  doc["k"] = inst.k;
  ordered_json cons;
  switch (inst.constraint.kind) {
    case ConstraintKind::Knapsack:
      cons["type"] = "knapsack";
      cons["budget"] = number_to_json(inst.constraint.budget);
      break;
    case ConstraintKind::Cardinality:
      cons["type"] = "cardinality";
      cons["budget"] = inst.constraint.cardinality;
      break;
    case ConstraintKind::Matroid:
      cons["type"] = "matroid";
      break;
  }
  doc["constraint"] = cons;
  doc["objective"] = {{"type", inst.objective.kind == ObjectiveKind::MinElement ? "min"
                               : inst.objective.kind == ObjectiveKind::MinK    ? "min_k"
                                                                               : "min_basis"}};
  auto elems = ordered_json::array();
  for (const Element& e : inst.elements) {
    ordered_json je;
    je["id"] = e.id;
    je["cost"] = number_to_json(e.cost);
    auto dist = ordered_json::array();
    for (const auto& [v, p] : e.dist.support) dist.push_back({v, number_to_json(p)});
    je["dist"] = dist;
    elems.push_back(je);
  }
  doc["elements"] = elems;
  if (inst.inner_matroid) doc["inner_matroid"] = matroid_spec_to_json(*inst.inner_matroid);
  if (inst.outer_matroid) doc["outer_matroid"] = matroid_spec_to_json(*inst.outer_matroid);
  return doc.dump(2);
}

Instance collapse_to_bernoulli(const Instance& inst, Weight t) {
  Instance out = inst;
  for (Element& e : out.elements) {
    e.dist = WeightDistribution::two_point(0, e.dist.below_prob(t), inst.m);
  }
  return out;
}

std::uint64_t state_cap() {
  if (const char* env = std::getenv("PROBEMIN_STATE_CAP")) {
    const auto v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return std::uint64_t{1} << 22;
}

std::uint64_t realization_count(const Instance& inst) {
  const std::uint64_t cap = state_cap();
  std::uint64_t count = 1;
  for (const Element& e : inst.elements) {
    count *= e.dist.support.size();
    if (count > cap) throw CapExceeded("outcome space exceeds cap of " + std::to_string(cap));
  }
  return count;
}

void for_each_realization(const Instance& inst,
                          const std::function<void(const Realization&, const Rat&)>& fn) {
  realization_count(inst);  // cap check
  const int n = inst.size();
  Realization x;
  x.weights.assign(n, 0);
  // Depth-first product walk keeps the running probability incremental.
  std::function<void(int, const Rat&)> walk = [&](int e, const Rat& prob) {
    if (e == n) {
      fn(x, prob);
      return;
    }
    for (const auto& [v, p] : inst.elements[e].dist.support) {
      if (p == 0) continue;
      x.weights[e] = v;
      walk(e + 1, prob * p);
    }
  };
  walk(0, Rat(1));
}

namespace {

// splitmix64 finalizer; the basis of the per-(seed, trial, element) streams.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Realization sample_realization(const Instance& inst, std::uint64_t seed, std::uint64_t trial) {
  Realization x;
  x.weights.reserve(inst.size());
  const std::uint64_t base = mix64(mix64(seed) ^ (trial * 0xd1342543de82ef95ULL + 1));
  for (const Element& e : inst.elements) {
    const std::uint64_t draw = mix64(base ^ (static_cast<std::uint64_t>(e.id) * 0x2545f4914f6cdd1dULL + 1));
    // Exact CDF walk on u = draw / 2^64.
    const Rat u(BigInt(draw), BigInt(1) << 64);
    Rat acc(0);
    Weight picked = e.dist.support.back().first;
    for (const auto& [v, p] : e.dist.support) {
      acc += p;
      if (u < acc) {
        picked = v;
        break;
      }
    }
    x.weights.push_back(picked);
  }
  return x;
}

}  // namespace probemin
