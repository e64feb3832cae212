#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace probemin {

// Selection sets and matroid grounds are bitmasks over dense element ids.
// Universes are capped at 64 elements.
using IdSet = std::uint64_t;

constexpr int kMaxUniverse = 64;

constexpr IdSet id_bit(int i) { return IdSet{1} << i; }
constexpr bool set_contains(IdSet s, int i) { return (s >> i) & 1; }
constexpr int set_size(IdSet s) { return std::popcount(s); }
constexpr IdSet full_set(int n) {
  return n >= 64 ? ~IdSet{0} : (IdSet{1} << n) - 1;
}

// Calls fn(id) for each member, ascending.
template <typename Fn>
void for_each_id(IdSet s, Fn&& fn) {
  while (s) {
    const int i = std::countr_zero(s);
    fn(i);
    s &= s - 1;
  }
}

inline std::vector<int> set_to_ids(IdSet s) {
  std::vector<int> ids;
  ids.reserve(set_size(s));
  for_each_id(s, [&](int i) { ids.push_back(i); });
  return ids;
}

inline IdSet ids_to_set(const std::vector<int>& ids) {
  IdSet s = 0;
  for (int i : ids) s |= id_bit(i);
  return s;
}

}  // namespace probemin
