#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace posskit {

// Subsets of a carrier with at most 64 elements, one bit per element.
using Mask = std::uint64_t;

inline constexpr int kMaxCarrier = 64;

inline Mask bit(int i) { return Mask{1} << i; }
inline bool has(Mask m, int i) { return (m >> i) & 1; }
inline int popcount(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

// Iterates set bits in ascending order.
template <typename F>
void for_each_bit(Mask m, F&& f) {
  while (m) {
    int i = std::countr_zero(m);
    f(i);
    m &= m - 1;
  }
}

inline std::vector<int> mask_to_indices(Mask m) {
  std::vector<int> out;
  for_each_bit(m, [&](int i) { out.push_back(i); });
  return out;
}

std::string mask_to_string(Mask m, const std::vector<std::string>& names);

}  // namespace posskit
