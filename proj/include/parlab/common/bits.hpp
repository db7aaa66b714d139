#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace parlab {

// Subset of [n] or a point of the cube as a bit mask; bit i stands for
// coordinate i+1. For points, a set bit means the coordinate is -1 (the
// 0/1 bit b maps to the sign 1 - 2b).
using Mask = std::uint64_t;

inline int parity_bit(Mask m) { return std::popcount(m) & 1; }

inline Mask low_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

// Sign vector (+1/-1 doubles) of a cube point.
inline void to_signs(Mask x, int n, double* out) {
  for (int i = 0; i < n; ++i) out[i] = ((x >> i) & 1) ? -1.0 : 1.0;
}

inline std::vector<double> to_signs(Mask x, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  to_signs(x, n, out.data());
  return out;
}

// 1-based element list, e.g. {1,3} for 0b101.
inline std::vector<int> mask_elements(Mask m) {
  std::vector<int> out;
  for (int i = 0; m != 0; ++i, m >>= 1) {
    if (m & 1) out.push_back(i + 1);
  }
  return out;
}

inline Mask mask_from_elements(const std::vector<int>& elems) {
  Mask m = 0;
  for (int e : elems) m |= Mask{1} << (e - 1);
  return m;
}

// All size-k subsets of [n] in increasing mask order (Gosper's hack).
inline std::vector<Mask> subsets_of_size(int n, int k) {
  if (k == 0) return {0};
  std::vector<Mask> out;
  if (k > n) return out;
  Mask s = low_mask(k);
  const Mask limit = n >= 64 ? ~Mask{0} : Mask{1} << n;
  while (s < limit) {
    out.push_back(s);
    const Mask c = s & (~s + 1);
    const Mask r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
  }
  return out;
}

// C(n, k), or cap + 1 once it exceeds cap.
inline std::size_t binomial_capped(int n, int k, std::size_t cap) {
  if (k < 0 || k > n) return 0;
  long double c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(c + 0.5L);
}

}  // namespace parlab
