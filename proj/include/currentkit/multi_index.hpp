#pragma once
#include <array>
#include <cassert>
#include <cstdint>
#include <vector>

#include "currentkit/errors.hpp"

namespace ck {

// Basis k-vectors are labeled by strictly increasing index tuples. Internally
// indices are 0-based; the JSON / printing layer is 1-based. d is capped at 16
// so every coefficient array fits comfortably in memory (C(16,8) = 12870).
constexpr int kMaxDim = 16;

using MultiIndex = std::vector<int>;

inline int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  static const auto table = [] {
    std::array<std::array<int64_t, kMaxDim + 1>, kMaxDim + 1> t{};
    for (int i = 0; i <= kMaxDim; ++i) {
      t[i][0] = 1;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
    }
    return t;
  }();
  assert(n <= kMaxDim);
  return table[n][k];
}

inline void check_grade(int d, int k) {
  if (d < 0 || d > kMaxDim)
    throw capability_error("dimension must be in [0, 16], got " + std::to_string(d));
  if (k < 0 || k > d)
    throw std::invalid_argument("grade " + std::to_string(k) +
                                " out of range for dimension " + std::to_string(d));
}

// Lexicographic rank of a strictly increasing tuple over {0..d-1}.
inline int64_t index_rank(int d, const MultiIndex& I) {
  int k = static_cast<int>(I.size());
  int64_t r = 0;
  int prev = -1;
  for (int t = 0; t < k; ++t) {
    assert(I[t] > prev && I[t] < d);
    for (int v = prev + 1; v < I[t]; ++v) r += binom(d - 1 - v, k - 1 - t);
    prev = I[t];
  }
  return r;
}

inline MultiIndex index_unrank(int d, int k, int64_t r) {
  MultiIndex I(k);
  int v = 0;
  for (int t = 0; t < k; ++t) {
    for (;; ++v) {
      int64_t block = binom(d - 1 - v, k - 1 - t);
      if (r < block) break;
      r -= block;
    }
    I[t] = v++;
  }
  return I;
}

inline std::vector<MultiIndex> all_indices(int d, int k) {
  int64_t n = binom(d, k);
  std::vector<MultiIndex> out;
  out.reserve(n);
  for (int64_t r = 0; r < n; ++r) out.push_back(index_unrank(d, k, r));
  return out;
}

// Merge two increasing tuples into `out`. Returns the sign of the permutation
// sorting their concatenation, or 0 when they share an index.
inline int merge_sign(const MultiIndex& I, const MultiIndex& J, MultiIndex& out) {
  out.clear();
  out.reserve(I.size() + J.size());
  size_t i = 0, j = 0;
  int64_t inversions = 0;
  while (i < I.size() && j < J.size()) {
    if (I[i] == J[j]) return 0;
    if (I[i] < J[j]) {
      out.push_back(I[i++]);
    } else {
      // J[j] jumps over the remaining entries of I
      inversions += static_cast<int64_t>(I.size() - i);
      out.push_back(J[j++]);
    }
  }
  while (i < I.size()) out.push_back(I[i++]);
  while (j < J.size()) out.push_back(J[j++]);
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace ck
