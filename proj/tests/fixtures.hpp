// Copyright (c) 2026 The symref authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures: the linear demo problem, deterministic RNG helpers,
// and set-comparison utilities for permutation groups.

#ifndef SYMREF_TESTS_FIXTURES_HPP
#define SYMREF_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "symref/expr.hpp"
#include "symref/instances.hpp"
#include "symref/model.hpp"

namespace symref::testfix {

// 4 x1 - 4 x2 + x3 - x4 <= 0 over [-1,1]^2 x [1,3] x [-2,0]; byte-identical
// to the checked-in demo instance.
inline Minlp demo_linear() {
  return parse_instance(
      "var x1 -1 1 cont 0\n"
      "var x2 -1 1 cont 0\n"
      "var x3 1 3 cont 0\n"
      "var x4 -2 0 cont 0\n"
      "con expr (+ (* 4 x1) (* -4 x2) x3 (neg x4)) le 0\n");
}

// xorshift64*; deterministic across platforms.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    return s * 0x2545f4914f6cdd1dULL;
  }
  int uniform(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) / 9007199254740992.0);
  }
  bool coin() { return (next() & 1) != 0; }
};

inline SignedPermutation random_signed_perm(Rng& rng, int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(img[i], img[rng.uniform(i + 1)]);
  for (int i = 0; i < n; ++i)
    if (rng.coin()) img[i] = -img[i];
  return SignedPermutation(img);
}

inline std::set<std::vector<int>> perm_set(const std::vector<SignedPermutation>& v) {
  std::set<std::vector<int>> out;
  for (const auto& g : v) out.insert(g.images());
  return out;
}

}  // namespace symref::testfix

#endif
