#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "logcorr/common.hpp"

namespace logcorr {

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;
};

/// Segmented sieve of Eratosthenes, complete up to `limit` inclusive.
inline PrimeTable prime_sieve(std::uint64_t limit) {
  require(limit <= 1000000000ULL, "prime_sieve: limit above the 1e9 budget");
  PrimeTable t;
  t.limit = limit;
  if (limit < 2) return t;

  std::uint64_t root = 2;
  while (root * root <= limit) ++root;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }

  const std::uint64_t seg = 1 << 18;
  std::vector<bool> mark(seg);
  for (std::uint64_t lo = 2; lo <= limit; lo += seg) {
    const std::uint64_t hi = std::min(limit, lo + seg - 1);
    std::fill(mark.begin(), mark.end(), true);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      for (std::uint64_t j = std::max(p * p, ((lo + p - 1) / p) * p); j <= hi; j += p)
        mark[j - lo] = false;
    }
    for (std::uint64_t v = lo; v <= hi; ++v)
      if (mark[v - lo]) t.primes.push_back(v);
  }
  return t;
}

}  // namespace logcorr
