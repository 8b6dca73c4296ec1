#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>

#include "logcorr/common.hpp"

namespace logcorr {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// xoshiro256++ with splitmix64 seeding.  Every stochastic operation in the
/// library draws from an Rng passed in by the caller, so identical seeds give
/// bit-identical runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /// Stable replicate stream: hash of (master seed, label, replicate index).
  static Rng substream(std::uint64_t master, std::string_view label, std::uint64_t replicate) {
    std::uint64_t sm = master ^ (0x9e3779b97f4a7c15ULL + fnv1a(label));
    std::uint64_t a = splitmix64(sm);
    sm = a + 0xd1b54a32d192ed03ULL * (replicate + 1);
    return Rng(splitmix64(sm));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1]; never zero, safe for logs and inverse CDFs.
  double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via polar Box–Muller (second value cached).
  double normal() {
    if (have_cache_) {
      have_cache_ = false;
      return cache_;
    }
    double u, v, r2;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      r2 = u * u + v * v;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    cache_ = v * f;
    have_cache_ = true;
    return u * f;
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double s = std::sqrt(0.5);
    return {s * normal(), s * normal()};
  }

  /// Uniform on the unit circle (Steinhaus variable).
  std::complex<double> unit_circle() {
    const double t = kTwoPi * uniform();
    return {std::cos(t), std::sin(t)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4] = {};
  double cache_ = 0.0;
  bool have_cache_ = false;
};

}  // namespace logcorr
