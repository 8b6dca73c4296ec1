#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "logcorr/common.hpp"
#include "logcorr/primes.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/zeta.hpp"

namespace logcorr {

enum class ModelVariant { Steinhaus, Gaussian };

/// Prime-based randomized model of log|zeta(1/2 + i(tau + h))| on h in [0,1],
/// with T = e^{2^n}.
struct ModelConfig {
  int n = 3;                  // T = e^{2^n}; n <= 4 keeps the sieve desk-scale
  ModelVariant variant = ModelVariant::Steinhaus;
  int grid_size = 64;         // >= 2^n; default 2^{n+3} in the CLI
  bool second_order = false;  // adds Re(U_p^2 p^{-2ih})/(2p)

  void validate() const {
    require(n >= 1 && n <= 4, "ModelConfig: n in [1, 4] (prime budget e^16)");
    require(grid_size >= (1 << n), "ModelConfig: grid_size >= 2^n");
  }
  double t_cutoff() const { return std::exp(std::pow(2.0, n)); }
};

/// Cached log p and p^{-1/2} for the model sums.
struct ModelPrimes {
  std::vector<double> log_p;
  std::vector<double> inv_sqrt_p;
  std::vector<double> inv_p;
};

inline ModelPrimes model_primes(const ModelConfig& cfg) {
  cfg.validate();
  const auto limit = static_cast<std::uint64_t>(std::floor(cfg.t_cutoff()));
  const PrimeTable tab = prime_sieve(limit);
  ModelPrimes mp;
  mp.log_p.reserve(tab.primes.size());
  for (std::uint64_t p : tab.primes) {
    const double pd = static_cast<double>(p);
    mp.log_p.push_back(std::log(pd));
    mp.inv_sqrt_p.push_back(1.0 / std::sqrt(pd));
    mp.inv_p.push_back(1.0 / pd);
  }
  return mp;
}

/// One replicate of the field X(h) = sum_{p <= T} Re(p^{-ih} U_p)/sqrt(p) on
/// the uniform h-grid over [0, 1]; one shared draw per prime across all h.
/// The optional second-order term adds Re(U_p^2 p^{-2ih})/(2p).
inline std::vector<double> model_field(const ModelConfig& cfg, const ModelPrimes& primes,
                                       Rng& rng) {
  cfg.validate();
  const std::size_t g = static_cast<std::size_t>(cfg.grid_size);
  std::vector<double> x(g, 0.0);
  const double dh = 1.0 / static_cast<double>(g);
  for (std::size_t ip = 0; ip < primes.log_p.size(); ++ip) {
    const std::complex<double> u = cfg.variant == ModelVariant::Steinhaus
                                       ? rng.unit_circle()
                                       : rng.complex_normal();
    const double w1 = primes.inv_sqrt_p[ip];
    // rotation recurrence over the grid: p^{-ih} steps by e^{-i dh log p}
    const double ang = dh * primes.log_p[ip];
    const std::complex<double> step(std::cos(ang), -std::sin(ang));
    std::complex<double> rot(1.0, 0.0);
    if (!cfg.second_order) {
      std::complex<double> z = u;
      for (std::size_t j = 0; j < g; ++j) {
        x[j] += w1 * z.real();
        z *= step;
      }
    } else {
      const double w2 = 0.5 * primes.inv_p[ip];
      const std::complex<double> u2 = u * u;
      std::complex<double> z = u;
      std::complex<double> z2 = u2;
      const std::complex<double> step2 = step * step;
      for (std::size_t j = 0; j < g; ++j) {
        x[j] += w1 * z.real() + w2 * z2.real();
        z *= step;
        z2 *= step2;
      }
    }
    (void)rot;
  }
  return x;
}

inline std::vector<double> model_field(const ModelConfig& cfg, Rng& rng) {
  const ModelPrimes primes = model_primes(cfg);
  return model_field(cfg, primes, rng);
}

/// Deterministic increment variance sum_{2^{m-1} < log p <= 2^m} 1/(2p),
/// which tends to (1/2) log 2.
inline double increment_covariance_sum(int m) {
  require(m >= 1 && m <= 4, "increment_covariance_sum: m in [1, 4]");
  const double lo = std::exp(std::pow(2.0, m - 1));
  const double hi = std::exp(std::pow(2.0, m));
  const PrimeTable tab = prime_sieve(static_cast<std::uint64_t>(std::floor(hi)));
  double acc = 0.0;
  for (std::uint64_t p : tab.primes) {
    const double pd = static_cast<double>(p);
    if (pd > lo && pd <= hi) acc += 0.5 / pd;
  }
  return acc;
}

struct ModelMaxReport {
  double mean_max = 0.0;
  double stderr_max = 0.0;
  double loglog_t = 0.0;             // n log 2
  double recentred = 0.0;            // mean max - (loglog T - 3/4 logloglog T)
  double ratio_leading = 0.0;        // mean max / loglog T
};

/// Mean of max_h X(h) over replicates, reported against log log T = n log 2
/// and against log log T - (3/4) log log log T.
inline ModelMaxReport model_max_experiment(const ModelConfig& cfg, int trials, Rng& rng) {
  cfg.validate();
  require(trials >= 200, "model_max_experiment: trials >= 200");
  const ModelPrimes primes = model_primes(cfg);
  RunningStats st;
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> x = model_field(cfg, primes, rng);
    double mx = -kInf;
    for (double v : x) mx = std::max(mx, v);
    st.push(mx);
  }
  ModelMaxReport r;
  r.mean_max = st.mean();
  r.stderr_max = st.stderr_mean();
  r.loglog_t = cfg.n * std::log(2.0);
  r.recentred = st.mean() - (r.loglog_t - 0.75 * std::log(r.loglog_t));
  r.ratio_leading = st.mean() / r.loglog_t;
  return r;
}

// ---------------------------------------------------------------------------
// Arithmetic building blocks.
// ---------------------------------------------------------------------------

/// Kronecker symbol (d/n) for n >= 0, with the conventions
/// (d/1) = 1, (d/2) in {0, +-1} by d mod 8, (d/0) = [d = +-1].
inline int kronecker_symbol(long long d, unsigned long long n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  if (n == 1) return 1;
  int result = 1;
  // factor out twos
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    const long long dm = ((d % 8) + 8) % 8;
    if (dm == 3 || dm == 5) result = -result;
  }
  // now n odd: multiplicativity over the odd prime factors via Jacobi with
  // quadratic reciprocity
  long long a = d % static_cast<long long>(n);
  if (a < 0) a += static_cast<long long>(n);
  unsigned long long num = static_cast<unsigned long long>(a), den = n;
  while (num != 0) {
    while (num % 2 == 0) {
      num /= 2;
      const unsigned long long dm = den % 8;
      if (dm == 3 || dm == 5) result = -result;
    }
    std::swap(num, den);
    if (num % 4 == 3 && den % 4 == 3) result = -result;
    num %= den;
  }
  return den == 1 ? result : 0;
}

/// Fundamental discriminant: d = 1 mod 4 square-free, or d = 4m with
/// m = 2, 3 mod 4 square-free.
inline bool is_fundamental_discriminant(long long d) {
  if (d == 0) return false;
  auto square_free = [](long long v) {
    v = std::llabs(v);
    for (long long f = 2; f * f <= v; ++f) {
      if (v % (f * f) == 0) return false;
    }
    return true;
  };
  const long long mod4 = ((d % 4) + 4) % 4;
  if (mod4 == 1) return square_free(d);
  if (d % 4 == 0) {
    const long long m = d / 4;
    const long long m4 = ((m % 4) + 4) % 4;
    if (m4 == 2 || m4 == 3) return square_free(m);
  }
  return false;
}

/// a_p = p + 1 - #{(x, y) in F_p^2 : y^2 = x^3 + a x + b} by direct count
/// via the Legendre character, for good primes p not dividing the
/// discriminant -16(4a^3 + 27b^2).
inline long long elliptic_ap(long long a, long long b, long long p) {
  require(p >= 2 && p <= 1000000, "elliptic_ap: prime budget p <= 1e6");
  // primality (trial division; desk scale)
  for (long long f = 2; f * f <= p; ++f) require(p % f != 0, "elliptic_ap: p must be prime");
  // discriminant checks in exact arithmetic via __int128
  const __int128 disc = -16 * (4 * static_cast<__int128>(a) * a * a +
                               27 * static_cast<__int128>(b) * b);
  require(disc != 0, "elliptic_ap: singular curve (discriminant zero)");
  require(static_cast<long long>(disc % p) != 0, "elliptic_ap: bad prime p | discriminant");

  auto mod = [&](long long v) {
    long long r = v % p;
    return r < 0 ? r + p : r;
  };
  auto powmod = [&](long long base, long long e) {
    long long acc = 1;
    base = mod(base);
    while (e > 0) {
      if (e & 1) acc = static_cast<long long>(static_cast<__int128>(acc) * base % p);
      base = static_cast<long long>(static_cast<__int128>(base) * base % p);
      e >>= 1;
    }
    return acc;
  };
  // chi(t) via Euler's criterion; p = 2 handled by direct enumeration
  long long affine = 0;
  if (p == 2) {
    for (long long x = 0; x < 2; ++x)
      for (long long y = 0; y < 2; ++y)
        if (mod(y * y - (x * x * x + a * x + b)) == 0) ++affine;
  } else {
    for (long long x = 0; x < p; ++x) {
      const long long t = mod(static_cast<long long>(
          (static_cast<__int128>(x) * x % p * x + static_cast<__int128>(a) * x + b) % p));
      if (t == 0) {
        affine += 1;
      } else {
        const long long chi = powmod(t, (p - 1) / 2);
        affine += (chi == 1) ? 2 : 0;
      }
    }
  }
  return p + 1 - affine;
}

}  // namespace logcorr
