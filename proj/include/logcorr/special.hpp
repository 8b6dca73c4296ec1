#pragma once

#include <cmath>
#include <complex>

#include "logcorr/bigint.hpp"
#include "logcorr/common.hpp"

namespace logcorr {

/// zeta'(-1) = 1/12 - log A (A the Glaisher–Kinkelin constant).
inline constexpr double kZetaPrimeMinusOne = -0.16542114370045092921391966024278065;

struct SignedLog {
  double log_abs;
  int sign;  // +1, -1, or 0 at a pole/zero
};

/// log |Gamma(x)| with sign, valid for all real x off the poles.
inline SignedLog lgamma_signed(double x) {
  if (x > 0) return {std::lgamma(x), 1};
  if (x == std::floor(x)) return {kInf, 0};  // pole at nonpositive integers
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  const double s = std::sin(kPi * x);
  const double la = std::log(kPi / std::abs(s)) - std::lgamma(1.0 - x);
  return {la, s > 0 ? 1 : -1};
}

inline double gamma_ratio(double num, double den) {
  // Gamma(num)/Gamma(den) for positive arguments, in log space.
  return std::exp(std::lgamma(num) - std::lgamma(den));
}

/// log Gamma(z) for complex z, principal branch (Re z can be <= 0 except poles).
inline std::complex<double> lgamma_complex(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection formula.
    const std::complex<double> lsin = std::log(std::sin(kPi * z));
    return std::log(kPi) - lsin - lgamma_complex(1.0 - z);
  }
  // Shift until |z| is large, then Stirling with Bernoulli terms.
  std::complex<double> shift(0.0, 0.0);
  while (std::abs(z) < 15.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  static const double bern[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680,
                                1.0 / 1188, -691.0 / 360360, 1.0 / 156};
  std::complex<double> acc = (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi);
  std::complex<double> zp = z;
  const std::complex<double> z2 = z * z;
  for (double b : bern) {
    acc += b / zp;
    zp *= z2;
  }
  return acc + shift;
}

/// log of the Barnes G-function at real argument x > 0.
/// Integer arguments reduce to products of factorials, G(n) = prod_{j<n-1} j!.
/// General x: recurrence log G(x+1) = log Gamma(x) + log G(x) pushes the
/// argument up, then the Barnes asymptotic expansion with the zeta'(-1)
/// constant finishes the job.
inline double log_barnes_g(double x) {
  require(x > 0, "log_barnes_g: need x > 0");
  double shift = 0.0;
  while (x < 21.0) {
    shift -= std::lgamma(x);
    x += 1.0;
  }
  const double z = x - 1.0;  // expand log G(1+z)
  const double z2 = z * z;
  double acc = 0.5 * z2 * std::log(z) - 0.75 * z2 + 0.5 * z * std::log(kTwoPi) -
               std::log(z) / 12.0 + kZetaPrimeMinusOne;
  // B_{2k+2} / (2k (2k+2) z^{2k}), k = 1..4 (validated against exact integer
  // anchors: -1/240 z^-2, +1/1008 z^-4, ...)
  const double b4 = -1.0 / 30, b6 = 1.0 / 42, b8 = -1.0 / 30, b10 = 5.0 / 66;
  acc += b4 / (2 * 4 * z2);
  acc += b6 / (4 * 6 * z2 * z2);
  acc += b8 / (6 * 8 * z2 * z2 * z2);
  acc += b10 / (8 * 10 * z2 * z2 * z2 * z2);
  return acc + shift;
}

inline double barnes_g(double x) { return std::exp(log_barnes_g(x)); }

/// (2j-1)!! products as exact integers.
inline BigInt double_factorial_odd(unsigned long j) {
  // (2j-1)!! = (2j)! / (2^j j!)
  BigInt num = big_factorial(2 * j);
  BigInt den = big_pow(BigInt(2), j) * big_factorial(j);
  return num / den;
}

namespace detail {

inline double bessel_k0_series(double x) {
  // K0 = -(log(x/2) + gamma) I0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
  const double t = 0.25 * x * x;
  double term = 1.0, i0 = 1.0, sum = 0.0, hk = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= t / (static_cast<double>(k) * k);
    i0 += term;
    hk += 1.0 / k;
    const double add = term * hk;
    sum += add;
    if (term < 1e-19 * i0 && add < 1e-19 * (std::abs(sum) + 1.0)) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i0 + sum;
}

inline double bessel_k0_asymptotic(double x) {
  // K0(x) ~ sqrt(pi/2x) e^{-x} [1 - 1/8x + 9/2!(8x)^2 - ...], truncated at the
  // smallest term.
  double term = 1.0, sum = 1.0, prev = kInf;
  for (int k = 1; k < 60; ++k) {
    const double f = -(sq(2.0 * k - 1.0)) / (8.0 * x * k);
    term *= f;
    if (std::abs(term) >= prev) break;  // divergence onset
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-18 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

}  // namespace detail

/// Modified Bessel function K0.  Series below the switch point, asymptotic
/// expansion above; the switch sits where both sides deliver <= 1e-8 relative.
inline double bessel_k0(double x) {
  require(x > 0, "bessel_k0: need x > 0");
  return x < 9.5 ? detail::bessel_k0_series(x) : detail::bessel_k0_asymptotic(x);
}

/// Quadrature of the integral representation K0(x) = int_0^inf e^{-x cosh t} dt.
/// Trapezoid on a doubly-exponentially decaying integrand; used to validate
/// the series/asymptotic switch.
inline double bessel_k0_quadrature(double x, double h = 0.01) {
  require(x > 0, "bessel_k0_quadrature: need x > 0");
  double sum = 0.5 * std::exp(-x);  // t = 0 endpoint, cosh 0 = 1
  for (int k = 1; k < 2000000; ++k) {
    const double t = h * k;
    const double e = x * std::cosh(t);
    if (e > 750.0) break;
    sum += std::exp(-e);
  }
  return sum * h;
}

}  // namespace logcorr
