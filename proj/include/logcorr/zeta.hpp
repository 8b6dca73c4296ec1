#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "logcorr/common.hpp"
#include "logcorr/special.hpp"

namespace logcorr {

namespace detail {
// B_{2k} for k = 1..15.
inline constexpr double kBernoulli2k[] = {
    1.0 / 6,        -1.0 / 30,          1.0 / 42,           -1.0 / 30,
    5.0 / 66,       -691.0 / 2730,      7.0 / 6,            -3617.0 / 510,
    43867.0 / 798,  -174611.0 / 330,    854513.0 / 138,     -236364091.0 / 2730,
    8553103.0 / 6,  -23749461029.0 / 870, 8615841276005.0 / 14322};
}  // namespace detail

/// Riemann zeta via Euler–Maclaurin, valid off the pole s = 1.
/// Desk-scale: |Im s| up to ~1e6.
inline std::complex<double> zeta_complex(std::complex<double> s) {
  require(std::abs(s - std::complex<double>(1.0, 0.0)) > 1e-12, "zeta_complex: pole at s = 1");
  const double t = std::abs(s.imag());
  require(t <= 2.0e6, "zeta_complex: |Im s| above the desk-scale budget");
  const std::size_t M = static_cast<std::size_t>(std::max(32.0, std::ceil(0.8 * t + 10.0)));

  std::complex<double> sum(0.0, 0.0);
  for (std::size_t n = 1; n < M; ++n)
    sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double dM = static_cast<double>(M);
  const std::complex<double> Ms = std::exp(-s * std::log(dM));
  sum += Ms * dM / (s - 1.0);  // M^{1-s}/(s-1)
  sum += 0.5 * Ms;

  // Correction terms B_{2k}/(2k)! * (s)(s+1)...(s+2k-2) * M^{-s-2k+1}
  std::complex<double> rising(1.0, 0.0);
  double fact = 1.0;
  std::complex<double> mpow = Ms * dM;  // M^{1-s}
  double prev_mag = kInf;
  for (int k = 1; k <= 15; ++k) {
    rising *= (s + std::complex<double>(2.0 * k - 2.0, 0.0));
    if (k > 1) rising *= (s + std::complex<double>(2.0 * k - 3.0, 0.0));
    fact *= (2.0 * k) * (2.0 * k - 1.0);
    mpow /= dM * dM;  // M^{1-s-2k}... accumulate M^{-s-2k+1}
    const std::complex<double> term = detail::kBernoulli2k[k - 1] / fact * rising * mpow;
    const double mag = std::abs(term);
    if (mag >= prev_mag) break;  // asymptotic tail started to diverge
    sum += term;
    prev_mag = mag;
    if (mag < 1e-14 * std::abs(sum)) break;
  }
  return sum;
}

/// zeta(1/2 + it).
inline std::complex<double> zeta_eval(double t) {
  require(std::abs(t) <= 1.0e6, "zeta_eval: |t| above the desk-scale budget");
  return zeta_complex(std::complex<double>(0.5, t));
}

/// Residual of the functional equation zeta(s) = chi(s) zeta(1-s),
/// chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s).
inline double zeta_functional_equation_residual(std::complex<double> s) {
  const std::complex<double> lhs = zeta_complex(s);
  const std::complex<double> chi = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) +
                                            lgamma_complex(1.0 - s)) *
                                   std::sin(0.5 * kPi * s);
  return std::abs(lhs - chi * zeta_complex(1.0 - s));
}

struct IntervalMax {
  double h_star = 0.0;
  double value = 0.0;
};

/// Max of |zeta(1/2 + i(t0+h))| over h in [0, window], grid scan plus a local
/// golden-section polish.
inline IntervalMax zeta_interval_max(double t0, double window, std::size_t grid) {
  require(t0 > 2.0 && window > 0, "zeta_interval_max: bad interval");
  require(static_cast<double>(grid) >= window * std::log(t0),
          "zeta_interval_max: grid below window*log t");
  auto f = [&](double h) { return std::abs(zeta_eval(t0 + h)); };
  IntervalMax best;
  double best_h = 0.0, best_v = -kInf;
  const double dh = window / static_cast<double>(grid);
  for (std::size_t i = 0; i <= grid; ++i) {
    const double h = static_cast<double>(i) * dh;
    const double v = f(h);
    if (v > best_v) {
      best_v = v;
      best_h = h;
    }
  }
  // golden-section refinement around the best grid point
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0.0, best_h - dh), b = std::min(window, best_h + dh);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 40; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double hm = 0.5 * (a + b), vm = f(hm);
  best.h_star = vm > best_v ? hm : best_h;
  best.value = std::max(vm, best_v);
  return best;
}

}  // namespace logcorr
