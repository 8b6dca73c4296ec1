#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "logcorr/bigint.hpp"
#include "logcorr/common.hpp"
#include "logcorr/ensembles.hpp"
#include "logcorr/primes.hpp"
#include "logcorr/special.hpp"

namespace logcorr {

/// M_N(beta) = prod_{j=1..N} Gamma(j) Gamma(j+2b) / Gamma(j+b)^2.
inline double keating_snaith_moment(int n, double beta) {
  require(2.0 * beta > -1.0, "keating_snaith_moment: need 2*beta > -1");
  require(n >= 0, "keating_snaith_moment: N >= 0");
  double acc = 0.0;
  for (int j = 1; j <= n; ++j)
    acc += std::lgamma(j) + std::lgamma(j + 2.0 * beta) - 2.0 * std::lgamma(j + beta);
  return std::exp(acc);
}

/// Exact rational value for integer beta, prod_{j=0..N-1} j!(j+2b)!/((j+b)!)^2.
inline BigRat keating_snaith_moment_exact(int n, int beta) {
  require(beta >= 0, "keating_snaith_moment_exact: beta >= 0");
  require(n >= 0, "keating_snaith_moment_exact: N >= 0");
  BigRat acc(1);
  for (int j = 0; j < n; ++j) {
    const auto ju = static_cast<unsigned long>(j);
    const auto bu = static_cast<unsigned long>(beta);
    BigRat num(big_factorial(ju) * big_factorial(ju + 2 * bu));
    BigRat den(big_factorial(ju + bu) * big_factorial(ju + bu));
    acc *= num / den;
  }
  acc.canonicalize();
  return acc;
}

/// Leading-order moment coefficients: c_U(b) = G^2(1+b)/G(1+2b),
/// c_Sp(b) = 1/prod_{j<=2b}(2j-1)!!, c_SO(b) = 2^{2b}/prod_{j<=2b-1}(2j-1)!!.
/// Sp/SO require 2b to be a positive integer (finite double-factorial products).
inline double symmetry_coefficient(Group group, double beta) {
  require(beta > 0, "symmetry_coefficient: beta > 0");
  switch (group) {
    case Group::Unitary:
      return std::exp(2.0 * log_barnes_g(1.0 + beta) - log_barnes_g(1.0 + 2.0 * beta));
    case Group::Symplectic:
    case Group::SpecialOrthogonalEven: {
      const double tb = 2.0 * beta;
      require(std::abs(tb - std::round(tb)) < 1e-12 && tb >= 1.0,
              "symmetry_coefficient: Sp/SO need 2*beta a positive integer");
      const auto m = static_cast<unsigned long>(std::llround(tb));
      if (group == Group::Symplectic) {
        BigInt prod(1);
        for (unsigned long j = 1; j <= m; ++j) prod *= double_factorial_odd(j);
        return 1.0 / prod.get_d();
      }
      BigInt prod(1);
      for (unsigned long j = 1; j + 1 <= m; ++j) prod *= double_factorial_odd(j);
      return std::pow(2.0, tb) / prod.get_d();
    }
    default:
      throw Error("symmetry_coefficient: unsupported group");
  }
}

/// Selberg's integral J(a, b, alpha, beta, gamma, n) in closed form.
inline double selberg_integral(double a, double b, double alpha, double beta, double gamma, int n) {
  require(n >= 1, "selberg_integral: n >= 1");
  require(a > 0, "selberg_integral: constraint Re(a) > 0 violated");
  require(b > 0, "selberg_integral: constraint Re(b) > 0 violated");
  require(alpha > 0, "selberg_integral: constraint Re(alpha) > 0 violated");
  require(beta > 0, "selberg_integral: constraint Re(beta) > 0 violated");
  require(alpha + beta > 1, "selberg_integral: constraint Re(alpha+beta) > 1 violated");
  require(gamma > -1.0 / n, "selberg_integral: constraint gamma > -1/n violated");
  if (n > 1) {
    const double cap = std::min({alpha / (n - 1), beta / (n - 1), (alpha + beta + 1) / (2.0 * (n - 1))});
    require(gamma < cap, "selberg_integral: constraint gamma < min(alpha, beta, (alpha+beta+1)/2)/(n-1) violated");
  }
  double log_abs = n * std::log(kTwoPi) -
                   ((alpha + beta) * n - gamma * n * (n - 1.0) - n) * std::log(a + b);
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    const SignedLog t1 = lgamma_signed(1.0 + gamma + j * gamma);
    const SignedLog t2 = lgamma_signed(alpha + beta - (n - 1 + j) * gamma - 1.0);
    const SignedLog t3 = lgamma_signed(1.0 + gamma);
    const SignedLog t4 = lgamma_signed(alpha - j * gamma);
    const SignedLog t5 = lgamma_signed(beta - j * gamma);
    require(t1.sign != 0 && t2.sign != 0 && t3.sign != 0 && t4.sign != 0 && t5.sign != 0,
            "selberg_integral: gamma hits a Gamma pole");
    log_abs += t1.log_abs + t2.log_abs - t3.log_abs - t4.log_abs - t5.log_abs;
    sign *= t1.sign * t2.sign * t3.sign * t4.sign * t5.sign;
  }
  return sign * std::exp(log_abs);
}

/// Density of the sum of two independent standard Gumbel variables,
/// p(y) = 2 e^{-y} K0(2 e^{-y/2}).
inline double gumbel_sum_density(double y) {
  const double x = 2.0 * std::exp(-0.5 * y);
  if (x > 700.0) return 0.0;  // doubly-exponential left tail underflows
  return 2.0 * std::exp(-y) * bessel_k0(x);
}

/// Gamma(1 - k b^2) / Gamma(1 - b^2)^k, the subcritical moment-of-moments
/// factor (Fyodorov-Bouchaud / Remy).
inline double fyodorov_bouchaud_moment(double k, double beta) {
  require(k * beta * beta < 1.0, "fyodorov_bouchaud_moment: need k*beta^2 < 1");
  return std::exp(std::lgamma(1.0 - k * beta * beta) - k * std::lgamma(1.0 - beta * beta));
}

enum class MomRegime { Subcritical, Critical, Supercritical };

inline std::string regime_name(MomRegime r) {
  switch (r) {
    case MomRegime::Subcritical: return "subcritical";
    case MomRegime::Critical: return "critical";
    case MomRegime::Supercritical: return "supercritical";
  }
  return "?";
}

struct MomPrediction {
  MomRegime regime = MomRegime::Subcritical;
  double exponent = 0.0;
  std::optional<double> coefficient;
  std::optional<std::string> modulating_factor;  // "log N" at criticality

  double evaluate(double n) const {
    double v = std::pow(n, exponent);
    if (modulating_factor) v *= std::log(n);
    return coefficient ? *coefficient * v : v;
  }
};

/// Conjectured moments-of-moments growth.  Regime classification is exact on
/// the rational value k*beta^2; Sp/SO exponents require integer k, beta.
inline MomPrediction mom_prediction(Group group, const BigRat& k, const BigRat& beta, int n) {
  require(k > 0 && beta > 0, "mom_prediction: k, beta > 0");
  require(n >= 1, "mom_prediction: N >= 1");
  const BigRat kb2 = k * beta * beta;
  const double kd = to_double(k), bd = to_double(beta);
  MomPrediction p;
  p.regime = kb2 < 1 ? MomRegime::Subcritical
                     : (kb2 == 1 ? MomRegime::Critical : MomRegime::Supercritical);

  if (group == Group::Unitary || group == Group::CircularBeta) {
    require(group == Group::Unitary, "mom_prediction: CbetaE prediction not exposed");
    switch (p.regime) {
      case MomRegime::Subcritical:
        p.exponent = to_double(kb2);
        p.coefficient = std::pow(symmetry_coefficient(Group::Unitary, bd), kd) *
                        fyodorov_bouchaud_moment(kd, bd);
        break;
      case MomRegime::Critical: {
        p.exponent = 1.0;
        p.modulating_factor = "log N";
        if (kd > 1.0) {
          // Keating-Wong critical coefficient at beta = 1/sqrt(k); proved for
          // integer k >= 2, conjectural otherwise.
          p.coefficient = (kd - 1.0) / std::pow(std::tgamma(1.0 - 1.0 / kd), kd) *
                          std::pow(symmetry_coefficient(Group::Unitary, 1.0 / std::sqrt(kd)), kd);
        }
        break;
      }
      case MomRegime::Supercritical:
        // gamma_{k,beta} is an unevaluated integral in the source; left absent.
        p.exponent = to_double(k * k * beta * beta - k + 1);
        break;
    }
    return p;
  }

  require(group == Group::Symplectic || group == Group::SpecialOrthogonalEven,
          "mom_prediction: unsupported group");
  require(k.get_den() == 1 && beta.get_den() == 1,
          "mom_prediction: Sp/SO predictions need integer k, beta");
  if (group == Group::Symplectic) {
    p.exponent = to_double(k * beta * (2 * k * beta + 1) - k);
  } else if (k == 1 && beta == 1) {
    // mom_SO(2N)(1,1) = 2(N+1) exactly; the generic exponent formula does not
    // cover this case.
    p.exponent = 1.0;
    p.coefficient = 2.0;
  } else {
    p.exponent = to_double(k * beta * (2 * k * beta - 1) - k);
  }
  return p;
}

/// Truncated Euler product a_zeta(beta) over primes <= p_max.
inline double zeta_arithmetic_factor(double beta, std::uint64_t p_max) {
  require(beta > 0, "zeta_arithmetic_factor: beta > 0");
  require(p_max >= 2, "zeta_arithmetic_factor: p_max >= 2");
  const PrimeTable tab = prime_sieve(p_max);
  double log_acc = 0.0;
  for (std::uint64_t p : tab.primes) {
    const double pd = static_cast<double>(p);
    double term = 1.0, sum = 1.0;
    for (int m = 0; m < 100000; ++m) {
      const double r = (beta + m) / (m + 1.0);
      term *= r * r / pd;
      sum += term;
      if (term < 1e-14 * sum && term * pd / (pd - 1.0) < 1e-14 * sum) break;
    }
    log_acc += beta * beta * std::log1p(-1.0 / pd) + std::log(sum);
  }
  return std::exp(log_acc);
}

/// Expected BRW maximum, c n - (3/2)(sigma^2/c) log n with c = sqrt(2 sigma^2 log 2).
inline double bramson_prediction(double n, double sigma2) {
  require(n >= 2 && sigma2 > 0, "bramson_prediction: n >= 2, sigma2 > 0");
  const double c = std::sqrt(2.0 * sigma2 * std::log(2.0));
  return c * n - 1.5 * (sigma2 / c) * std::log(n);
}

/// iid counterpart: subleading coefficient sigma^2/(2c) (= 1/4 at
/// sigma^2 = (1/2) log 2), half the per-unit log-correlated pull-down of 3/2.
inline double bramson_iid_prediction(double n, double sigma2) {
  require(n >= 2 && sigma2 > 0, "bramson_iid_prediction: n >= 2, sigma2 > 0");
  const double c = std::sqrt(2.0 * sigma2 * std::log(2.0));
  return c * n - 0.5 * (sigma2 / c) * std::log(n);
}

}  // namespace logcorr
