#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "logcorr/common.hpp"
#include "logcorr/ensembles.hpp"
#include "logcorr/rng.hpp"

namespace logcorr {

// Distance-to-eigenphase cutoff below which log|P| is reported as -infinity,
// expressed on |1 - e^{i d}|^2 = 2 - 2 cos d:  d < 1e-12  <=>  term < 1e-24.
inline constexpr double kSingularTerm = 1e-24;

/// log |P_N(A, theta)| = sum_j log |1 - e^{i(theta_j - theta)}|; -inf within
/// 1e-12 of an eigenphase.
inline double log_abs_charpoly(const EigenphaseSet& eigs, double theta) {
  double acc = 0.0;
  for (double t : eigs.phases) {
    const double term = 2.0 - 2.0 * std::cos(t - theta);
    if (term <= kSingularTerm) return -kInf;
    acc += 0.5 * std::log(term);
  }
  return acc;
}

/// V_N(A, theta) = -2 log |P_N(A, theta)|; +inf at eigenphases.
inline double negative_log_field(const EigenphaseSet& eigs, double theta) {
  return -2.0 * log_abs_charpoly(eigs, theta);
}

/// log|P_N| sampled on an equispaced grid over [0, L).
struct FieldGrid {
  std::vector<double> thetas;
  std::vector<double> values;  // -inf permitted
  double arc_length = kTwoPi;
};

/// Grid evaluation of the whole field in O(M N) flops: per-phase rotation
/// recurrences and running products with exponent renormalization, one log per
/// grid point at the end.
inline FieldGrid field_grid(const EigenphaseSet& eigs, double arc_length, std::size_t num_points) {
  require(arc_length > 0 && arc_length <= kTwoPi, "field_grid: L in (0, 2pi]");
  require(num_points >= 2, "field_grid: need >= 2 points");
  require(!eigs.phases.empty(), "field_grid: empty EigenphaseSet");
  const std::size_t m_pts = num_points;
  const double dt = arc_length / static_cast<double>(m_pts);

  std::vector<double> prod(m_pts, 1.0);
  std::vector<double> expo(m_pts, 0.0);
  std::vector<unsigned char> singular(m_pts, 0);
  const std::complex<double> step(std::cos(dt), -std::sin(dt));

  const std::size_t block = 8;  // renormalize exponents every `block` phases
  for (std::size_t j0 = 0; j0 < eigs.phases.size(); j0 += block) {
    const std::size_t j1 = std::min(eigs.phases.size(), j0 + block);
    for (std::size_t j = j0; j < j1; ++j) {
      const double tj = eigs.phases[j];
      std::complex<double> z(std::cos(tj), std::sin(tj));
      for (std::size_t m = 0; m < m_pts; ++m) {
        double term = 2.0 - 2.0 * z.real();
        if (term < 1e-4) {
          // recompute small terms exactly: the rotation drift is amplified by
          // cot(phi/2) near a singularity
          term = 2.0 - 2.0 * std::cos(tj - static_cast<double>(m) * dt);
        }
        if (term <= kSingularTerm) {
          singular[m] = 1;
        } else {
          prod[m] *= term;
        }
        z *= step;
        if ((m & 63u) == 63u) {
          const double ang = tj - static_cast<double>(m + 1) * dt;
          z = {std::cos(ang), std::sin(ang)};
        }
      }
    }
    for (std::size_t m = 0; m < m_pts; ++m) {
      int e = 0;
      prod[m] = std::frexp(prod[m], &e);
      expo[m] += e;
    }
  }

  FieldGrid g;
  g.arc_length = arc_length;
  g.thetas.resize(m_pts);
  g.values.resize(m_pts);
  const double ln2 = std::log(2.0);
  for (std::size_t m = 0; m < m_pts; ++m) {
    g.thetas[m] = static_cast<double>(m) * dt;
    g.values[m] = singular[m] ? -kInf : 0.5 * (std::log(prod[m]) + expo[m] * ln2);
  }
  return g;
}

struct FieldMax {
  double theta_star = 0.0;
  double value = -kInf;
};

/// Maximum of log|P_N| over [0, L): grid of grid_factor*N points, then
/// golden-section refinement around the top three grid candidates.
inline FieldMax field_max(const EigenphaseSet& eigs, double arc_length, int grid_factor = 8,
                          int refine_iters = 30) {
  require(grid_factor >= 2, "field_max: grid_factor >= 2");
  require(!eigs.phases.empty(), "field_max: empty EigenphaseSet");
  const std::size_t m_pts =
      static_cast<std::size_t>(grid_factor) * static_cast<std::size_t>(eigs.phases.size());
  FieldGrid g = field_grid(eigs, arc_length, std::max<std::size_t>(m_pts, 4));

  std::vector<std::size_t> order(g.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + std::min<std::size_t>(3, order.size()),
                    order.end(), [&](std::size_t a, std::size_t b) { return g.values[a] > g.values[b]; });

  FieldMax best;
  best.theta_star = g.thetas[order[0]];
  best.value = g.values[order[0]];
  require(std::isfinite(best.value), "field_max: degenerate grid (all singular)");

  const double dt = arc_length / static_cast<double>(g.thetas.size());
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t c = 0; c < std::min<std::size_t>(3, order.size()); ++c) {
    double a = g.thetas[order[c]] - dt, b = g.thetas[order[c]] + dt;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = log_abs_charpoly(eigs, x1), f2 = log_abs_charpoly(eigs, x2);
    for (int it = 0; it < refine_iters; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = log_abs_charpoly(eigs, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = log_abs_charpoly(eigs, x2);
      }
    }
    const double xm = mod_two_pi(0.5 * (a + b));
    const double fm = log_abs_charpoly(eigs, xm);
    if (fm > best.value) {
      best.value = fm;
      best.theta_star = xm;
    }
  }
  return best;
}

/// Coefficients of det(I + xA), computed from power traces by Newton's
/// identities in the convention n e_n = sum_{i=1..n} (-1)^{i-1} e_{n-i} p_i.
struct SecularCoeffs {
  std::vector<std::complex<double>> coeffs;  // length N+1, coeffs[0] = 1
};

inline SecularCoeffs secular_coefficients(const EigenphaseSet& eigs) {
  const std::size_t n = eigs.phases.size();
  // power sums p_i = sum_j e^{i j theta}
  std::vector<std::complex<double>> p(n + 1, {0.0, 0.0});
  for (double t : eigs.phases) {
    const std::complex<double> z(std::cos(t), std::sin(t));
    std::complex<double> zp = z;
    for (std::size_t i = 1; i <= n; ++i) {
      p[i] += zp;
      zp *= z;
    }
  }
  SecularCoeffs s;
  s.coeffs.assign(n + 1, {0.0, 0.0});
  s.coeffs[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    double sign = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
      acc += sign * s.coeffs[k - i] * p[i];
      sign = -sign;
    }
    s.coeffs[k] = acc / static_cast<double>(k);
  }
  return s;
}

/// Evaluate P_N(A, theta) = det(I - A e^{-i theta}) from secular coefficients.
inline std::complex<double> charpoly_from_secular(const SecularCoeffs& s, double theta) {
  const std::complex<double> x(-std::cos(theta), std::sin(theta));  // -e^{-i theta}
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = s.coeffs.size(); i-- > 0;) acc = acc * x + s.coeffs[i];
  return acc;
}

/// Monte Carlo estimate of E |sum_{j_1+...+j_eta = m} Sc_{j_1}...Sc_{j_eta}|^2
/// over U(N).
inline Estimate secular_sum_moment(int eta, int m, int n_dim, int trials, Rng& rng) {
  require(eta >= 1, "secular_sum_moment: eta >= 1");
  require(trials >= 1, "secular_sum_moment: trials >= 1");
  require(m >= 0, "secular_sum_moment: m out of range");
  if (m > eta * n_dim) return {0.0, 0.0};  // no coefficients beyond degree eta*N
  RunningStats stats;
  for (int t = 0; t < trials; ++t) {
    EigenphaseSet eigs = sample_eigenphases(Group::Unitary, n_dim, std::nullopt, rng);
    SecularCoeffs sc = secular_coefficients(eigs);
    // coefficient of x^m in (sum Sc_j x^j)^eta, via repeated truncated products
    std::vector<std::complex<double>> pow{1.0};
    for (int e = 0; e < eta; ++e) {
      std::vector<std::complex<double>> nxt(std::min<std::size_t>(m + 1, pow.size() + n_dim), 0.0);
      for (std::size_t i = 0; i < pow.size(); ++i)
        for (std::size_t j = 0; j <= static_cast<std::size_t>(n_dim); ++j) {
          if (i + j >= nxt.size()) break;
          nxt[i + j] += pow[i] * sc.coeffs[j];
        }
      pow.swap(nxt);
    }
    const std::complex<double> cm = static_cast<std::size_t>(m) < pow.size() ? pow[m] : 0.0;
    stats.push(std::norm(cm));
  }
  return {stats.mean(), stats.stderr_mean()};
}

struct CltSummary {
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
  double ks_normal = 0.0;
};

/// Exact second cumulant of log|P_N|: (1/2) sum_m min(m, N)/m^2, which is
/// (1/2) log N + O(1).  Normalizing by this rather than the asymptotic
/// (1/2) log N makes the unit-variance assertion meaningful at finite N.
inline double log_charpoly_variance(int n) {
  double h = 0.0;
  for (int m = 1; m <= n; ++m) h += 1.0 / m;
  // trigamma tail: sum_{m>N} 1/m^2 = psi'(N+1)
  const double x = n + 1.0;
  const double psi1 = 1.0 / x + 1.0 / (2 * x * x) + 1.0 / (6 * x * x * x) -
                      1.0 / (30 * std::pow(x, 5)) + 1.0 / (42 * std::pow(x, 7));
  return 0.5 * (h + n * psi1);
}

/// Distribution of (Re or Im) log P_N(A, 0), standardized by the exact
/// cumulant sqrt(Q2(N)) ~ sqrt((1/2) log N), across independent draws.
inline CltSummary clt_experiment(Group group, int n, int trials, Rng& rng, bool imaginary_part = false,
                                 std::optional<double> beta = std::nullopt) {
  require(trials >= 100, "clt_experiment: trials >= 100");
  require(n >= 3, "clt_experiment: N >= 3 (normalization degenerate)");
  const double norm = std::sqrt(log_charpoly_variance(n));
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    EigenphaseSet eigs = sample_eigenphases(group, n, beta, rng);
    double v;
    if (!imaginary_part) {
      v = log_abs_charpoly(eigs, 0.0);
    } else {
      v = 0.0;
      for (double tj : eigs.phases) v += std::atan2(std::sin(tj), 1.0 - std::cos(tj));
    }
    if (!std::isfinite(v)) continue;  // theta hit an eigenphase (measure zero)
    xs.push_back(v / norm);
  }
  const MomentSummary ms = central_moments(xs);
  CltSummary out;
  out.mean = ms.mean;
  out.variance = ms.variance;
  out.third_central = ms.third_central;
  out.ks_normal = ks_distance(xs, [](double x) { return normal_cdf(x); });
  return out;
}

/// Monte Carlo E[V_N(0) V_N(s)] for each separation s.
inline std::vector<Estimate> covariance_profile(int n, const std::vector<double>& separations,
                                                int trials, Rng& rng) {
  for (double s : separations) require(s > 0 && s <= kPi, "covariance_profile: s in (0, pi]");
  std::vector<RunningStats> stats(separations.size());
  for (int t = 0; t < trials; ++t) {
    EigenphaseSet eigs = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
    const double v0 = negative_log_field(eigs, 0.0);
    if (!std::isfinite(v0)) continue;
    for (std::size_t i = 0; i < separations.size(); ++i) {
      const double vs = negative_log_field(eigs, separations[i]);
      if (std::isfinite(vs)) stats[i].push(v0 * vs);
    }
  }
  std::vector<Estimate> out(separations.size());
  for (std::size_t i = 0; i < separations.size(); ++i)
    out[i] = {stats[i].mean(), stats[i].stderr_mean()};
  return out;
}

/// Histogram of rescaled phase differences (phi_n - phi_m) mod N over a batch,
/// normalized so the sine-kernel limit 1 - (sin pi x / pi x)^2 has density 1 at
/// infinity; the self-pair delta is excluded.
inline Histogram pair_correlation(const std::vector<EigenphaseSet>& samples, double bin_width,
                                  double x_max) {
  require(!samples.empty(), "pair_correlation: empty batch");
  require(bin_width > 0, "pair_correlation: bin_width > 0");
  const int n = samples.front().n_half;
  require(x_max <= 0.5 * n, "pair_correlation: x_max <= N/2");
  for (const auto& s : samples) {
    require(s.n_half == n, "pair_correlation: mixed-N batch");
    require(s.group == Group::Unitary || s.group == Group::CircularBeta,
            "pair_correlation: unitary-type samples only");
  }
  Histogram h(0.0, x_max, bin_width);
  const double scale = static_cast<double>(n) / kTwoPi;
  for (const auto& s : samples) {
    for (std::size_t a = 0; a < s.phases.size(); ++a)
      for (std::size_t b = 0; b < s.phases.size(); ++b) {
        if (a == b) continue;
        double d = (s.phases[a] - s.phases[b]) * scale;
        d -= std::floor(d / n) * n;  // mod N into [0, N)
        h.add(d);
      }
  }
  const double norm = static_cast<double>(samples.size()) * n * bin_width;
  for (auto& c : h.counts) c /= norm;
  return h;
}

struct MaxNorming {
  double a_n = 0.0;
  double b_n = 0.0;
};

/// Gumbel norming constants for maxima of n iid standard Gaussians.
inline MaxNorming iid_max_norming(double n) {
  require(n >= 2, "iid_max_norming: n >= 2");
  const double r = std::sqrt(2.0 * std::log(n));
  return {1.0 / r, r - (std::log(std::log(n)) + std::log(4.0 * kPi)) / (2.0 * r)};
}

}  // namespace logcorr
