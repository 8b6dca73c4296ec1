#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "logcorr/bigint.hpp"
#include "logcorr/charpoly.hpp"
#include "logcorr/closed_forms.hpp"
#include "logcorr/common.hpp"
#include "logcorr/ensembles.hpp"
#include "logcorr/fft.hpp"
#include "logcorr/poly.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/special.hpp"
#include "logcorr/symfunc.hpp"

namespace logcorr {

/// Fisher-Hartwig symbol prod_j |z - e^{i theta_j}|^{2 beta}.
struct SymbolSpec {
  double beta = 1.0;                 // > -1/4
  std::vector<double> singularities; // angles in [0, 2pi)

  void validate() const {
    require(beta > -0.25, "SymbolSpec: beta > -1/4");
    require(!singularities.empty(), "SymbolSpec: need at least one singularity");
    for (double t : singularities)
      require(t >= 0.0 && t < kTwoPi, "SymbolSpec: angles in [0, 2pi)");
  }
};

/// Two-sided Fourier coefficient list h(-J..J) with a tracked truncation tail.
struct FourierSymbol {
  int order = 0;  // J
  std::vector<std::complex<double>> coeffs;  // index m + J
  double tail_bound = 0.0;

  std::complex<double> h(int m) const {
    return std::abs(m) <= order ? coeffs[static_cast<std::size_t>(m + order)]
                                : std::complex<double>(0.0, 0.0);
  }
};

namespace detail {

/// Coefficient c_m of (2 - 2 cos t)^beta = |1 - e^{it}|^{2 beta}:
/// c_m = (-1)^m Gamma(2b+1) / (Gamma(b+m+1) Gamma(b-m+1)), real and even in m.
inline double fh_single_coeff(double beta, int m) {
  m = std::abs(m);
  if (beta == 0.0) return m == 0 ? 1.0 : 0.0;
  const SignedLog num = lgamma_signed(2.0 * beta + 1.0);
  const SignedLog d1 = lgamma_signed(beta + m + 1.0);
  const SignedLog d2 = lgamma_signed(beta - m + 1.0);
  if (d2.sign == 0) return 0.0;  // pole: integer beta, |m| > beta
  const double mag = std::exp(num.log_abs - d1.log_abs - d2.log_abs);
  const int sign = (m % 2 ? -1 : 1) * num.sign * d1.sign * d2.sign;
  return sign * mag;
}

/// L1 tail sum_{|j| > J} |c_j|, bounded by integral comparison on the
/// algebraic decay |c_j| ~ C j^{-1-2 beta}.  Exactly zero for integer beta
/// once J >= beta.
inline double fh_tail_l1(double beta, int j) {
  if (j < 1) return kInf;
  const double cj = std::abs(fh_single_coeff(beta, j));
  if (cj == 0.0) return 0.0;
  const double decay = std::max(2.0 * beta, 0.1);
  return 2.0 * cj * (static_cast<double>(j) / decay + 1.0);
}

}  // namespace detail

/// Fourier coefficients of the Fisher-Hartwig symbol, computed analytically
/// per singularity (closed binomial form) and convolved on a truncated
/// support chosen so the explicit algebraic tail bound meets `tol`.
inline FourierSymbol fh_fourier_coeffs(const SymbolSpec& spec, int order, double tol = 1e-10) {
  spec.validate();
  require(order >= 1, "fh_fourier_coeffs: order >= 1");
  const double beta = spec.beta;
  const std::size_t k = spec.singularities.size();

  int work = order;
  double tail = 0.0;
  if (k > 1) {
    // per-coefficient truncation error of one convolution pass, |m| <= order:
    // sum_{|j| > work} |c1_j c2_{m-j}| <= T1(work) * |c(pad)| with pad = work - order
    int pad = std::max(8, static_cast<int>(std::ceil(beta)) + 2);
    auto bound = [&](int p) {
      return detail::fh_tail_l1(beta, order + p) * std::abs(detail::fh_single_coeff(beta, p));
    };
    while (bound(pad) > 0.25 * tol && pad < (1 << 21)) pad *= 2;
    tail = static_cast<double>(k - 1) * 2.0 * bound(pad);
    require(tail <= tol, "fh_fourier_coeffs: tail bound " + std::to_string(tail) +
                             " exceeds requested tolerance " + std::to_string(tol));
    work = order + pad;
  }

  auto single = [&](double theta, int support) {
    std::vector<std::complex<double>> c(2 * static_cast<std::size_t>(support) + 1);
    for (int m = -support; m <= support; ++m)
      c[static_cast<std::size_t>(m + support)] =
          detail::fh_single_coeff(beta, m) *
          std::complex<double>(std::cos(m * theta), -std::sin(m * theta));
    return c;
  };

  std::vector<std::complex<double>> acc = single(spec.singularities[0], work);
  for (std::size_t s = 1; s < k; ++s) {
    const std::vector<std::complex<double>> fac = single(spec.singularities[s], work);
    std::vector<std::complex<double>> next(2 * static_cast<std::size_t>(work) + 1, {0.0, 0.0});
    for (int m = -work; m <= work; ++m) {
      std::complex<double> v(0.0, 0.0);
      const int lo = std::max(-work, m - work), hi = std::min(work, m + work);
      for (int j = lo; j <= hi; ++j)
        v += acc[static_cast<std::size_t>(j + work)] * fac[static_cast<std::size_t>(m - j + work)];
      next[static_cast<std::size_t>(m + work)] = v;
    }
    acc.swap(next);
  }

  FourierSymbol out;
  out.order = order;
  out.tail_bound = tail;
  out.coeffs.assign(2 * static_cast<std::size_t>(order) + 1, {0.0, 0.0});
  for (int m = -order; m <= order; ++m)
    out.coeffs[static_cast<std::size_t>(m + order)] = acc[static_cast<std::size_t>(m + work)];
  return out;
}

/// log det of the N x N Toeplitz matrix (h_{j-k}) via pivoted LU in log space.
/// The symbols used here are real and nonnegative, so D_N is real positive;
/// the imaginary part of the log-determinant is checked, not trusted.
inline double toeplitz_logdet(const FourierSymbol& sym, int n) {
  require(n >= 1, "toeplitz_logdet: N >= 1");
  require(sym.order >= n - 1, "toeplitz_logdet: coefficient list shorter than N-1");
  Eigen::MatrixXcd t(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) t(j, k) = sym.h(j - k);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
  double log_abs = 0.0;
  std::complex<double> phase(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::complex<double> d = lu.matrixLU()(i, i);
    const double a = std::abs(d);
    require(a > 1e-300, "toeplitz_logdet: numerically singular matrix");
    log_abs += std::log(a);
    phase *= d / a;
  }
  phase *= static_cast<double>(lu.permutationP().determinant());
  require(std::abs(std::arg(phase)) < 1e-6, "toeplitz_logdet: determinant not positive real");
  return log_abs;
}

/// log D_1..log D_N in one Levinson-Durbin pass (Hermitian positive definite
/// Toeplitz): log D_n = sum_{j<n} log sigma_j^2.  O(N^2) fast path for the
/// quadrature scans; cross-validated against the LU route in tests.
inline std::vector<double> toeplitz_logdet_profile(const FourierSymbol& sym, int n) {
  require(n >= 1, "toeplitz_logdet_profile: N >= 1");
  require(sym.order >= n - 1, "toeplitz_logdet_profile: coefficient list shorter than N-1");
  const double r0 = sym.h(0).real();
  require(r0 > 0, "toeplitz_logdet_profile: h_0 must be positive");
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n), {0.0, 0.0});
  std::vector<double> out(static_cast<std::size_t>(n));
  double sigma2 = r0;
  out[0] = std::log(sigma2);
  for (int m = 1; m < n; ++m) {
    std::complex<double> acc = sym.h(m);
    for (int j = 1; j < m; ++j) acc += a[static_cast<std::size_t>(j)] * sym.h(m - j);
    const std::complex<double> k = -acc / sigma2;
    // a_new[j] = a[j] + k conj(a[m-j])
    std::vector<std::complex<double>> na(a.begin(), a.begin() + m + 1);
    na[static_cast<std::size_t>(m)] = k;
    for (int j = 1; j < m; ++j)
      na[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j)] +
                                        k * std::conj(a[static_cast<std::size_t>(m - j)]);
    for (int j = 1; j <= m; ++j) a[static_cast<std::size_t>(j)] = na[static_cast<std::size_t>(j)];
    sigma2 *= 1.0 - std::norm(k);
    require(sigma2 > 0, "toeplitz_logdet_profile: lost positive definiteness");
    out[static_cast<std::size_t>(m)] = out[static_cast<std::size_t>(m - 1)] + std::log(sigma2);
  }
  return out;
}

/// Moments of moments by the Heine-Szego route: a (k-1)-torus quadrature of
/// D_N over singularity positions (rotation invariance pins theta_1 = 0).
/// Periodic trapezoid with node doubling; for integer beta the integrand is a
/// trigonometric polynomial and the rule is exact once nodes > degree.
struct QuadratureResult {
  double value = 0.0;
  double previous = 0.0;  // estimate at half the node count
  int nodes = 0;
};

namespace detail {

/// All-nodes batch for k = 2: Fourier coefficients of the two-singularity
/// symbol at every trapezoid node t_q = 2 pi q / M in one FFT sweep.
/// h_m(t) = e^{-i m t} sum_j c_j c_{m-j} e^{i j t}; at the M nodes the inner
/// sum only sees j mod M, so folding the (exactly known) sequence and taking
/// one FFT per m is exact.
inline double mom_toeplitz_k2_integrate(double beta, int n, int m_nodes) {
  int pad = std::max(8, static_cast<int>(std::ceil(beta)) + 2);
  auto bound = [&](int p) {
    return fh_tail_l1(beta, n - 1 + p) * std::abs(fh_single_coeff(beta, p));
  };
  while (bound(pad) > 1e-11 && pad < (1 << 21)) pad *= 2;
  const int w = n - 1 + pad;

  std::vector<double> c(2 * static_cast<std::size_t>(w) + 1);
  for (int j = -w; j <= w; ++j)
    c[static_cast<std::size_t>(j + w)] = fh_single_coeff(beta, j);

  const std::size_t m_fft = next_pow2(static_cast<std::size_t>(m_nodes));
  require(m_fft == static_cast<std::size_t>(m_nodes), "mom_toeplitz: nodes must be a power of two");

  // h_rows[m + (n-1)][q] = h_m(t_q)
  std::vector<std::vector<std::complex<double>>> h_rows(
      2 * static_cast<std::size_t>(n) - 1,
      std::vector<std::complex<double>>(m_fft, {0.0, 0.0}));
  std::vector<std::complex<double>> buf(m_fft);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    const int lo = std::max(-w, m - w), hi = std::min(w, m + w);
    for (int j = lo; j <= hi; ++j) {
      const double v = c[static_cast<std::size_t>(j + w)] * c[static_cast<std::size_t>(m - j + w)];
      long idx = j % static_cast<long>(m_fft);
      if (idx < 0) idx += static_cast<long>(m_fft);
      buf[static_cast<std::size_t>(idx)] += v;
    }
    fft_pow2(buf, +1);  // buf[q] = sum_j s_j e^{+2pi i j q / M}
    auto& row = h_rows[static_cast<std::size_t>(m + n - 1)];
    for (std::size_t q = 0; q < m_fft; ++q) {
      const double ang = -kTwoPi * static_cast<double>(m) * static_cast<double>(q) /
                         static_cast<double>(m_fft);
      row[q] = buf[q] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }

  double acc = 0.0;
  FourierSymbol sym;
  sym.order = n - 1;
  sym.coeffs.resize(2 * static_cast<std::size_t>(n) - 1);
  for (std::size_t q = 0; q < m_fft; ++q) {
    for (int m = -(n - 1); m <= n - 1; ++m)
      sym.coeffs[static_cast<std::size_t>(m + n - 1)] = h_rows[static_cast<std::size_t>(m + n - 1)][q];
    acc += std::exp(toeplitz_logdet_profile(sym, n).back());
  }
  return acc / static_cast<double>(m_fft);
}

}  // namespace detail

inline QuadratureResult mom_toeplitz(int k, double beta, int n, int quad_nodes = 256,
                                     double rel_tol = 1e-7) {
  require(k >= 1, "mom_toeplitz: k >= 1 integer");
  require(beta > 0, "mom_toeplitz: beta > 0");
  require(n >= 1, "mom_toeplitz: N >= 1");
  require(quad_nodes >= 64 || k == 1, "mom_toeplitz: quad_nodes >= 64");

  if (k == 1) {
    // rotation invariance: no quadrature at all
    SymbolSpec spec{beta, {0.0}};
    const FourierSymbol sym = fh_fourier_coeffs(spec, n);
    return {std::exp(toeplitz_logdet(sym, n)), 0.0, 0};
  }
  require(k == 2, "mom_toeplitz: torus quadrature implemented for k <= 2");

  QuadratureResult r;
  r.nodes = static_cast<int>(next_pow2(static_cast<std::size_t>(quad_nodes)));
  r.previous = detail::mom_toeplitz_k2_integrate(beta, n, r.nodes / 2);
  r.value = detail::mom_toeplitz_k2_integrate(beta, n, r.nodes);
  while (std::abs(r.value - r.previous) > rel_tol * std::abs(r.value) && r.nodes < (1 << 14)) {
    r.nodes *= 2;
    r.previous = r.value;
    r.value = detail::mom_toeplitz_k2_integrate(beta, n, r.nodes);
  }
  require(std::abs(r.value - r.previous) <= 10 * rel_tol * std::abs(r.value) + 1e-300,
          "mom_toeplitz: quadrature failed to converge (last " + std::to_string(r.previous) +
              " vs " + std::to_string(r.value) + ")");
  return r;
}

/// Exact integer moments of moments: the restricted tableau count.
inline BigInt mom_exact_unitary(int k, int beta, int n) {
  return restricted_rect_count(n, k, beta);
}

/// Exact rational polynomial in N representing MoM_{U(N)}(k, beta).
struct MomPolynomial {
  int k = 1;
  int beta = 1;
  RatPoly poly;
};

inline MomPolynomial mom_polynomial(int k, int beta) {
  require(k >= 1 && beta >= 1, "mom_polynomial: k, beta >= 1");
  require(k * beta <= 4, "mom_polynomial: k*beta <= 4 keeps the counts desk-scale");
  const int degree = k * k * beta * beta - k + 1;
  std::vector<BigRat> xs, ys;
  for (int n = 0; n <= degree; ++n) {
    xs.emplace_back(n);
    ys.emplace_back(mom_exact_unitary(k, beta, n));
  }
  MomPolynomial mp;
  mp.k = k;
  mp.beta = beta;
  mp.poly = RatPoly::interpolate(xs, ys);
  require(static_cast<int>(mp.poly.degree()) == degree,
          "mom_polynomial: degree mismatch (counting bug)");
  require(mp.poly.coeffs().back() > 0, "mom_polynomial: leading coefficient must be positive");
  for (int n = degree + 1; n <= degree + 2; ++n)
    require(mp.poly.eval(BigRat(n)) == BigRat(mom_exact_unitary(k, beta, n)),
            "mom_polynomial: verification mismatch (counting bug)");
  return mp;
}

/// One draw of g_N(beta;A)^k with g_N by periodic trapezoid quadrature of
/// |P_N|^{2 beta}; for integer beta the node count is raised to make the
/// quadrature exact on the trigonometric polynomial |P|^{2 beta}.
inline double mom_single_draw(Group group, int k, double beta, int n, int theta_nodes, Rng& rng) {
  require(theta_nodes >= 4 * n, "mom_monte_carlo: theta_nodes >= 4N");
  require(k >= 1 && beta > 0, "mom_monte_carlo: k >= 1, beta > 0");
  int nodes = theta_nodes;
  const int dim = (group == Group::SpecialOrthogonalEven || group == Group::OrthogonalMinus ||
                   group == Group::Symplectic)
                      ? 2 * n
                      : n;
  if (beta == std::floor(beta)) nodes = std::max(nodes, static_cast<int>(2 * dim * beta) + 2);
  const EigenphaseSet eigs = sample_eigenphases(
      group, n, group == Group::CircularBeta ? std::optional<double>(2.0) : std::nullopt, rng);
  const FieldGrid grid = field_grid(eigs, kTwoPi, static_cast<std::size_t>(nodes));
  double g = 0.0;
  for (double v : grid.values) g += std::isfinite(v) ? std::exp(2.0 * beta * v) : 0.0;
  g /= static_cast<double>(grid.values.size());
  return std::pow(g, k);
}

/// Monte Carlo moments of moments for any group.
inline Estimate mom_monte_carlo(Group group, int k, double beta, int n, int trials,
                                int theta_nodes, Rng& rng) {
  require(trials >= 100, "mom_monte_carlo: trials >= 100");
  RunningStats stats;
  for (int t = 0; t < trials; ++t)
    stats.push(mom_single_draw(group, k, beta, n, theta_nodes, rng));
  return {stats.mean(), stats.stderr_mean()};
}

/// Numerical evaluation of the multiple contour integral representing
///   E prod_{j=m+1..n} det(I - A e^{a_j}) prod_{j=1..m} det(I - A* e^{-a_j})
/// over U(N_dim): product trapezoid rule on circles about the shifts, one
/// radius per variable so the (removable) coincidence points and the
/// e^{z_q - z_l} = 1 loci stay clear of the nodes.
inline std::complex<double> cfkrs_contour_average(const std::vector<std::complex<double>>& alphas,
                                                  int m, int n, int n_dim, int quad_nodes = 128) {
  require(n >= 1 && m >= 0 && m <= n, "cfkrs_contour_average: need 0 <= m <= n");
  require(static_cast<int>(alphas.size()) == n, "cfkrs_contour_average: need n shifts");
  require(n_dim >= 1, "cfkrs_contour_average: N >= 1");
  require(quad_nodes >= 16, "cfkrs_contour_average: quad_nodes >= 16");
  require(n <= 3, "cfkrs_contour_average: desk scale n <= 3");

  std::complex<double> center(0.0, 0.0);
  for (const auto& a : alphas) center += a;
  center /= static_cast<double>(n);
  double spread = 0.0;
  for (const auto& a : alphas) spread = std::max(spread, std::abs(a - center));
  const double r_base = spread + 0.25;
  require(r_base + 0.25 * n < 2.0, "cfkrs_contour_average: contour radius violation (shifts too spread)");

  std::vector<double> radius(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) radius[static_cast<std::size_t>(j)] = r_base * (1.0 + 0.11 * j);

  const int q = quad_nodes;
  std::vector<std::vector<std::complex<double>>> ring(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ring[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
      const double phi = kTwoPi * i / q;
      ring[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          center + radius[static_cast<std::size_t>(j)] *
                       std::complex<double>(std::cos(phi), std::sin(phi));
    }
  }

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  std::complex<double> total(0.0, 0.0);
  while (true) {
    for (int j = 0; j < n; ++j)
      z[static_cast<std::size_t>(j)] =
          ring[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    // integrand
    std::complex<double> f(1.0, 0.0);
    std::complex<double> expo(0.0, 0.0);
    for (int l = m; l < n; ++l) expo -= static_cast<double>(n_dim) * z[static_cast<std::size_t>(l)];
    f = std::exp(expo);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const std::complex<double> d = z[static_cast<std::size_t>(b)] - z[static_cast<std::size_t>(a)];
        f *= d * d;
      }
    for (int l = 0; l < m; ++l)
      for (int qq = m; qq < n; ++qq)
        f /= 1.0 - std::exp(z[static_cast<std::size_t>(qq)] - z[static_cast<std::size_t>(l)]);
    for (int l = 0; l < n; ++l)
      for (int qq = 0; qq < n; ++qq)
        f /= z[static_cast<std::size_t>(l)] - alphas[static_cast<std::size_t>(qq)];
    // dz_j = i (z_j - center) dphi; the (2 pi i)^n prefactor cancels against
    // the phi-measure (2 pi / q per node) and the i from each dz
    for (int j = 0; j < n; ++j)
      f *= (z[static_cast<std::size_t>(j)] - center) / static_cast<double>(q);
    total += f;
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[static_cast<std::size_t>(j)] < q) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j == n) break;
  }

  double sgn = ((static_cast<long>(n) * (n - 1) / 2) % 2) ? -1.0 : 1.0;
  std::complex<double> pref(sgn, 0.0);
  double mf = 1.0, nf = 1.0;
  for (int i = 2; i <= m; ++i) mf *= i;
  for (int i = 2; i <= n - m; ++i) nf *= i;
  pref /= mf * nf;
  std::complex<double> shift_expo(0.0, 0.0);
  for (int qq = m; qq < n; ++qq) shift_expo += static_cast<double>(n_dim) * alphas[static_cast<std::size_t>(qq)];
  pref *= std::exp(shift_expo);
  return pref * total;
}

}  // namespace logcorr
