#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "logcorr/common.hpp"
#include "logcorr/fft.hpp"
#include "logcorr/rng.hpp"

namespace logcorr {

enum class Group { Unitary, SpecialOrthogonalEven, OrthogonalMinus, Symplectic, CircularBeta };

inline std::string group_name(Group g) {
  switch (g) {
    case Group::Unitary: return "unitary";
    case Group::SpecialOrthogonalEven: return "so-even";
    case Group::OrthogonalMinus: return "o-minus";
    case Group::Symplectic: return "symplectic";
    case Group::CircularBeta: return "cbeta";
  }
  return "?";
}

/// The sampled spectrum of a compact-group matrix: the sole representation of
/// the matrix used downstream.  Phases are sorted ascending in [0, 2pi); for
/// Sp(2N) and SO(2N) the multiset is exactly closed under t -> 2pi - t.
struct EigenphaseSet {
  Group group = Group::Unitary;
  int n_half = 0;                      // N; matrix dimension is N (U/CbetaE) or 2N (Sp/SO)
  std::optional<double> beta_ensemble; // present only for CircularBeta
  std::vector<double> phases;

  int dim() const { return static_cast<int>(phases.size()); }
};

namespace detail {

inline constexpr int kDenseUnitaryMax = 63;  // N above this uses the Verblunsky route
inline constexpr double kUnitModulusTol = 1e-8;

inline double checked_phase(std::complex<double> lambda) {
  const double dev = std::abs(std::abs(lambda) - 1.0);
  require(dev <= kUnitModulusTol, "eigenvalue off the unit circle by " + std::to_string(dev));
  return mod_two_pi(std::arg(lambda));  // renormalizes the modulus implicitly
}

inline Eigen::MatrixXcd ginibre_complex(int n, Rng& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar U(N): complex Ginibre, QR, then the diagonal phase correction that
/// makes the factorization measure-correct.
inline Eigen::MatrixXcd haar_unitary_dense(int n, Rng& rng) {
  Eigen::MatrixXcd g = ginibre_complex(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    require(a > 0, "haar_unitary_dense: singular R");
    q.col(j) *= d / a;
  }
  return q;
}

/// Haar O(dim): real Ginibre, QR, sign correction.  `want_minus` selects the
/// det = -1 coset by right translation with a fixed reflection (negating the
/// last column), which is measure-preserving between cosets.
inline Eigen::MatrixXd haar_orthogonal_dense(int dim, bool want_minus, Rng& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  const double det = q.determinant();
  const bool is_minus = det < 0;
  if (is_minus != want_minus) q.col(dim - 1) = -q.col(dim - 1);
  return q;
}

/// -Omega conj(v) with Omega = [[0, I], [-I, 0]]: the partner column that the
/// symplectic structure A Omega = Omega conj(A) forces at slot k + N.
inline Eigen::VectorXcd symplectic_partner(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size()) / 2;
  Eigen::VectorXcd w(2 * n);
  w.head(n) = -v.tail(n).conjugate();
  w.tail(n) = v.head(n).conjugate();
  return w;
}

/// Haar USp(2N) in the 2N-dimensional complex representation.  Quaternionic
/// Gram-Schmidt in disguise: column k + N is the partner -Omega conj(col k),
/// so A Omega A^T = Omega holds exactly by construction.
inline Eigen::MatrixXcd haar_symplectic_dense(int n_half, Rng& rng) {
  const int dim = 2 * n_half;
  Eigen::MatrixXcd a(dim, dim);
  for (int k = 0; k < n_half; ++k) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
    for (int pass = 0; pass < 2; ++pass) {  // MGS with one reorthogonalization
      for (int j = 0; j < k; ++j) {
        v -= a.col(j).dot(v) * a.col(j);
        v -= a.col(j + n_half).dot(v) * a.col(j + n_half);
      }
    }
    const double nrm = v.norm();
    require(nrm > 1e-12, "haar_symplectic_dense: degenerate draw");
    v /= nrm;
    a.col(k) = v;
    a.col(k + n_half) = symplectic_partner(v);
  }
  return a;
}

inline std::vector<double> phases_of_complex_matrix(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = checked_phase(es.eigenvalues()(i));
  return out;
}

inline std::vector<double> phases_of_real_matrix(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = checked_phase(es.eigenvalues()(i));
  return out;
}

/// Enforce exact closure under t -> 2pi - t: fold to [0, pi], average
/// conjugate partners, emit both images.  `fixed_points` phases (0 or pi) are
/// removed first and re-emitted verbatim.
inline std::vector<double> symmetrize_conjugate_pairs(std::vector<double> phases,
                                                      const std::vector<double>& fixed_points) {
  std::vector<double> folded;
  folded.reserve(phases.size());
  for (double fp : fixed_points) {
    // drop the phase closest to fp (circular distance)
    std::size_t best = 0;
    double bestd = kInf;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      double d = std::abs(phases[i] - fp);
      d = std::min(d, kTwoPi - d);
      if (d < bestd) {
        bestd = d;
        best = i;
      }
    }
    require(bestd < 1e-6, "symmetrize: expected fixed-point eigenvalue missing");
    phases.erase(phases.begin() + static_cast<std::ptrdiff_t>(best));
  }
  for (double t : phases) folded.push_back(t <= kPi ? t : kTwoPi - t);
  std::sort(folded.begin(), folded.end());
  require(folded.size() % 2 == 0, "symmetrize: odd number of paired phases");
  std::vector<double> out(fixed_points.begin(), fixed_points.end());
  for (std::size_t i = 0; i < folded.size(); i += 2) {
    const double phi = 0.5 * (folded[i] + folded[i + 1]);
    require(std::abs(folded[i] - folded[i + 1]) < 1e-6, "symmetrize: unpaired eigenvalue");
    out.push_back(phi);
    out.push_back(mod_two_pi(kTwoPi - phi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Szego recurrence in coefficient space; returns the degree-N paraorthogonal
/// polynomial whose zeros are CbetaE(N, beta) distributed (Killip-Nenciu).
inline std::vector<std::complex<double>> verblunsky_polynomial(int n, double beta, Rng& rng) {
  std::vector<std::complex<double>> phi{1.0}, next;
  phi.reserve(static_cast<std::size_t>(n) + 1);
  next.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    std::complex<double> alpha;
    if (k == n - 1) {
      alpha = rng.unit_circle();
    } else {
      const double m = 0.5 * beta * static_cast<double>(n - 1 - k);
      const double r2 = 1.0 - std::pow(rng.uniform_pos(), 1.0 / m);
      alpha = std::sqrt(std::max(0.0, r2)) * rng.unit_circle();
    }
    const std::complex<double> ac = std::conj(alpha);
    next.assign(static_cast<std::size_t>(k) + 2, {0.0, 0.0});
    for (int i = 0; i <= k; ++i) next[static_cast<std::size_t>(i) + 1] = phi[static_cast<std::size_t>(i)];
    for (int i = 0; i <= k; ++i)
      next[static_cast<std::size_t>(i)] -= ac * std::conj(phi[static_cast<std::size_t>(k - i)]);
    phi.swap(next);
  }
  return phi;
}

struct PolyEval {
  std::complex<double> p;
  std::complex<double> dp;
};

inline PolyEval horner(const std::vector<std::complex<double>>& c, std::complex<double> z) {
  std::complex<double> p = c.back(), dp = 0.0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

/// Roots of a paraorthogonal polynomial (all on the unit circle), via the real
/// function g(t) = Re[conj(W) e^{-iNt/2} Phi(e^{it})] = 2^N prod_j sin((t-t_j)/2):
/// FFT evaluation on a fine grid brackets the N sign changes, Newton polishes.
inline std::vector<double> unit_circle_roots(const std::vector<std::complex<double>>& phi) {
  const int n = static_cast<int>(phi.size()) - 1;
  require(n >= 1, "unit_circle_roots: empty polynomial");
  std::complex<double> c0 = phi[0];
  require(std::abs(std::abs(c0) - 1.0) < 1e-6, "unit_circle_roots: constant term off modulus 1");
  c0 /= std::abs(c0);
  const std::complex<double> w =
      std::sqrt((n % 2 == 0 ? c0 : -c0)) * std::pow(std::complex<double>(0.0, 1.0), n);
  const std::complex<double> wc = std::conj(w) / std::abs(w);

  auto g_eval = [&](double t) {
    const std::complex<double> z(std::cos(t), std::sin(t));
    const PolyEval pe = horner(phi, z);
    const std::complex<double> rot(std::cos(-0.5 * n * t), std::sin(-0.5 * n * t));
    const std::complex<double> gz = wc * rot * pe.p;
    // g'(t) = Re[wc e^{-iNt/2} (i z P'(z) - i N/2 P(z))]
    const std::complex<double> dgz =
        wc * rot * (std::complex<double>(0.0, 1.0) * (z * pe.dp - 0.5 * static_cast<double>(n) * pe.p));
    return std::pair<double, double>(gz.real(), dgz.real());
  };

  for (std::size_t m_grid = next_pow2(static_cast<std::size_t>(16) * static_cast<std::size_t>(n));
       m_grid <= next_pow2(static_cast<std::size_t>(2048) * static_cast<std::size_t>(n)); m_grid <<= 1) {
    // grid values of g by FFT
    std::vector<std::complex<double>> a(m_grid, {0.0, 0.0});
    for (int k = 0; k <= n; ++k) a[static_cast<std::size_t>(k)] = wc * phi[static_cast<std::size_t>(k)];
    fft_pow2(a, +1);  // a_m = sum_k c_k e^{+2pi i k m / M}
    std::vector<double> g(m_grid);
    for (std::size_t m = 0; m < m_grid; ++m) {
      const double ang = -kPi * static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(m_grid);
      g[m] = (a[m] * std::complex<double>(std::cos(ang), std::sin(ang))).real();
    }
    std::vector<std::pair<double, double>> brackets;  // (ta, tb), g(ta)*g(tb) < 0
    const double dt = kTwoPi / static_cast<double>(m_grid);
    for (std::size_t m = 0; m < m_grid; ++m) {
      const double ga = g[m];
      // g(t + 2pi) = (-1)^N g(t): the wrap interval sees the anti-periodic image
      const double gb = (m + 1 < m_grid) ? g[m + 1] : (n % 2 ? -g[0] : g[0]);
      if ((ga < 0 && gb >= 0) || (ga >= 0 && gb < 0))
        brackets.emplace_back(static_cast<double>(m) * dt, static_cast<double>(m + 1) * dt);
    }
    if (static_cast<int>(brackets.size()) != n) continue;  // refine the grid

    std::vector<double> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (auto [ta, tb] : brackets) {
      double ga = g_eval(ta).first, gb = g_eval(tb).first;
      if (ga == 0.0) { roots.push_back(mod_two_pi(ta)); continue; }
      if (gb == 0.0) { roots.push_back(mod_two_pi(tb)); continue; }
      double t = 0.5 * (ta + tb);
      for (int it = 0; it < 80; ++it) {
        const auto [gv, dg] = g_eval(t);
        if (gv == 0.0) break;
        if ((gv < 0) == (ga < 0)) ta = t; else tb = t;
        double tn = (dg != 0.0) ? t - gv / dg : 0.5 * (ta + tb);
        if (!(tn > ta && tn < tb)) tn = 0.5 * (ta + tb);
        if (std::abs(tn - t) < 1e-14) { t = tn; break; }
        t = tn;
      }
      roots.push_back(mod_two_pi(t));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  throw Error("unit_circle_roots: failed to isolate all roots");
}

}  // namespace detail

/// Haar-uniform eigenphases from U(N), SO(2N), the det=-1 coset, Sp(2N), or
/// the Circular beta Ensemble.  Pure given the random source; identical seed,
/// identical output.
inline EigenphaseSet sample_eigenphases(Group group, int n, std::optional<double> beta, Rng& rng) {
  require(n >= 1, "sample_eigenphases: N >= 1");
  require((group == Group::CircularBeta) == beta.has_value(),
          "sample_eigenphases: beta present iff group is CircularBeta");
  if (beta) require(*beta > 0, "sample_eigenphases: beta > 0");

  EigenphaseSet s;
  s.group = group;
  s.n_half = n;
  s.beta_ensemble = beta;
  switch (group) {
    case Group::Unitary:
      if (n <= detail::kDenseUnitaryMax) {
        s.phases = detail::phases_of_complex_matrix(detail::haar_unitary_dense(n, rng));
        std::sort(s.phases.begin(), s.phases.end());
      } else {
        // Same law via the Verblunsky construction at beta = 2 (Killip-Nenciu);
        // the dense route above stays independent for cross-checks.
        s.phases = detail::unit_circle_roots(detail::verblunsky_polynomial(n, 2.0, rng));
      }
      break;
    case Group::CircularBeta:
      s.phases = detail::unit_circle_roots(detail::verblunsky_polynomial(n, *beta, rng));
      break;
    case Group::SpecialOrthogonalEven: {
      auto raw = detail::phases_of_real_matrix(detail::haar_orthogonal_dense(2 * n, false, rng));
      s.phases = detail::symmetrize_conjugate_pairs(std::move(raw), {});
      break;
    }
    case Group::OrthogonalMinus: {
      auto raw = detail::phases_of_real_matrix(detail::haar_orthogonal_dense(2 * n, true, rng));
      s.phases = detail::symmetrize_conjugate_pairs(std::move(raw), {0.0, kPi});
      break;
    }
    case Group::Symplectic: {
      auto raw = detail::phases_of_complex_matrix(detail::haar_symplectic_dense(n, rng));
      s.phases = detail::symmetrize_conjugate_pairs(std::move(raw), {});
      break;
    }
  }
  return s;
}

/// Tr A^j = sum_m exp(i j theta_m) over all stored phases.
inline std::complex<double> trace_power(const EigenphaseSet& eigs, int j) {
  require(j >= 1, "trace_power: j >= 1");
  std::complex<double> acc(0.0, 0.0);
  for (double t : eigs.phases) {
    const double a = static_cast<double>(j) * t;
    acc += std::complex<double>(std::cos(a), std::sin(a));
  }
  return acc;
}

}  // namespace logcorr
