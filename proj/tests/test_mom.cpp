#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <vector>

#include "logcorr/mom.hpp"

using namespace logcorr;

namespace {

// 2^16-point quadrature oracle for the Fourier coefficients of the symbol.
std::complex<double> fh_coeff_oracle(const SymbolSpec& spec, int m) {
  const int q = 1 << 16;
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < q; ++i) {
    const double t = kTwoPi * i / q;
    double f = 1.0;
    for (double s : spec.singularities)
      f *= std::pow(2.0 - 2.0 * std::cos(t - s), spec.beta);
    acc += f * std::complex<double>(std::cos(m * t), -std::sin(m * t));
  }
  return acc / static_cast<double>(q);
}

// The paper's explicit mom(2,2) polynomial.
RatPoly golden_mom22() {
  RatPoly p({BigRat(32432400), BigRat(50225040), BigRat(38466354), BigRat(18102224),
             BigRat(5494237), BigRat(1081640), BigRat(134071), BigRat(9536), BigRat(298)});
  for (int j = 1; j <= 7; ++j) p = p * RatPoly({BigRat(j), BigRat(1)});
  BigRat scale(1, 163459296000);
  scale.canonicalize();
  return p * scale;
}

}  // namespace

TEST_CASE("fh coefficients: beta = 1 single singularity is {-1, 2, -1}") {
  const FourierSymbol s = fh_fourier_coeffs(SymbolSpec{1.0, {0.0}}, 4);
  CHECK(std::abs(s.h(0) - 2.0) < 1e-14);
  CHECK(std::abs(s.h(1) + 1.0) < 1e-14);
  CHECK(std::abs(s.h(-1) + 1.0) < 1e-14);
  CHECK(std::abs(s.h(2)) < 1e-14);
  CHECK(std::abs(s.h(3)) < 1e-14);
}

TEST_CASE("fh coefficients against the quadrature oracle, beta = 0.7") {
  const SymbolSpec spec{0.7, {0.0}};
  const FourierSymbol s = fh_fourier_coeffs(spec, 16);
  for (int m : {0, 1, 2, 5, 11}) {
    const auto ref = fh_coeff_oracle(spec, m);
    CHECK(std::abs(s.h(m) - ref) < 1e-8);
  }
}

TEST_CASE("fh coefficients: two singularities equal the convolution of singles") {
  const double beta = 0.8, t2 = 1.3;
  const SymbolSpec spec{beta, {0.0, t2}};
  const FourierSymbol s = fh_fourier_coeffs(spec, 8, 1e-10);
  CHECK(s.tail_bound <= 1e-10);
  for (int m : {0, 1, 3, 7}) {
    const auto ref = fh_coeff_oracle(spec, m);
    CHECK(std::abs(s.h(m) - ref) < 1e-7);
  }
  // shifted singularity only: coefficients pick up a phase e^{-i m t}
  const FourierSymbol shifted = fh_fourier_coeffs(SymbolSpec{beta, {t2}}, 6);
  const FourierSymbol base = fh_fourier_coeffs(SymbolSpec{beta, {0.0}}, 6);
  for (int m = -6; m <= 6; ++m) {
    const std::complex<double> phase(std::cos(m * t2), -std::sin(m * t2));
    CHECK(std::abs(shifted.h(m) - base.h(m) * phase) < 1e-13);
  }
}

TEST_CASE("toeplitz_logdet: beta = 1 tridiagonal determinant is N + 1") {
  const FourierSymbol s = fh_fourier_coeffs(SymbolSpec{1.0, {0.0}}, 64);
  for (int n = 1; n <= 64; ++n) {
    // tridiagonal oracle recursion D_n = 2 D_{n-1} - D_{n-2} gives n + 1
    const double expect = n + 1.0;
    CHECK(std::abs(std::exp(toeplitz_logdet(s, n)) - expect) < 1e-9 * expect);
  }
}

TEST_CASE("Heine-Szego: single-singularity determinant equals Keating-Snaith") {
  for (double beta : {0.5, 1.0, 1.5, 2.0}) {
    const FourierSymbol s = fh_fourier_coeffs(SymbolSpec{beta, {0.0}}, 32);
    for (int n : {1, 2, 4, 8, 16, 32}) {
      const double ks = keating_snaith_moment(n, beta);
      CHECK(std::exp(toeplitz_logdet(s, n)) == doctest::Approx(ks).epsilon(1e-8));
    }
  }
}

TEST_CASE("Levinson profile agrees with pivoted LU") {
  for (double beta : {0.5, 1.0, 0.7}) {
    for (const SymbolSpec& spec : {SymbolSpec{beta, {0.0}}, SymbolSpec{beta, {0.0, 2.0}}}) {
      const FourierSymbol s = fh_fourier_coeffs(spec, 48);
      const auto prof = toeplitz_logdet_profile(s, 48);
      for (int n : {1, 3, 8, 24, 48})
        CHECK(prof[static_cast<std::size_t>(n - 1)] ==
              doctest::Approx(toeplitz_logdet(s, n)).epsilon(1e-9));
    }
  }
}

TEST_CASE("single-singularity asymptotic constant (smoke at N = 128)") {
  const double beta = 0.5;
  const FourierSymbol s = fh_fourier_coeffs(SymbolSpec{beta, {0.0}}, 128);
  const double logd = toeplitz_logdet(s, 128);
  const double predicted = beta * beta * std::log(128.0) +
                           std::log(symmetry_coefficient(Group::Unitary, beta));
  CHECK(std::abs(logd - predicted) < 0.05);  // acceptance pins 1e-2 at N = 512
}

TEST_CASE("mom_toeplitz: k = 1 equals Keating-Snaith with no quadrature") {
  for (double beta : {0.6, 1.0, 2.0}) {
    const QuadratureResult r = mom_toeplitz(1, beta, 12);
    CHECK(r.value == doctest::Approx(keating_snaith_moment(12, beta)).epsilon(1e-9));
  }
}

TEST_CASE("mom_toeplitz (2,1,N) matches the cubic polynomial exactly") {
  for (int n : {1, 2, 4, 8, 16}) {
    const double expect = (n + 1.0) * (n + 2.0) * (n + 3.0) / 6.0;
    const QuadratureResult r = mom_toeplitz(2, 1.0, n, 128);
    CHECK(r.value == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("mom_toeplitz batch path equals the per-node reference") {
  const double beta = 0.6;
  const int n = 6, nodes = 64;
  double ref = 0.0;
  for (int q = 0; q < nodes; ++q) {
    const double t = kTwoPi * q / nodes;
    const SymbolSpec spec = (q == 0) ? SymbolSpec{2 * beta, {0.0}} : SymbolSpec{beta, {0.0, t}};
    ref += std::exp(toeplitz_logdet(fh_fourier_coeffs(spec, n), n));
  }
  ref /= nodes;
  CHECK(detail::mom_toeplitz_k2_integrate(beta, n, nodes) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("golden polynomials: exact counts for (1,1), (2,1), (1,2) at N = 0..10") {
  for (int n = 0; n <= 10; ++n) {
    CHECK(mom_exact_unitary(1, 1, n) == n + 1);
    BigRat m21((n + 1) * (n + 2) * (n + 3), 6);
    m21.canonicalize();
    CHECK(BigRat(mom_exact_unitary(2, 1, n)) == m21);
    BigRat m12((n + 1) * (n + 2) * (n + 2) * (n + 3), 12);
    m12.canonicalize();
    CHECK(BigRat(mom_exact_unitary(1, 2, n)) == m12);
  }
}

TEST_CASE("golden polynomial: mom(2,2) matches the explicit degree-15 form") {
  const RatPoly golden = golden_mom22();
  CHECK(golden.degree() == 15);
  for (int n = 0; n <= 10; ++n)
    CHECK(golden.eval(BigRat(n)) == BigRat(mom_exact_unitary(2, 2, n)));
}

TEST_CASE("mom_polynomial reconstructs the golden polynomials coefficient-exactly") {
  const MomPolynomial p11 = mom_polynomial(1, 1);
  CHECK(p11.poly == RatPoly({BigRat(1), BigRat(1)}));

  const MomPolynomial p21 = mom_polynomial(2, 1);
  RatPoly expect21 = RatPoly({BigRat(1), BigRat(1)}) * RatPoly({BigRat(2), BigRat(1)}) *
                     RatPoly({BigRat(3), BigRat(1)});
  BigRat sixth(1, 6);
  CHECK(p21.poly == expect21 * sixth);
  CHECK(p21.poly.degree() == 3);  // k^2 b^2 - k + 1

  const MomPolynomial p12 = mom_polynomial(1, 2);
  CHECK(p12.poly.degree() == 4);
  BigRat at7(8 * 9 * 9 * 10, 12);
  at7.canonicalize();
  CHECK(p12.poly.eval(BigRat(7)) == at7);
}

TEST_CASE("mom_monte_carlo agrees with exact values") {
  Rng rng(271);
  const Estimate u = mom_monte_carlo(Group::Unitary, 2, 1.0, 8, 3000, 40, rng);
  CHECK(std::abs(u.value - 165.0) < 3.0 * u.stderr_value);
  CHECK(u.stderr_value < 20.0);

  const Estimate so = mom_monte_carlo(Group::SpecialOrthogonalEven, 1, 1.0, 4, 3000, 16, rng);
  CHECK(std::abs(so.value - 10.0) < 3.0 * so.stderr_value);  // 2(N+1)
}

TEST_CASE("three-way agreement: exact = toeplitz = monte carlo") {
  Rng rng(277);
  struct Case {
    int k, beta;
  };
  for (const Case c : {Case{1, 1}, Case{2, 1}, Case{1, 2}, Case{2, 2}}) {
    for (int n : {2, 5, 8}) {
      const double exact = to_double(BigRat(mom_exact_unitary(c.k, c.beta, n)));
      const QuadratureResult t = mom_toeplitz(c.k, c.beta, n, 128);
      CHECK(t.value == doctest::Approx(exact).epsilon(1e-6));
    }
    const double exact8 = to_double(BigRat(mom_exact_unitary(c.k, c.beta, 8)));
    const Estimate mc = mom_monte_carlo(Group::Unitary, c.k, c.beta, 8, 2500, 40, rng);
    CHECK(std::abs(mc.value - exact8) < 3.0 * mc.stderr_value);
  }
}

TEST_CASE("cfkrs contour average: trivial character") {
  const auto v = cfkrs_contour_average({std::complex<double>(0.1, 0.0)}, 0, 1, 5, 128);
  CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("cfkrs contour average: |det|^2 at zero shifts is N + 1") {
  for (int n_dim : {3, 7}) {
    const auto v = cfkrs_contour_average(
        {std::complex<double>(0.0, 0.0), std::complex<double>(0.0, 0.0)}, 1, 2, n_dim, 256);
    CHECK(std::abs(v - static_cast<double>(n_dim + 1)) < 1e-6);
  }
}

TEST_CASE("cfkrs contour average against a Monte Carlo oracle at N = 6") {
  const std::complex<double> a1(0.05, 0.02), a2(-0.03, 0.04);
  const auto v = cfkrs_contour_average({a1, a2}, 1, 2, 6, 256);
  Rng rng(283);
  RunningStats re, im;
  for (int t = 0; t < 60000; ++t) {
    const auto s = sample_eigenphases(Group::Unitary, 6, std::nullopt, rng);
    std::complex<double> d1(1.0, 0.0), d2(1.0, 0.0);
    for (double th : s.phases) {
      const std::complex<double> z(std::cos(th), std::sin(th));
      d1 *= 1.0 - std::conj(z) * std::exp(-a1);  // det(I - A* e^{-a1})
      d2 *= 1.0 - z * std::exp(a2);              // det(I - A e^{a2})
    }
    const std::complex<double> prod = d1 * d2;
    re.push(prod.real());
    im.push(prod.imag());
  }
  CHECK(std::abs(v.real() - re.mean()) < 3.0 * re.stderr_mean());
  CHECK(std::abs(v.imag() - im.mean()) < 3.0 * im.stderr_mean());
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fh_fourier_coeffs(SymbolSpec{-0.5, {0.0}}, 4), Error);
  CHECK_THROWS_AS(fh_fourier_coeffs(SymbolSpec{1.0, {}}, 4), Error);
  CHECK_THROWS_AS(mom_toeplitz(3, 1.0, 4), Error);
  CHECK_THROWS_AS(mom_polynomial(3, 2), Error);
  const FourierSymbol tiny = fh_fourier_coeffs(SymbolSpec{1.0, {0.0}}, 2);
  CHECK_THROWS_AS(toeplitz_logdet(tiny, 8), Error);
}
