#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "logcorr/charpoly.hpp"
#include "logcorr/closed_forms.hpp"
#include "logcorr/ensembles.hpp"

using namespace logcorr;

namespace {

EigenphaseSet make_set(std::vector<double> phases) {
  EigenphaseSet s;
  s.group = Group::Unitary;
  s.n_half = static_cast<int>(phases.size());
  std::sort(phases.begin(), phases.end());
  s.phases = std::move(phases);
  return s;
}

// Direct product-expansion oracle for secular coefficients.
std::vector<std::complex<double>> secular_oracle(const EigenphaseSet& s) {
  std::vector<std::complex<double>> e{1.0};
  for (double t : s.phases) {
    const std::complex<double> z(std::cos(t), std::sin(t));
    e.push_back(0.0);
    for (std::size_t i = e.size() - 1; i >= 1; --i) e[i] += z * e[i - 1];
  }
  return e;
}

}  // namespace

TEST_CASE("log_abs_charpoly basic values") {
  CHECK(log_abs_charpoly(make_set({kPi}), 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(log_abs_charpoly(make_set({kPi / 2, 3 * kPi / 2}), 0.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-13));  // |1-i||1+i| = 2
  CHECK(log_abs_charpoly(make_set({1.0, 2.0}), 1.0) == -kInf);
  CHECK(log_abs_charpoly(make_set({1.0}), 1.0 + 1e-13) == -kInf);  // within the 1e-12 cutoff
}

TEST_CASE("negative_log_field is exactly -2 log_abs_charpoly") {
  Rng rng(3);
  const auto s = sample_eigenphases(Group::Unitary, 16, std::nullopt, rng);
  for (int i = 0; i < 50; ++i) {
    const double th = rng.uniform(0.0, kTwoPi);
    CHECK(negative_log_field(s, th) == -2.0 * log_abs_charpoly(s, th));
  }
  CHECK(negative_log_field(make_set({kPi}), 0.0) == doctest::Approx(-2 * std::log(2.0)));
  CHECK(negative_log_field(make_set({1.0}), 1.0) == kInf);
}

TEST_CASE("field_grid values match direct recomputation") {
  Rng rng(11);
  for (int n : {7, 33, 100}) {
    const auto s = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
    const FieldGrid g = field_grid(s, kTwoPi, static_cast<std::size_t>(8 * n));
    for (std::size_t m = 0; m < g.thetas.size(); m += 17) {
      const double direct = log_abs_charpoly(s, g.thetas[m]);
      if (!std::isfinite(g.values[m])) {
        CHECK(!std::isfinite(direct));
      } else {
        CHECK(g.values[m] == doctest::Approx(direct).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("field_max on a single phase attains log 2 opposite the phase") {
  const double phi = 1.1;
  const FieldMax m = field_max(make_set({phi}), kTwoPi, 8, 40);
  CHECK(m.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(std::abs(mod_two_pi(m.theta_star - phi - kPi)) < 1e-4);
}

TEST_CASE("field_max degenerate: all phases equal gives N log 2") {
  const FieldMax m = field_max(make_set(std::vector<double>(6, 2.0)), kTwoPi, 8, 40);
  CHECK(m.value == doctest::Approx(6.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("field_max never below its own grid maximum") {
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = sample_eigenphases(Group::Unitary, 24, std::nullopt, rng);
    const FieldGrid g = field_grid(s, kTwoPi, 8 * 24);
    double gm = -kInf;
    for (double v : g.values) gm = std::max(gm, v);
    const FieldMax m = field_max(s, kTwoPi, 8, 25);
    CHECK(m.value >= gm - 1e-12);
  }
}

TEST_CASE("field_max over a partial arc stays within the arc") {
  Rng rng(19);
  const auto s = sample_eigenphases(Group::Unitary, 16, std::nullopt, rng);
  const double L = kPi / 2;
  const FieldMax m = field_max(s, L, 8, 20);
  CHECK(m.theta_star >= -1e-9);
  CHECK(m.theta_star <= L + 1e-9);
  CHECK(std::isfinite(m.value));
}

TEST_CASE("secular coefficients: basics and oracle agreement") {
  Rng rng(23);
  for (int n : {1, 5, 12, 32}) {
    const auto s = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
    const SecularCoeffs sc = secular_coefficients(s);
    REQUIRE(sc.coeffs.size() == static_cast<std::size_t>(n + 1));
    CHECK(std::abs(sc.coeffs[0] - 1.0) < 1e-13);
    CHECK(std::abs(sc.coeffs[1] - trace_power(s, 1)) < 1e-10);  // e_1 = p_1
    CHECK(std::abs(std::abs(sc.coeffs[n]) - 1.0) < 1e-9);       // det has unit modulus
    const auto oracle = secular_oracle(s);
    for (int k = 0; k <= n; ++k) CHECK(std::abs(sc.coeffs[k] - oracle[k]) < 1e-8);
  }
}

TEST_CASE("secular evaluation agrees with the direct sum at N = 256") {
  Rng rng(29);
  const auto s = sample_eigenphases(Group::Unitary, 256, std::nullopt, rng);
  const SecularCoeffs sc = secular_coefficients(s);
  for (int i = 0; i < 128; ++i) {
    const double th = rng.uniform(0.0, kTwoPi);
    const double direct = log_abs_charpoly(s, th);
    const double via = std::log(std::abs(charpoly_from_secular(sc, th)));
    if (std::isfinite(direct)) CHECK(via == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("mean |Sc_n|^2 = 1 over U(8)") {
  Rng rng(31);
  std::vector<RunningStats> st(9);
  for (int i = 0; i < 20000; ++i) {
    const auto s = sample_eigenphases(Group::Unitary, 8, std::nullopt, rng);
    const SecularCoeffs sc = secular_coefficients(s);
    for (int k = 1; k <= 8; ++k) st[k].push(std::norm(sc.coeffs[k]));
  }
  for (int k = 1; k < 8; ++k) CHECK(std::abs(st[k].mean() - 1.0) < 3.0 * st[k].stderr_mean());
  // |Sc_N| = |det| = 1 identically: no sampling error to speak of
  CHECK(std::abs(st[8].mean() - 1.0) < 1e-10);
}

TEST_CASE("secular_sum_moment: eta = 1 recovers E|Sc_m|^2") {
  Rng rng(37);
  const Estimate e = secular_sum_moment(1, 3, 8, 4000, rng);
  CHECK(std::abs(e.value - 1.0) < 3.0 * e.stderr_value);
  const Estimate zero = secular_sum_moment(1, 9, 8, 50, rng);  // m > eta*N: empty sum
  CHECK(zero.value == 0.0);
}

TEST_CASE("secular_sum_moment validates m range") {
  Rng rng(1);
  CHECK_THROWS_AS(secular_sum_moment(2, -1, 8, 10, rng), Error);
}

TEST_CASE("secular_sum_moment trend: eta = 2 grows like N^3") {
  Rng rng(41);
  std::vector<double> lx, ly;
  for (int n : {8, 16, 32}) {
    const Estimate e = secular_sum_moment(2, n / 2, n, 800, rng);  // c = m/N = 1/2
    lx.push_back(std::log(n));
    ly.push_back(std::log(e.value));
  }
  const LinearFit f = linear_fit(lx, ly);
  CHECK(f.slope == doctest::Approx(3.0).epsilon(0.25));  // eta^2 - 1 = 3, trend check
}

TEST_CASE("clt_experiment at N = 64") {
  Rng rng(43);
  const CltSummary s = clt_experiment(Group::Unitary, 64, 10000, rng);
  CHECK(std::abs(s.mean) < 0.05);
  CHECK(std::abs(s.variance - 1.0) < 0.08);
  CHECK(s.ks_normal < 0.03);
  const CltSummary si = clt_experiment(Group::Unitary, 64, 10000, rng, /*imaginary=*/true);
  CHECK(std::abs(si.mean) < 0.05);
  CHECK(std::abs(si.variance - 1.0) < 0.08);
  CHECK(si.ks_normal < 0.03);
}

TEST_CASE("clt_experiment input validation") {
  Rng rng(1);
  CHECK_THROWS_AS(clt_experiment(Group::Unitary, 2, 200, rng), Error);
  CHECK_THROWS_AS(clt_experiment(Group::Unitary, 64, 10, rng), Error);
}

TEST_CASE("covariance profile of V_N") {
  Rng rng(47);
  const std::vector<double> seps{1e-4, 0.1, kPi};
  const auto cov = covariance_profile(256, seps, 6000, rng);
  // s << 1/N: perfectly correlated, exact value 4 Q2(N) = 2 log N + O(1)
  CHECK(std::abs(cov[0].value - 4.0 * log_charpoly_variance(256)) < 4.0 * cov[0].stderr_value);
  CHECK(std::abs(cov[0].value - 2.0 * std::log(256.0)) < 3.5);
  CHECK(std::abs(cov[1].value + 2.0 * std::log(0.1)) < 0.5);  // -2 log s
  // antipodal separation: circle-metric value -2 log|2 sin(s/2)| = -2 log 2,
  // an O(1) number (the -2 log s branch formula is a small-s statement)
  CHECK(std::abs(cov[2].value + 2.0 * std::log(2.0)) < 0.5);
}

TEST_CASE("pair correlation matches the sine kernel at N = 50") {
  Rng rng(53);
  std::vector<EigenphaseSet> batch;
  for (int i = 0; i < 1000; ++i)
    batch.push_back(sample_eigenphases(Group::Unitary, 50, std::nullopt, rng));
  const Histogram h = pair_correlation(batch, 0.25, 8.0);
  double worst = 0.0;
  for (std::size_t b = 0; b < h.size(); ++b) {
    const double x = h.center(b);
    const double kernel = 1.0 - sq(std::sin(kPi * x) / (kPi * x));
    worst = std::max(worst, std::abs(h.counts[b] - kernel));
  }
  CHECK(worst < 0.05);
  // repulsion at the origin: the first bin averages the kernel ~ (pi x)^2/3
  CHECK(h.counts[0] < 0.12);
  CHECK(h.counts[0] < h.counts[2]);
  CHECK(h.counts[2] < h.counts[6]);
  // integral over [alpha, beta] matches the integrated kernel
  double mass = 0.0, expect = 0.0;
  for (std::size_t b = 4; b < 12; ++b) {  // x in [1, 3]
    mass += h.counts[b] * h.bin_width;
    const double x = h.center(b);
    expect += (1.0 - sq(std::sin(kPi * x) / (kPi * x))) * h.bin_width;
  }
  CHECK(std::abs(mass - expect) < 0.05);
}

TEST_CASE("pair correlation normalization: total mass over [0, N/2]") {
  Rng rng(59);
  std::vector<EigenphaseSet> batch;
  const int n = 20;
  for (int i = 0; i < 200; ++i)
    batch.push_back(sample_eigenphases(Group::Unitary, n, std::nullopt, rng));
  const Histogram h = pair_correlation(batch, 0.5, 0.5 * n);
  double mass = 0.0;
  for (double c : h.counts) mass += c * h.bin_width;
  const double expect = 0.5 * n * (double(n - 1) / n);  // (N-1)/2
  CHECK(mass == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("pair correlation rejects mixed-N batches") {
  Rng rng(2);
  std::vector<EigenphaseSet> bad{sample_eigenphases(Group::Unitary, 4, std::nullopt, rng),
                                 sample_eigenphases(Group::Unitary, 5, std::nullopt, rng)};
  CHECK_THROWS_AS(pair_correlation(bad, 0.25, 2.0), Error);
}

TEST_CASE("iid max norming constants") {
  const MaxNorming m = iid_max_norming(std::exp(1.0));
  CHECK(m.a_n == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  // frozen from the substitution oracle 1/sqrt(2 ln 10)
  CHECK(iid_max_norming(10.0).a_n == doctest::Approx(0.46599060178465607).epsilon(1e-12));
  CHECK_THROWS_AS(iid_max_norming(1.5), Error);
}

TEST_CASE("standardized maxima of 1e5 iid normals are Gumbel") {
  Rng rng(61);
  const int n = 100000, trials = 1000;
  const MaxNorming mn = iid_max_norming(n);
  std::vector<double> xs;
  xs.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    double mx = -kInf;
    for (int i = 0; i < n; ++i) mx = std::max(mx, rng.normal());
    xs.push_back((mx - mn.b_n) / mn.a_n);
  }
  CHECK(ks_distance(xs, gumbel_cdf) < 0.05);
}

TEST_CASE("RMT maxima trend at desk scale (small-N smoke)") {
  // The real criterion (N up to 4096) lives in the acceptance suite; here a
  // light version checks the machinery end to end.
  Rng rng(67);
  std::vector<double> lx, ly;
  for (int n : {64, 128, 256}) {
    RunningStats st;
    for (int t = 0; t < 60; ++t) {
      const auto s = sample_eigenphases(Group::Unitary, n, std::nullopt, rng);
      st.push(field_max(s, kTwoPi, 8, 20).value);
    }
    lx.push_back(std::log(std::log(n)));
    ly.push_back(st.mean() - std::log(n));
  }
  const LinearFit f = linear_fit(lx, ly);
  CHECK(f.slope < 0.0);  // pulled down, direction only at this scale
}
