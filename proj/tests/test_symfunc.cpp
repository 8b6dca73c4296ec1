#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <vector>

#include "logcorr/closed_forms.hpp"
#include "logcorr/rng.hpp"
#include "logcorr/symfunc.hpp"

using namespace logcorr;

namespace {

// Brute-force enumeration of SSYT of `shape` with entries in {1..n}; calls
// visit(tableau) for each.
void enumerate_ssyt(const Partition& shape, int n, const std::function<void(const Tableau&)>& visit) {
  Tableau t;
  t.shape = shape;
  t.rows.resize(shape.length());
  for (std::size_t r = 0; r < shape.length(); ++r)
    t.rows[r].assign(static_cast<std::size_t>(shape.parts[r]), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t r, std::size_t c) {
    if (r == t.rows.size()) {
      visit(t);
      return;
    }
    const std::size_t nr = (c + 1 < t.rows[r].size()) ? r : r + 1;
    const std::size_t nc = (c + 1 < t.rows[r].size()) ? c + 1 : 0;
    int lo = 1;
    if (c > 0) lo = std::max(lo, t.rows[r][c - 1]);
    if (r > 0) lo = std::max(lo, t.rows[r - 1][c] + 1);
    for (int v = lo; v <= n; ++v) {
      t.rows[r][c] = v;
      rec(nr, nc);
    }
  };
  if (shape.length() == 0) {
    visit(t);
    return;
  }
  rec(0, 0);
}

BigInt count_ssyt_oracle(const Partition& shape, int n) {
  BigInt c(0);
  enumerate_ssyt(shape, n, [&](const Tableau&) { c += 1; });
  return c;
}

// Restricted count by brute enumeration: block contents tau_j all equal N*beta.
BigInt restricted_count_oracle(int n, int k, int beta) {
  const Partition shape = Partition::rectangle(k * beta, n);
  const int alphabet = 2 * k * beta;
  BigInt c(0);
  enumerate_ssyt(shape, alphabet, [&](const Tableau& t) {
    std::vector<int> content(static_cast<std::size_t>(alphabet) + 1, 0);
    for (const auto& row : t.rows)
      for (int v : row) ++content[static_cast<std::size_t>(v)];
    for (int j = 1; j <= k; ++j) {
      long tau = 0;
      for (int i = 2 * (j - 1) * beta + 1; i <= 2 * j * beta; ++i)
        tau += content[static_cast<std::size_t>(i)];
      if (tau != static_cast<long>(n) * beta) return;
    }
    c += 1;
  });
  return c;
}

// Weyl dimension formulas as independent oracles for the pattern enumerators.
double sp_dimension(const Signature& nu) {
  const int n = static_cast<int>(nu.length());
  std::vector<double> l(static_cast<std::size_t>(n)), m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    l[static_cast<std::size_t>(i)] = nu.entries[static_cast<std::size_t>(i)] + n - i;
    m[static_cast<std::size_t>(i)] = n - i;
  }
  double d = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d *= (l[i] * l[i] - l[j] * l[j]) / (m[i] * m[i] - m[j] * m[j]);
  for (int i = 0; i < n; ++i) d *= l[static_cast<std::size_t>(i)] / m[static_cast<std::size_t>(i)];
  return d;
}

double o_dimension(const Signature& nu) {
  const int n = static_cast<int>(nu.length());
  std::vector<double> l(static_cast<std::size_t>(n)), m(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    l[static_cast<std::size_t>(i)] = nu.entries[static_cast<std::size_t>(i)] + n - i - 1;
    m[static_cast<std::size_t>(i)] = n - i - 1;
  }
  double d = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d *= (l[i] * l[i] - l[j] * l[j]) / (m[i] * m[i] - m[j] * m[j]);
  return (nu.entries.back() == 0 ? 1.0 : 2.0) * d;
}

}  // namespace

TEST_CASE("count_ssyt basics") {
  CHECK(count_ssyt(Partition({5}), 2) == 6);  // (N), n=2 -> N+1
  for (int n = 0; n <= 8; ++n) CHECK(count_ssyt(Partition::rectangle(1, n), 2) == n + 1);
  CHECK(count_ssyt(Partition({2, 1}), 3) == 8);
  CHECK(count_ssyt(Partition({1, 1, 1}), 2) == 0);  // taller than alphabet
  CHECK(count_ssyt(Partition(), 3) == 1);           // empty shape
}

TEST_CASE("count_ssyt against enumeration") {
  const std::vector<Partition> shapes{Partition({2, 1}), Partition({3, 2}), Partition({2, 2, 1}),
                                      Partition({4}), Partition({3, 1, 1})};
  for (const auto& shape : shapes)
    for (int n = static_cast<int>(shape.length()); n <= 5; ++n)
      CHECK(count_ssyt(shape, n) == count_ssyt_oracle(shape, n));
}

TEST_CASE("count_ssyt equals the GT-pattern count (schur at all-ones)") {
  for (const auto& shape :
       {Partition({2, 1}), Partition({3, 2, 1}), Partition({2, 2}), Partition({4, 3})}) {
    for (int n = static_cast<int>(shape.length()); n <= 5; ++n) {
      const BigRat viaschur =
          schur_eval<BigRat>(shape, std::vector<BigRat>(static_cast<std::size_t>(n), BigRat(1)));
      CHECK(viaschur == BigRat(count_ssyt(shape, n)));
    }
  }
}

TEST_CASE("schur_eval basics") {
  std::vector<double> x{0.3, 1.7, -2.0};
  CHECK(schur_eval<double>(Partition({1}), x) == doctest::Approx(0.3 + 1.7 - 2.0));
  CHECK(schur_eval<double>(Partition({2, 1}), {1.0, 1.0, 1.0}) == doctest::Approx(8.0));
}

TEST_CASE("schur_eval is a symmetric function (exact)") {
  Rng rng(13);
  const Partition shape({3, 1});
  std::vector<BigRat> x{BigRat(2, 3), BigRat(-1, 2), BigRat(5)};
  const BigRat base = schur_eval<BigRat>(shape, x);
  for (int perm = 0; perm < 5; ++perm) {
    std::swap(x[static_cast<std::size_t>(rng.next_u64() % 3)],
              x[static_cast<std::size_t>(rng.next_u64() % 3)]);
    CHECK(schur_eval<BigRat>(shape, x) == base);
  }
}

TEST_CASE("Bump-Gamburd: schur of the rectangle at all-ones is Keating-Snaith") {
  for (int beta : {1, 2}) {
    for (int n = 1; n <= 6; ++n) {
      const Partition shape = Partition::rectangle(beta, n);
      const BigRat s =
          schur_eval<BigRat>(shape, std::vector<BigRat>(static_cast<std::size_t>(2 * beta), BigRat(1)));
      CHECK(s == keating_snaith_moment_exact(n, beta));
    }
  }
}

TEST_CASE("restricted_rect_count examples") {
  for (int n = 0; n <= 8; ++n) CHECK(restricted_rect_count(n, 1, 1) == n + 1);
  CHECK(restricted_rect_count(2, 2, 1) == 10);
  CHECK(restricted_rect_count(1, 2, 2) == 36);
  CHECK(restricted_rect_count(0, 2, 2) == 1);
}

TEST_CASE("restricted_rect_count against brute enumeration") {
  for (int n = 0; n <= 3; ++n) {
    CHECK(restricted_rect_count(n, 1, 1) == restricted_count_oracle(n, 1, 1));
    CHECK(restricted_rect_count(n, 2, 1) == restricted_count_oracle(n, 2, 1));
    CHECK(restricted_rect_count(n, 1, 2) == restricted_count_oracle(n, 1, 2));
  }
  CHECK(restricted_rect_count(2, 2, 2) == restricted_count_oracle(2, 2, 2));
}

TEST_CASE("restricted count never exceeds the unrestricted count") {
  for (int n = 1; n <= 5; ++n) {
    CHECK(restricted_rect_count(n, 2, 1) <= count_ssyt(Partition::rectangle(2, n), 4));
    CHECK(restricted_rect_count(n, 2, 2) <= count_ssyt(Partition::rectangle(4, n), 8));
  }
}

TEST_CASE("ssyt <-> GT bijection") {
  // single cell containing 1, n = 1 <-> pattern ((1))
  Tableau t;
  t.shape = Partition({1});
  t.rows = {{1}};
  const GTPattern g = ssyt_to_gt(t, 1);
  REQUIRE(g.rows.size() == 1);
  CHECK(g.rows[0] == std::vector<int>{1});
  const Tableau back = gt_to_ssyt(g);
  CHECK(back.rows == t.rows);

  // empty tableau <-> all-zero pattern
  Tableau empty;
  const GTPattern gz = ssyt_to_gt(empty, 3);
  for (const auto& row : gz.rows)
    for (int v : row) CHECK(v == 0);
  CHECK(gt_to_ssyt(gz).shape.length() == 0);
}

TEST_CASE("bijection round trip over all SSYT of (4,3,2,1) with n = 4") {
  const Partition shape({4, 3, 2, 1});
  int count = 0;
  enumerate_ssyt(shape, 4, [&](const Tableau& t) {
    ++count;
    const GTPattern g = ssyt_to_gt(t, 4);
    CHECK(std::vector<int>(g.rows[3].begin(), g.rows[3].end()) == shape.parts);
    const Tableau back = gt_to_ssyt(g);
    CHECK(back.rows == t.rows);
  });
  CHECK(count == 64);                // enumeration on the tableau side
  CHECK(count_ssyt(shape, 4) == 64); // product formula
  // GT side: patterns with this fixed top row, counted by DP
  CHECK(schur_eval<BigRat>(shape, std::vector<BigRat>(4, BigRat(1))) == BigRat(64));
}

TEST_CASE("gt_to_ssyt rejects invariant violations") {
  GTPattern bad;
  bad.rows = {{1}, {0, 0}};  // 1 does not interlace below (0,0)
  CHECK_THROWS_AS(gt_to_ssyt(bad), Error);
  GTPattern neg;
  neg.rows = {{-1}};
  CHECK_THROWS_AS(gt_to_ssyt(neg), Error);
}

TEST_CASE("symplectic pattern weight matches the worked example") {
  // rows bottom-up: (1), (2), (2,1), (3,2); weight x2
  HalfPattern p;
  p.rows = {{1}, {2}, {2, 1}, {3, 2}};
  std::vector<BigRat> x{BigRat(3, 7), BigRat(5, 2)};
  CHECK(symplectic_weight(p, x) == BigRat(5, 2));
  const std::vector<double> xd{1.5, 2.5};
  CHECK(symplectic_weight(p, xd) == doctest::Approx(2.5));
}

TEST_CASE("orthogonal pattern weight matches the worked example") {
  // rows bottom-up: (-1), (1), (2,0), (2,2), (4,2,-2); weight (x1 x2 x3^2)^{-1}
  HalfPattern p;
  p.rows = {{-1}, {1}, {2, 0}, {2, 2}, {4, 2, -2}};
  std::vector<double> x{2.0, 3.0, 5.0};
  CHECK(orthogonal_weight(p, x) == doctest::Approx(1.0 / (2.0 * 3.0 * 25.0)));
}

TEST_CASE("symplectic Schur: trivial and standard characters") {
  for (int n = 1; n <= 3; ++n) {
    const Signature zero(std::vector<int>(static_cast<std::size_t>(n), 0));
    CHECK(symplectic_schur_eval<BigRat>(
              zero, std::vector<BigRat>(static_cast<std::size_t>(n), BigRat(7, 3))) == BigRat(1));
  }
  std::vector<BigRat> x{BigRat(3, 2)};
  CHECK(symplectic_schur_eval<BigRat>(Signature({1}), x) == BigRat(3, 2) + BigRat(2, 3));
}

TEST_CASE("orthogonal Schur: trivial and standard characters") {
  for (int n = 1; n <= 3; ++n) {
    const Signature zero(std::vector<int>(static_cast<std::size_t>(n), 0));
    CHECK(orthogonal_schur_eval<BigRat>(
              zero, std::vector<BigRat>(static_cast<std::size_t>(n), BigRat(9, 4))) == BigRat(1));
  }
  std::vector<BigRat> x{BigRat(5, 3)};
  CHECK(orthogonal_schur_eval<BigRat>(Signature({1}), x) == BigRat(5, 3) + BigRat(3, 5));
  std::vector<BigRat> x2{BigRat(2), BigRat(3)};
  CHECK(orthogonal_schur_eval<BigRat>(Signature({1, 0}), x2) ==
        BigRat(2) + BigRat(1, 2) + BigRat(3) + BigRat(1, 3));
}

TEST_CASE("pattern enumerators against Weyl dimension formulas") {
  const std::vector<Signature> nus{Signature({1, 0}), Signature({1, 1}), Signature({2, 0}),
                                   Signature({2, 1}), Signature({2, 1, 0}), Signature({1, 1, 1})};
  for (const auto& nu : nus) {
    const std::size_t n = nu.length();
    const std::vector<double> ones(n, 1.0);
    CHECK(symplectic_schur_eval<double>(nu, ones) == doctest::Approx(sp_dimension(nu)));
    CHECK(orthogonal_schur_eval<double>(nu, ones) == doctest::Approx(o_dimension(nu)));
  }
}

TEST_CASE("sp and o characters are invariant under inverting a variable") {
  const Signature nu({2, 1});
  std::vector<BigRat> x{BigRat(5, 2), BigRat(4, 3)};
  const BigRat sp0 = symplectic_schur_eval<BigRat>(nu, x);
  const BigRat o0 = orthogonal_schur_eval<BigRat>(nu, x);
  for (int i = 0; i < 2; ++i) {
    auto y = x;
    y[static_cast<std::size_t>(i)] = BigRat(1) / y[static_cast<std::size_t>(i)];
    CHECK(symplectic_schur_eval<BigRat>(nu, y) == sp0);
    CHECK(orthogonal_schur_eval<BigRat>(nu, y) == o0);
  }
}

TEST_CASE("partition and signature validation") {
  CHECK_THROWS_AS(Partition({1, 2}), Error);
  CHECK_THROWS_AS(Partition({2, -1}), Error);
  CHECK_THROWS_AS(Signature({1, 2}), Error);
  CHECK(Signature({3, 2, 1}).minus() == Signature({3, 2, -1}));
  CHECK_THROWS_AS(Signature({2, -1}, true), Error);
}
