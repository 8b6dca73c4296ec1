#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "logcorr/bigint.hpp"
#include "logcorr/common.hpp"

namespace logcorr {

/// Weakly decreasing positive parts; trailing zeros identified away.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {
    while (!parts.empty() && parts.back() == 0) parts.pop_back();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      require(parts[i] >= 1, "Partition: parts must be positive");
      if (i) require(parts[i - 1] >= parts[i], "Partition: parts must be non-increasing");
    }
  }
  static Partition rectangle(int height, int width) {
    require(height >= 0 && width >= 0, "Partition::rectangle: nonnegative dims");
    if (width == 0) height = 0;
    return Partition(std::vector<int>(static_cast<std::size_t>(height), width));
  }
  std::size_t length() const { return parts.size(); }
  int part(std::size_t i) const { return i < parts.size() ? parts[i] : 0; }
  long weight() const {
    long w = 0;
    for (int p : parts) w += p;
    return w;
  }
  bool operator==(const Partition& o) const { return parts == o.parts; }
};

/// Non-increasing integers of fixed length; trailing zeros are recorded.
struct Signature {
  std::vector<int> entries;

  Signature() = default;
  explicit Signature(std::vector<int> e, bool nonneg = false) : entries(std::move(e)) {
    for (std::size_t i = 1; i < entries.size(); ++i)
      require(entries[i - 1] >= entries[i], "Signature: entries must be non-increasing");
    if (nonneg && !entries.empty())
      require(entries.back() >= 0, "Signature: nonneg flag violated");
  }
  std::size_t length() const { return entries.size(); }
  /// lambda^-: negate the last entry.
  Signature minus() const {
    require(!entries.empty(), "Signature::minus: empty");
    std::vector<int> e = entries;
    e.back() = -e.back();
    return Signature(std::move(e));
  }
  bool operator==(const Signature& o) const { return entries == o.entries; }
};

/// Row-weak, column-strict filling of a Young diagram.
struct Tableau {
  Partition shape;
  std::vector<std::vector<int>> rows;

  void validate(int alphabet) const {
    require(rows.size() == shape.length(), "Tableau: row count mismatch");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      require(static_cast<int>(rows[r].size()) == shape.parts[r], "Tableau: row length mismatch");
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        require(rows[r][c] >= 1 && rows[r][c] <= alphabet, "Tableau: entry out of alphabet");
        if (c) require(rows[r][c - 1] <= rows[r][c], "Tableau: rows must weakly increase");
        if (r) require(rows[r - 1][c] < rows[r][c], "Tableau: columns must strictly increase");
      }
    }
  }
};

/// Triangular array of interlacing nonnegative signatures; row i has length i.
struct GTPattern {
  std::vector<std::vector<int>> rows;
};

/// x^e for integer e (negative allowed); division only reached when e < 0.
template <class R>
R ring_int_pow(const R& x, long e) {
  bool inv = e < 0;
  unsigned long m = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  R base = x;
  R acc = R(1);
  while (m) {
    if (m & 1) acc = acc * base;
    base = base * base;
    m >>= 1;
  }
  if (inv) acc = R(1) / acc;
  return acc;
}

namespace detail {

/// Interlacing lower < upper for len(lower) in {len(upper)-1, len(upper)}:
/// upper_1 >= lower_1 >= upper_2 >= lower_2 >= ...
inline bool interlaces(const std::vector<int>& lower, const std::vector<int>& upper) {
  if (lower.size() + 1 == upper.size()) {
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(upper[i] >= lower[i] && lower[i] >= upper[i + 1])) return false;
    return true;
  }
  if (lower.size() == upper.size()) {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(upper[i] >= lower[i])) return false;
      if (i + 1 < upper.size() && !(lower[i] >= upper[i + 1])) return false;
    }
    return true;
  }
  return false;
}

}  // namespace detail

/// Number of SSYT of the given shape with entries in {1..n}: the Weyl
/// dimension product prod_{i<j} (l_i - l_j + j - i)/(j - i); zero when the
/// shape is taller than the alphabet.
inline BigInt count_ssyt(const Partition& shape, int n) {
  require(n >= 0, "count_ssyt: alphabet size >= 0");
  if (static_cast<int>(shape.length()) > n) return BigInt(0);
  BigInt num(1), den(1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      num *= shape.part(i - 1) - shape.part(j - 1) + j - i;
      den *= j - i;
    }
  return num / den;
}

/// Schur polynomial via dynamic programming over Gelfand-Tsetlin rows:
/// s_shape(x_1..x_n) = sum over patterns of prod_i x_i^{|row_i| - |row_{i-1}|}.
template <class R>
R schur_eval(const Partition& shape, const std::vector<R>& x) {
  const int n = static_cast<int>(x.size());
  require(n >= 1, "schur_eval: need at least one variable");
  if (static_cast<int>(shape.length()) > n) return R(0);
  if (shape.length() == 0) return R(1);

  using Key = std::vector<int>;
  std::map<Key, R> cur;
  cur[{}] = R(1);
  for (int level = 1; level <= n; ++level) {
    std::map<Key, R> next;
    const int len = std::min<int>(level, static_cast<int>(shape.length()));
    for (const auto& [lo, weight] : cur) {
      long lo_sum = 0;
      for (int v : lo) lo_sum += v;
      std::vector<int> hi(static_cast<std::size_t>(len), 0);
      std::function<void(int, long)> rec = [&](int idx, long hi_sum) {
        if (idx == len) {
          if (level == n) {
            for (int i = 0; i < len; ++i)
              if (hi[static_cast<std::size_t>(i)] != shape.part(static_cast<std::size_t>(i)))
                return;
          }
          const R add = weight * ring_int_pow(x[static_cast<std::size_t>(level - 1)],
                                              hi_sum - lo_sum);
          auto it = next.find(hi);
          if (it == next.end()) next.emplace(hi, add);
          else it->second = it->second + add;
          return;
        }
        const std::size_t ui = static_cast<std::size_t>(idx);
        const int low = (ui < lo.size()) ? lo[ui] : 0;
        int high = shape.part(ui);  // containment in the target shape
        if (idx > 0) high = std::min(high, hi[ui - 1]);
        if (idx > 0 && ui - 1 < lo.size()) high = std::min(high, lo[ui - 1]);
        for (int v = low; v <= high; ++v) {
          hi[ui] = v;
          rec(idx + 1, hi_sum + v);
        }
      };
      rec(0, 0);
    }
    cur.swap(next);
  }
  R acc = R(0);
  for (const auto& [key, v] : cur) acc = acc + v;
  return acc;
}

/// Count SSYT of the rectangular shape <N^{k*beta}> with entries in {1..2kb}
/// whose block contents satisfy tau_j = N*beta for each j = 1..k; equivalently
/// Gelfand-Tsetlin patterns with the rectangle as top row and prescribed sizes
/// |row_{2 j beta}| = j N beta at the checkpoint levels.  Equals the unitary
/// moment of moments at integer parameters.
inline BigInt restricted_rect_count(int n, int k, int beta) {
  require(n >= 0, "restricted_rect_count: N >= 0");
  require(k >= 1 && beta >= 1, "restricted_rect_count: k, beta >= 1 integers");
  const int height = k * beta;
  const int alphabet = 2 * k * beta;
  if (n == 0) return BigInt(1);

  using Key = std::vector<int>;
  std::map<Key, BigInt> cur;
  cur[{}] = BigInt(1);
  for (int level = 1; level <= alphabet; ++level) {
    const int len = std::min(level, height);
    const bool checkpoint = (level % (2 * beta)) == 0;
    const long target = checkpoint ? static_cast<long>(level / (2 * beta)) *
                                         static_cast<long>(n) * static_cast<long>(beta)
                                   : -1;
    std::map<Key, BigInt> next;
    for (const auto& [lo, cnt] : cur) {
      std::vector<int> hi(static_cast<std::size_t>(len), 0);
      std::function<void(int, long)> rec = [&](int idx, long hi_sum) {
        if (idx == len) {
          if (checkpoint && hi_sum != target) return;
          if (level == alphabet) {
            for (int i = 0; i < len; ++i)
              if (hi[static_cast<std::size_t>(i)] != n) return;
          }
          auto it = next.find(hi);
          if (it == next.end()) next.emplace(hi, cnt);
          else it->second += cnt;
          return;
        }
        const std::size_t ui = static_cast<std::size_t>(idx);
        const int low = (ui < lo.size()) ? lo[ui] : 0;
        int high = n;
        if (idx > 0) high = std::min(high, hi[ui - 1]);
        if (idx > 0 && ui - 1 < lo.size()) high = std::min(high, lo[ui - 1]);
        for (int v = low; v <= high; ++v) {
          hi[ui] = v;
          rec(idx + 1, hi_sum + v);
        }
      };
      rec(0, 0);
    }
    cur.swap(next);
  }
  BigInt acc(0);
  for (const auto& [key, v] : cur) acc += v;
  return acc;
}

/// Tableau -> Gelfand-Tsetlin pattern: row i records the shape occupied by
/// entries <= i.
inline GTPattern ssyt_to_gt(const Tableau& t, int alphabet) {
  t.validate(alphabet);
  GTPattern g;
  g.rows.resize(static_cast<std::size_t>(alphabet));
  for (int level = 1; level <= alphabet; ++level) {
    std::vector<int> row(static_cast<std::size_t>(level), 0);
    for (std::size_t r = 0; r < t.rows.size() && r < static_cast<std::size_t>(level); ++r) {
      int cnt = 0;
      for (int v : t.rows[r])
        if (v <= level) ++cnt;
      row[r] = cnt;
    }
    g.rows[static_cast<std::size_t>(level - 1)] = std::move(row);
  }
  return g;
}

/// Inverse bijection: shape differences are horizontal strips filled with the
/// level's letter.
inline Tableau gt_to_ssyt(const GTPattern& g) {
  const int n = static_cast<int>(g.rows.size());
  require(n >= 1, "gt_to_ssyt: empty pattern");
  for (int i = 0; i < n; ++i) {
    const auto& row = g.rows[static_cast<std::size_t>(i)];
    require(static_cast<int>(row.size()) == i + 1, "gt_to_ssyt: row length mismatch");
    for (std::size_t j = 0; j + 1 < row.size(); ++j)
      require(row[j] >= row[j + 1], "gt_to_ssyt: rows must be signatures");
    require(row.back() >= 0, "gt_to_ssyt: entries must be nonnegative");
    if (i)
      require(detail::interlaces(g.rows[static_cast<std::size_t>(i - 1)], row),
              "gt_to_ssyt: interlacing violated");
  }
  const auto& top = g.rows[static_cast<std::size_t>(n - 1)];
  Tableau t;
  t.shape = Partition(std::vector<int>(top.begin(), top.end()));
  t.rows.resize(t.shape.length());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    t.rows[r].resize(static_cast<std::size_t>(t.shape.parts[r]));
  for (int level = 1; level <= n; ++level) {
    const auto& cur = g.rows[static_cast<std::size_t>(level - 1)];
    for (std::size_t r = 0; r < cur.size() && r < t.rows.size(); ++r) {
      const int prev = (level >= 2 && r < g.rows[static_cast<std::size_t>(level - 2)].size())
                           ? g.rows[static_cast<std::size_t>(level - 2)][r]
                           : 0;
      for (int c = prev; c < cur[r]; ++c) t.rows[r][static_cast<std::size_t>(c)] = level;
    }
  }
  t.validate(n);
  return t;
}

// ---------------------------------------------------------------------------
// Half patterns: symplectic and orthogonal characters by weighted enumeration.
// ---------------------------------------------------------------------------

/// Rows 2i-1 and 2i both have length i; row r is rows[r-1].
struct HalfPattern {
  std::vector<std::vector<int>> rows;
};

namespace detail {

inline long abs_sum(const std::vector<int>& v) {
  long s = 0;
  for (int x : v) s += std::abs(x);
  return s;
}
inline long plain_sum(const std::vector<int>& v) {
  long s = 0;
  for (int x : v) s += x;
  return s;
}
inline int sgn01(int x) { return x >= 0 ? 1 : -1; }
inline std::size_t half_row_len(std::size_t row_1based) { return (row_1based + 1) / 2; }

inline void validate_half_pattern(const HalfPattern& p) {
  require(!p.rows.empty(), "half pattern: empty");
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    require(p.rows[r].size() == half_row_len(r + 1), "half pattern: row length mismatch");
  for (std::size_t r = 0; r + 1 < p.rows.size(); ++r)
    require(interlaces(p.rows[r], p.rows[r + 1]), "half pattern: interlacing violated");
}

/// Enumerate all half patterns of length `total_rows` with the given top row,
/// top-down.  `symplectic` selects the nonnegativity rule; otherwise the
/// orthogonal odd-starter sign rules apply.  Calls visit(pattern).
template <class Visit>
void enumerate_half_patterns(const std::vector<int>& top, std::size_t total_rows, bool symplectic,
                             Visit&& visit) {
  require(half_row_len(total_rows) == top.size(), "half pattern: top row length mismatch");
  std::vector<std::vector<int>> down;  // rows from the top, downward
  down.reserve(total_rows);           // references into `down` must stay valid
  down.push_back(top);

  std::function<void(std::size_t)> descend = [&](std::size_t row_1based) {
    if (row_1based == 0) {
      HalfPattern p;
      p.rows.assign(down.rbegin(), down.rend());
      visit(p);
      return;
    }
    const auto& upper = down.back();
    const std::size_t len = half_row_len(row_1based);
    const bool odd_row = (row_1based % 2) == 1;
    std::vector<int> row(len, 0);
    std::function<void(std::size_t)> fill = [&](std::size_t idx) {
      if (idx == len) {
        down.push_back(row);
        descend(row_1based - 1);
        down.pop_back();
        return;
      }
      int high, low;
      if (upper.size() == len + 1) {
        // upper is longer by one: lambda_idx in [upper_{idx+1}, upper_idx]
        high = upper[idx];
        low = upper[idx + 1];
      } else {
        // same length: lambda_idx <= upper_idx, lambda_idx >= upper_{idx+1}
        high = upper[idx];
        low = (idx + 1 < upper.size()) ? upper[idx + 1]
                                       : std::numeric_limits<int>::min() / 4;
      }
      const bool starter = odd_row && (idx + 1 == len);
      if (symplectic || !starter) {
        low = std::max(low, 0);
      } else {
        // orthogonal odd starter: |v| <= last entry of the even row above
        // (rule (ii) upper half); the lower half is enforced one row further
        // down.  The top row is given, so upper.back() here is nonnegative.
        low = std::max(low, -upper.back());
      }
      if (!symplectic && !odd_row && idx + 1 == len && upper.size() == len + 1) {
        // even row directly below an odd row: its last entry must dominate the
        // magnitude of the starter above (rule (ii) lower half)
        low = std::max(low, std::abs(upper.back()));
      }
      for (int v = high; v >= low; --v) {
        row[idx] = v;
        fill(idx + 1);
      }
    };
    fill(0);
  };
  descend(total_rows - 1);
}

}  // namespace detail

/// w_sp of a (2n)-symplectic pattern for variables x_1..x_n.
template <class R>
R symplectic_weight(const HalfPattern& p, const std::vector<R>& x) {
  const std::size_t n = x.size();
  require(p.rows.size() == 2 * n, "symplectic_weight: pattern length != 2n");
  detail::validate_half_pattern(p);
  for (const auto& row : p.rows)
    for (int v : row) require(v >= 0, "symplectic pattern: entries must be nonnegative");
  R acc = R(1);
  for (std::size_t i = 1; i <= n; ++i) {
    const long e = detail::plain_sum(p.rows[2 * i - 1]) -
                   2 * detail::plain_sum(p.rows[2 * i - 2]) +
                   (i >= 2 ? detail::plain_sum(p.rows[2 * i - 3]) : 0);
    acc = acc * ring_int_pow(x[i - 1], e);
  }
  return acc;
}

/// w_o of a (2n-1)-orthogonal pattern for variables x_1..x_n.
template <class R>
R orthogonal_weight(const HalfPattern& p, const std::vector<R>& x) {
  const std::size_t n = x.size();
  require(p.rows.size() == 2 * n - 1, "orthogonal_weight: pattern length != 2n-1");
  detail::validate_half_pattern(p);
  R acc = R(1);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& odd = p.rows[2 * i - 2];  // row 2i-1
    const long bracket = detail::abs_sum(odd) -
                         (i >= 2 ? 2 * detail::abs_sum(p.rows[2 * i - 3]) : 0) +
                         (i >= 2 ? detail::abs_sum(p.rows[2 * i - 4]) : 0);
    const int s1 = detail::sgn01(odd.back());
    const int s2 = (i >= 2) ? detail::sgn01(p.rows[2 * i - 4].back()) : 1;
    acc = acc * ring_int_pow(x[i - 1], s1 * s2 * bracket);
  }
  return acc;
}

/// Symplectic Schur polynomial sp_nu^{(2n)}(x_1..x_n): sum of w_sp over all
/// (2n)-symplectic patterns with top row nu.  Desk scale (|nu| <= 12).
template <class R>
R symplectic_schur_eval(const Signature& nu, const std::vector<R>& x) {
  const std::size_t n = x.size();
  require(nu.length() == n, "symplectic_schur_eval: length of nu must equal #variables");
  if (!nu.entries.empty()) require(nu.entries.back() >= 0, "symplectic_schur_eval: nu must be nonnegative");
  R acc = R(0);
  detail::enumerate_half_patterns(nu.entries, 2 * n, /*symplectic=*/true,
                                  [&](const HalfPattern& p) { acc = acc + symplectic_weight(p, x); });
  return acc;
}

/// Orthogonal Schur polynomial o_nu^{(2n)}(x_1..x_n): sum of w_o over
/// OP_nu and OP_{nu^-} (once only if nu^- = nu).
template <class R>
R orthogonal_schur_eval(const Signature& nu, const std::vector<R>& x) {
  const std::size_t n = x.size();
  require(nu.length() == n, "orthogonal_schur_eval: length of nu must equal #variables");
  require(nu.entries.back() >= 0, "orthogonal_schur_eval: nu must be nonnegative");
  R acc = R(0);
  auto add = [&](const std::vector<int>& top) {
    detail::enumerate_half_patterns(top, 2 * n - 1, /*symplectic=*/false,
                                    [&](const HalfPattern& p) { acc = acc + orthogonal_weight(p, x); });
  };
  add(nu.entries);
  if (nu.entries.back() != 0) add(nu.minus().entries);
  return acc;
}

}  // namespace logcorr
