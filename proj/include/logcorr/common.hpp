#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace logcorr {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline double sq(double x) { return x * x; }

/// Reduce an angle to [0, 2*pi).
inline double mod_two_pi(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// Streaming mean/variance accumulator (Welford).
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_mean() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : kInf;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Central moments up to order three, for CLT summaries.
struct MomentSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double third_central = 0.0;
};

inline MomentSummary central_moments(const std::vector<double>& xs) {
  MomentSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0, t = 0.0;
  for (double x : xs) {
    const double d = x - m;
    v += d * d;
    t += d * d * d;
  }
  s.mean = m;
  s.variance = v / static_cast<double>(xs.size());
  s.third_central = t / static_cast<double>(xs.size());
  return s;
}

/// Monte Carlo point estimate with its standard error.
struct Estimate {
  double value = 0.0;
  double stderr_value = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y ~ intercept + slope*x.
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "linear_fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, "linear_fit: degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  if (x.size() > 2) f.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return f;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& cdf) {
  require(!xs.empty(), "ks_distance: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

/// Fixed-width histogram on [lo, hi); out-of-range values are dropped.
struct Histogram {
  double lo = 0.0;
  double bin_width = 1.0;
  std::vector<double> counts;

  Histogram(double lo_, double hi, double width) : lo(lo_), bin_width(width) {
    require(width > 0 && hi > lo_, "Histogram: bad range");
    counts.assign(static_cast<std::size_t>(std::ceil((hi - lo_) / width)), 0.0);
  }
  void add(double x, double weight = 1.0) {
    if (x < lo) return;
    const auto b = static_cast<std::size_t>((x - lo) / bin_width);
    if (b < counts.size()) counts[b] += weight;
  }
  double center(std::size_t b) const { return lo + (static_cast<double>(b) + 0.5) * bin_width; }
  std::size_t size() const { return counts.size(); }
};

}  // namespace logcorr
