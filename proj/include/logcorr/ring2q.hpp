#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "logcorr/bigint.hpp"
#include "logcorr/common.hpp"

namespace logcorr {

/// Exact arithmetic in Q(2^{1/q}), represented as Q[x]/(x^q - 2).
/// Elements are coefficient vectors a_0 + a_1 2^{1/q} + ... + a_{q-1} 2^{(q-1)/q}.
/// Closed under +, *, and multiplication by 2^{m/q} for any integer m, which is
/// all the branching moment recursions need when beta^2 is rational.
class Pow2Ext {
 public:
  explicit Pow2Ext(unsigned q = 1) : q_(q), a_(q, BigRat(0)) {
    require(q >= 1, "Pow2Ext: q >= 1");
  }

  static Pow2Ext zero(unsigned q) { return Pow2Ext(q); }
  static Pow2Ext one(unsigned q) {
    Pow2Ext e(q);
    e.a_[0] = 1;
    return e;
  }
  static Pow2Ext from_rational(unsigned q, const BigRat& v) {
    Pow2Ext e(q);
    e.a_[0] = v;
    return e;
  }
  /// 2^{num/q} exactly; num may be negative.
  static Pow2Ext pow2(unsigned q, long num) {
    long r = num % static_cast<long>(q);
    long d = num / static_cast<long>(q);
    if (r < 0) {
      r += q;
      d -= 1;
    }
    Pow2Ext e(q);
    e.a_[static_cast<std::size_t>(r)] = rat_pow2(d);
    return e;
  }

  unsigned q() const { return q_; }
  const BigRat& coeff(std::size_t i) const { return a_[i]; }

  bool is_rational() const {
    for (std::size_t i = 1; i < a_.size(); ++i)
      if (a_[i] != 0) return false;
    return true;
  }
  BigRat rational_part() const { return a_[0]; }

  double to_double() const {
    double s = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i)
      s += a_[i].get_d() * std::pow(2.0, static_cast<double>(i) / q_);
    return s;
  }

  Pow2Ext& operator+=(const Pow2Ext& o) {
    require(q_ == o.q_, "Pow2Ext: mixed rings");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  friend Pow2Ext operator+(Pow2Ext x, const Pow2Ext& y) { return x += y; }

  friend Pow2Ext operator*(const Pow2Ext& x, const Pow2Ext& y) {
    require(x.q_ == y.q_, "Pow2Ext: mixed rings");
    Pow2Ext r(x.q_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) {
      if (x.a_[i] == 0) continue;
      for (std::size_t j = 0; j < y.a_.size(); ++j) {
        if (y.a_[j] == 0) continue;
        std::size_t k = i + j;
        BigRat v = x.a_[i] * y.a_[j];
        if (k >= x.q_) {
          k -= x.q_;
          v *= 2;
        }
        r.a_[k] += v;
      }
    }
    return r;
  }
  Pow2Ext& operator*=(const Pow2Ext& o) { return *this = *this * o; }

  Pow2Ext operator*(const BigRat& s) const {
    Pow2Ext r = *this;
    for (auto& v : r.a_) v *= s;
    return r;
  }

  bool operator==(const Pow2Ext& o) const { return q_ == o.q_ && a_ == o.a_; }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (a_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += a_[i].get_str();
      if (i > 0) out += "*2^(" + std::to_string(i) + "/" + std::to_string(q_) + ")";
    }
    return out.empty() ? "0" : out;
  }

 private:
  unsigned q_;
  std::vector<BigRat> a_;
};

}  // namespace logcorr
