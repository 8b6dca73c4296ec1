#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "logcorr/bigint.hpp"
#include "logcorr/common.hpp"

namespace logcorr {

/// Dense polynomial with exact rational coefficients, ascending degree.
class RatPoly {
 public:
  RatPoly() : c_{BigRat(0)} {}
  explicit RatPoly(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(BigRat(0));
    trim();
  }

  static RatPoly constant(const BigRat& v) { return RatPoly({v}); }

  const std::vector<BigRat>& coeffs() const { return c_; }
  std::size_t degree() const { return c_.size() - 1; }

  BigRat eval(const BigRat& x) const {
    BigRat acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    acc.canonicalize();
    return acc;
  }
  double eval_double(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + to_double(c_[i]);
    return acc;
  }

  bool operator==(const RatPoly& o) const { return c_ == o.c_; }

  RatPoly& operator+=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), BigRat(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  RatPoly operator*(const RatPoly& o) const {
    std::vector<BigRat> r(c_.size() + o.c_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return RatPoly(std::move(r));
  }
  RatPoly operator*(const BigRat& s) const {
    std::vector<BigRat> r = c_;
    for (auto& v : r) v *= s;
    return RatPoly(std::move(r));
  }

  std::string to_string(const std::string& var = "N") const {
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0 && c_.size() > 1) continue;
      if (!out.empty()) out += " + ";
      out += logcorr::to_string(c_[i]);
      if (i >= 1) out += "*" + var;
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  /// Exact Lagrange interpolation through distinct rational nodes.
  static RatPoly interpolate(const std::vector<BigRat>& xs, const std::vector<BigRat>& ys) {
    require(xs.size() == ys.size() && !xs.empty(), "interpolate: size mismatch");
    RatPoly acc({BigRat(0)});
    for (std::size_t i = 0; i < xs.size(); ++i) {
      RatPoly basis({BigRat(1)});
      BigRat denom(1);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (j == i) continue;
        basis = basis * RatPoly({-xs[j], BigRat(1)});
        denom *= xs[i] - xs[j];
      }
      require(denom != 0, "interpolate: repeated node");
      acc += basis * (ys[i] / denom);
    }
    return acc;
  }

 private:
  void trim() {
    while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
    for (auto& v : c_) v.canonicalize();
  }
  std::vector<BigRat> c_;
};

}  // namespace logcorr
