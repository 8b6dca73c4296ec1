#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "logcorr/common.hpp"

namespace logcorr {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt big_factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt big_binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt big_pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// 2^e for a (possibly negative) integer exponent, as an exact rational.
inline BigRat rat_pow2(long e) {
  BigRat r;
  if (e >= 0) {
    r = BigRat(big_pow(BigInt(2), static_cast<unsigned long>(e)));
  } else {
    r = BigRat(BigInt(1), big_pow(BigInt(2), static_cast<unsigned long>(-e)));
  }
  r.canonicalize();
  return r;
}

inline BigRat rat_pow(const BigRat& base, long e) {
  if (e == 0) return BigRat(1);
  BigRat b = base;
  if (e < 0) {
    require(b != 0, "rat_pow: zero to negative power");
    b = BigRat(1) / b;
    e = -e;
  }
  BigRat acc(1);
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  acc.canonicalize();
  return acc;
}

inline std::string to_string(const BigRat& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline double to_double(const BigRat& q) { return q.get_d(); }
inline double to_double(const BigInt& z) { return z.get_d(); }

/// Parse "p/q" or "p" into an exact rational (decimal strings like "0.5" are
/// accepted too).
inline BigRat parse_rational(const std::string& s) {
  require(!s.empty(), "parse_rational: empty string");
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    BigInt num(digits);
    BigInt den = big_pow(BigInt(10), frac_len);
    BigRat r(num, den);
    r.canonicalize();
    return r;
  }
  BigRat r(s);
  r.canonicalize();
  require(r.get_den() > 0, "parse_rational: bad denominator");
  return r;
}

}  // namespace logcorr
