/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Exact rationals (GMP) and certified enclosures built from MPFR results
// rounded in a known direction. Every transcendental quantity used by the
// sieve is a pair of exact rationals [lo, hi] that provably contains it.

#ifndef DSIEVE_NUMERIC_HPP
#define DSIEVE_NUMERIC_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsieve/error.hpp"

namespace dsieve {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr int kDefaultPrecision = 128;
inline constexpr int kMaxPrecision = 8192;

// RAII owner of an mpfr_t.
class Real {
 public:
  explicit Real(int precision) { mpfr_init2(value_, precision); }
  Real(const Real& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  Real& operator=(const Real& other) {
    if (this != &other) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }
  ~Real() { mpfr_clear(value_); }

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
  }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

 private:
  mpfr_t value_;
};

inline Real real_from(const Rational& q, int precision, mpfr_rnd_t rnd) {
  Real r(precision);
  mpfr_set_q(r.get(), q.get_mpq_t(), rnd);
  return r;
}

// Closed interval [lo, hi] of exact rationals.
struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure point(const Rational& v) { return {v, v}; }

  bool is_point() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational midpoint() const { return (lo + hi) / 2; }
  double approx() const { return midpoint().get_d(); }
};

// Enclosure arithmetic for strictly positive operands only.
inline Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

inline Enclosure operator*(const Enclosure& a, const Rational& k) {
  if (k >= 0) return {a.lo * k, a.hi * k};
  return {a.hi * k, a.lo * k};
}

inline Enclosure reciprocal(const Enclosure& a) { return {1 / a.hi, 1 / a.lo}; }

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

// Natural logarithm of a positive enclosure.
inline Enclosure log_enclosure(const Enclosure& x, int precision) {
  Real lo = real_from(x.lo, precision, MPFR_RNDD);
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  Real hi = real_from(x.hi, precision, MPFR_RNDU);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

inline Enclosure log_enclosure(const Rational& x, int precision) {
  return log_enclosure(Enclosure::point(x), precision);
}

inline Enclosure exp_enclosure(const Enclosure& x, int precision) {
  Real lo = real_from(x.lo, precision, MPFR_RNDD);
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  Real hi = real_from(x.hi, precision, MPFR_RNDU);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer pow2(long e) {
  Integer r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  return r;
}

// 2^e as a rational, e of either sign.
inline Rational pow2q(long e) {
  if (e >= 0) return Rational(pow2(e));
  return Rational(Integer(1), pow2(-e));
}

// floor(log2(x)) for x > 0, exact.
inline long floor_log2(const Rational& x) {
  if (x <= 0) throw DomainError("numeric", "x", "floor_log2 of a non-positive value");
  const long nb = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  long e = nb - db;  // x lies in (2^(e-1), 2^(e+1))
  if (x < pow2q(e)) --e;
  return e;
}

inline std::int64_t to_i64(const Integer& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t()))
    throw CapacityError("numeric", "integer", "value " + z.get_str() + " exceeds 64 bits");
  return static_cast<std::int64_t>(mpz_get_si(z.get_mpz_t()));
}

inline std::uint64_t to_u64(const Integer& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 64)
    throw CapacityError("numeric", "integer", "value " + z.get_str() + " exceeds 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, z.get_mpz_t());
  return out;
}

inline Integer from_u64(std::uint64_t v) {
  Integer z;
  mpz_import(z.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return z;
}

inline Integer from_i64(std::int64_t v) {
  Integer z = from_u64(static_cast<std::uint64_t>(v < 0 ? -(v + 1) : v));
  if (v < 0) z = -z - 1;
  return z;
}

// Accepts "p/q", an integer, or a plain decimal such as "0.6" or "-1.25e-3";
// decimals convert exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw ConfigError("numeric", "rational", "empty value");
  Rational q;
  if (s.find_first_of(".eE") == std::string::npos) {
    if (q.set_str(s, 10) != 0) throw ConfigError("numeric", "rational", "cannot parse '" + s + "'");
    if (q.get_den() == 0) throw ConfigError("numeric", "rational", "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  // decimal: sign, digits, optional fraction, optional exponent
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    if (s[pos] == '.') {
      if (seen_point) throw ConfigError("numeric", "rational", "cannot parse '" + s + "'");
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits.push_back(s[pos]);
      if (seen_point) --scale;
    } else {
      throw ConfigError("numeric", "rational", "cannot parse '" + s + "'");
    }
  }
  if (digits.empty()) throw ConfigError("numeric", "rational", "cannot parse '" + s + "'");
  if (pos < s.size()) {
    try {
      std::size_t used = 0;
      scale += std::stol(s.substr(pos + 1), &used);
      if (used != s.size() - pos - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("numeric", "rational", "bad exponent in '" + s + "'");
    }
  }
  Integer mant(digits, 10);
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  q = scale >= 0 ? Rational(mant * ten_pow) : Rational(mant, ten_pow);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

inline std::string to_fraction_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Decimal rendering with `digits` significant digits, rounded in `rnd`.
inline std::string to_decimal_string(const Rational& q, int digits = 17, mpfr_rnd_t rnd = MPFR_RNDN) {
  const long bits = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2) +
                                      mpz_sizeinbase(q.get_den_mpz_t(), 2)) + 64;
  Real r = real_from(q, static_cast<int>(std::max<long>(bits, 128)), rnd);
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  const char rc = rnd == MPFR_RNDD ? 'D' : rnd == MPFR_RNDU ? 'U' : 'N';
  const std::string fmt = std::string("%.*R") + rc + "g";
  mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), digits, r.get());
  return buf.data();
}

}  // namespace dsieve

#endif  // DSIEVE_NUMERIC_HPP
