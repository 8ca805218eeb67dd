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

#ifndef DSIEVE_SEQUENCE_HPP
#define DSIEVE_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"

namespace dsieve {

enum class SequenceKind { polynomial, power };

// Number of indices checked eagerly for monotonicity and t >= 1.
inline constexpr Index kEagerScan = 1000;

/// Growth sequence t_n driving the sieve.
///
/// Polynomial kind: t_n = f(n) with exact rational coefficients, so every
/// value is a point rational. Power kind: t_n = n^gamma with rational gamma,
/// evaluated as a certified enclosure.
///
/// Immutable after construction; eval() is pure.
class GrowthSequence {
 public:
  /// Coefficients highest degree first. Throws DomainError if the degree is
  /// zero, the leading coefficient is not positive, n_min < 2, or the eager
  /// scan of [n_min, n_min + 1000] finds t < 1 or a non-increasing step.
  static GrowthSequence polynomial(std::vector<Rational> coefficients, Index n_min = 2) {
    while (!coefficients.empty() && coefficients.front() == 0) coefficients.erase(coefficients.begin());
    if (coefficients.size() < 2)
      throw DomainError("sequence", "coefficients", "polynomial degree must be at least 1");
    if (n_min < 2) throw DomainError("sequence", "n_min", "n_min must be at least 2");
    GrowthSequence s;
    s.kind_ = SequenceKind::polynomial;
    s.coefficients_ = std::move(coefficients);
    s.gamma_ = Rational(static_cast<long>(s.coefficients_.size() - 1));
    s.eps1_ = 1;
    s.n_min_ = n_min;
    if (s.coefficients_.front() < 0)
      throw DomainError("sequence", "coefficients", "leading coefficient must be positive");
    s.scan(n_min, n_min + kEagerScan);
    return s;
  }

  static GrowthSequence power(Rational gamma, Rational eps1, Index n_min = 2) {
    if (gamma <= 0) throw DomainError("sequence", "gamma", "gamma must be positive");
    if (eps1 <= 0) throw DomainError("sequence", "eps1", "eps1 must be positive");
    if (n_min < 2) throw DomainError("sequence", "n_min", "n_min must be at least 2");
    GrowthSequence s;
    s.kind_ = SequenceKind::power;
    s.gamma_ = std::move(gamma);
    s.eps1_ = std::move(eps1);
    s.n_min_ = n_min;
    return s;
  }

  SequenceKind kind() const noexcept { return kind_; }
  const std::vector<Rational>& coefficients() const noexcept { return coefficients_; }
  const Rational& gamma() const noexcept { return gamma_; }
  const Rational& eps1() const noexcept { return eps1_; }
  Index n_min() const noexcept { return n_min_; }
  int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

  /// t_n. Point rational for polynomials; for the power kind an enclosure of
  /// width at most 2^-precision.
  Enclosure eval(Index n, int precision = 64) const {
    if (n < n_min_)
      throw DomainError("sequence", "n",
                        "index " + std::to_string(n) + " below n_min=" + std::to_string(n_min_));
    return eval_unchecked(n, precision);
  }

  /// Exact value for polynomial sequences.
  Rational exact(Index n) const {
    if (kind_ != SequenceKind::polynomial)
      throw DomainError("sequence", "kind", "exact value requested for a power sequence");
    if (n < n_min_)
      throw DomainError("sequence", "n",
                        "index " + std::to_string(n) + " below n_min=" + std::to_string(n_min_));
    return horner(n);
  }

  /// Round-trips through parse_sequence_spec.
  std::string spec() const {
    std::string out;
    if (kind_ == SequenceKind::polynomial) {
      out = "poly:";
      for (std::size_t i = 0; i < coefficients_.size(); ++i) {
        if (i) out += ",";
        out += to_fraction_string(coefficients_[i]);
      }
    } else {
      out = "power:gamma=" + to_fraction_string(gamma_) + ",eps1=" + to_fraction_string(eps1_);
    }
    return out;
  }

 private:
  GrowthSequence() = default;

  Rational horner(Index n) const {
    const Rational x(from_i64(n));
    Rational acc = 0;
    for (const auto& c : coefficients_) acc = acc * x + c;
    return acc;
  }

  Enclosure eval_unchecked(Index n, int precision) const {
    if (kind_ == SequenceKind::polynomial) return Enclosure::point(horner(n));

    // n^(p/q) = (n^p)^(1/q)
    const unsigned long p = mpz_get_ui(gamma_.get_num_mpz_t());
    const unsigned long q = mpz_get_ui(gamma_.get_den_mpz_t());
    Integer base;
    mpz_pow_ui(base.get_mpz_t(), from_i64(n).get_mpz_t(), p);
    if (q == 1) return Enclosure::point(Rational(base));
    const long magnitude = static_cast<long>(mpz_sizeinbase(base.get_mpz_t(), 2) / q) + 2;
    int bits = precision + static_cast<int>(magnitude) + 16;
    const Rational target = pow2q(-precision);
    for (; bits <= 4 * kMaxPrecision; bits *= 2) {
      Real lo(bits), hi(bits);
      mpfr_set_z(lo.get(), base.get_mpz_t(), MPFR_RNDD);
      mpfr_rootn_ui(lo.get(), lo.get(), q, MPFR_RNDD);
      mpfr_set_z(hi.get(), base.get_mpz_t(), MPFR_RNDU);
      mpfr_rootn_ui(hi.get(), hi.get(), q, MPFR_RNDU);
      Enclosure e{lo.to_rational(), hi.to_rational()};
      if (e.width() <= target) return e;
    }
    throw PrecisionError("sequence", "precision", "cannot reach requested enclosure width");
  }

  void scan(Index lo, Index hi) const {
    Rational prev = horner(lo);
    if (prev < 1)
      throw DomainError("sequence", "n_min",
                        "t(" + std::to_string(lo) + ") = " + to_fraction_string(prev) + " < 1");
    for (Index n = lo + 1; n <= hi; ++n) {
      Rational cur = horner(n);
      if (cur <= prev)
        throw DomainError("sequence", "coefficients",
                          "not increasing at index " + std::to_string(n));
      prev = std::move(cur);
    }
  }

  SequenceKind kind_ = SequenceKind::polynomial;
  std::vector<Rational> coefficients_;
  Rational gamma_;
  Rational eps1_;
  Index n_min_ = 2;
};

inline GrowthSequence make_polynomial(std::vector<Rational> coefficients, Index n_min = 2) {
  return GrowthSequence::polynomial(std::move(coefficients), n_min);
}

/// `poly:c_d,...,c_1,c_0` or `power:gamma=<rational>,eps1=<rational>`.
inline GrowthSequence parse_sequence_spec(std::string_view text, Index n_min = 2) {
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = s.find(sep, start);
      parts.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  if (text.rfind("poly:", 0) == 0) {
    std::vector<Rational> coeffs;
    for (const auto& c : split(text.substr(5), ',')) coeffs.push_back(parse_rational(c));
    return GrowthSequence::polynomial(std::move(coeffs), n_min);
  }
  if (text.rfind("power:", 0) == 0) {
    Rational gamma, eps1;
    bool have_gamma = false, have_eps1 = false;
    for (const auto& kv : split(text.substr(6), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("sequence", "sequence", "expected key=value in '" + kv + "'");
      const auto key = kv.substr(0, eq);
      if (key == "gamma") {
        gamma = parse_rational(kv.substr(eq + 1));
        have_gamma = true;
      } else if (key == "eps1") {
        eps1 = parse_rational(kv.substr(eq + 1));
        have_eps1 = true;
      } else {
        throw ConfigError("sequence", "sequence", "unknown key '" + key + "'");
      }
    }
    if (!have_gamma || !have_eps1)
      throw ConfigError("sequence", "sequence", "power sequence needs gamma and eps1");
    return GrowthSequence::power(std::move(gamma), std::move(eps1), n_min);
  }
  throw ConfigError("sequence", "sequence", "expected 'poly:' or 'power:' prefix");
}

struct GrowthPair {
  Index n = 0;
  Index m = 0;
  double band = 0;  // (t_m / t_n) / (m / n)^gamma
};

struct GrowthReport {
  Index n_lo = 0;
  Index n_hi = 0;
  double o_constant = 0;  // max |t_{n+1}/t_n - 1 - gamma/n| * n^(1+eps1)
  Index o_constant_at = 0;
  double band_min = std::numeric_limits<double>::infinity();
  double band_max = 0;
  std::vector<GrowthPair> pairs;
};

/// Band value (t_m/t_n)/(m/n)^gamma for one pair.
inline double growth_band(const GrowthSequence& seq, Index n, Index m, int precision = 128) {
  const Rational ratio = seq.eval(m, precision).midpoint() / seq.eval(n, precision).midpoint();
  Real r = real_from(ratio, precision, MPFR_RNDN);
  Real base = real_from(Rational(from_i64(m), from_i64(n)), precision, MPFR_RNDN);
  Real expo = real_from(seq.gamma(), precision, MPFR_RNDN);
  mpfr_pow(base.get(), base.get(), expo.get(), MPFR_RNDN);
  mpfr_div(r.get(), r.get(), base.get(), MPFR_RNDN);
  return r.to_double();
}

/// Empirical O-constant of the growth condition over [n_lo, n_hi) and the
/// comparability band over the supplied pairs (or a geometric grid of pairs
/// when none are given).
inline GrowthReport validate_growth(const GrowthSequence& seq, Index n_lo, Index n_hi,
                                    std::vector<std::pair<Index, Index>> pairs = {},
                                    int precision = 128) {
  if (n_lo < seq.n_min() || n_lo >= n_hi)
    throw DomainError("sequence", "range", "need n_min <= n_lo < n_hi");
  GrowthReport report;
  report.n_lo = n_lo;
  report.n_hi = n_hi;

  Real expo = real_from(seq.eps1() + 1, precision, MPFR_RNDN);
  Rational prev = seq.eval(n_lo, precision).midpoint();
  for (Index n = n_lo; n < n_hi; ++n) {
    Rational next = seq.eval(n + 1, precision).midpoint();
    Rational dev = next / prev - 1 - seq.gamma() / Rational(from_i64(n));
    if (dev < 0) dev = -dev;
    Real d = real_from(dev, precision, MPFR_RNDN);
    Real scale = real_from(Rational(from_i64(n)), precision, MPFR_RNDN);
    mpfr_pow(scale.get(), scale.get(), expo.get(), MPFR_RNDN);
    mpfr_mul(d.get(), d.get(), scale.get(), MPFR_RNDN);
    const double v = d.to_double();
    if (v > report.o_constant) {
      report.o_constant = v;
      report.o_constant_at = n;
    }
    prev = std::move(next);
  }

  if (pairs.empty()) {
    std::vector<Index> grid;
    const double ratio = std::pow(static_cast<double>(n_hi) / static_cast<double>(n_lo), 1.0 / 7);
    double x = static_cast<double>(n_lo);
    for (int i = 0; i < 8; ++i, x *= ratio)
      grid.push_back(std::clamp(static_cast<Index>(std::llround(x)), n_lo, n_hi));
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size(); ++j) pairs.emplace_back(grid[i], grid[j]);
  }
  for (const auto& [n, m] : pairs) {
    const double band = growth_band(seq, n, m, precision);
    report.pairs.push_back({n, m, band});
    report.band_min = std::min(report.band_min, band);
    report.band_max = std::max(report.band_max, band);
  }
  return report;
}

}  // namespace dsieve

#endif  // DSIEVE_SEQUENCE_HPP
