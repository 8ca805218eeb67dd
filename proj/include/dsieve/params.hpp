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

// Parameter system of the sieve: the constant c, removal half-widths
// delta_n = 1/(c n ln n), depth gaps h(n), dyadic levels l_n and the ladder
// n_0 < n_1 < ... obtained by iterating h. All logarithms are natural.
//
// Directed use of enclosures: removal decisions take delta.hi (the removed
// set can only grow), the effective depth gap takes delta.lo (the gap
// condition is only claimed when it certainly holds).

#ifndef DSIEVE_PARAMS_HPP
#define DSIEVE_PARAMS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/sequence.hpp"

namespace dsieve {

enum class CMode { paper, custom };
enum class HMode { paper, effective };

inline const char* to_string(CMode m) { return m == CMode::paper ? "paper" : "custom"; }
inline const char* to_string(HMode m) { return m == HMode::paper ? "paper" : "effective"; }

/// Enclosure of 60 ln(2 + 1/gamma).
inline Enclosure c_of_gamma(const Rational& gamma, int precision = kDefaultPrecision) {
  if (gamma <= 0) throw DomainError("params", "gamma", "gamma must be positive");
  const Rational arg = 2 + 1 / gamma;
  return log_enclosure(arg, precision) * Rational(60);
}

inline double c_of_gamma_approx(double gamma) {
  if (!(gamma > 0)) throw DomainError("params", "gamma", "gamma must be positive");
  return 60 * std::log(2 + 1 / gamma);
}

struct SieveParams {
  Rational gamma;
  CMode c_mode = CMode::paper;
  Enclosure c;  // certified enclosure of c (a point in custom mode)
  HMode h_mode = HMode::effective;
  Index n_start = 2;
  Rational eps2{1, 100};
  Rational v{3, 5};
  Index index_cap = 1'000'000'000'000'000LL;
  int precision = kDefaultPrecision;

  static SieveParams paper(const Rational& gamma, int precision = kDefaultPrecision) {
    SieveParams p;
    p.gamma = gamma;
    p.precision = precision;
    p.c = c_of_gamma(gamma, precision);
    return p;
  }

  static SieveParams custom(const Rational& gamma, const Rational& c_value,
                            int precision = kDefaultPrecision) {
    if (c_value <= 0) throw DomainError("params", "c_value", "c must be positive");
    SieveParams p = paper(gamma, precision);
    p.c_mode = CMode::custom;
    p.c = Enclosure::point(c_value);
    return p;
  }
};

inline Enclosure log_of_index(Index n, int precision) {
  return log_enclosure(Rational(from_i64(n)), precision);
}

/// n ln n, certified.
inline Enclosure n_log_n(Index n, int precision) {
  return log_of_index(n, precision) * Rational(from_i64(n));
}

/// Enclosure of delta_n = 1/(c n ln n); relative width about 2^-(precision-3).
inline Enclosure delta(const SieveParams& p, Index n) {
  if (n < 2) throw DomainError("params", "n", "delta needs n >= 2, got " + std::to_string(n));
  return reciprocal(p.c * n_log_n(n, p.precision));
}

/// ceil(n^(1+1/gamma) (ln n)^(2/gamma)), forced to at least n + 1.
inline Index h_paper(const SieveParams& p, Index n) {
  if (n < 2) throw DomainError("params", "n", "h needs n >= 2, got " + std::to_string(n));
  const Rational a = 1 + 1 / p.gamma;
  const Rational b = 2 / p.gamma;
  for (int prec = p.precision; prec <= kMaxPrecision; prec *= 2) {
    const Enclosure ln = log_of_index(n, prec);
    const Enclosure lnln = log_enclosure(ln, prec);  // may be negative at n = 2
    const Enclosure expo = ln * a + lnln * b;
    const Enclosure h = exp_enclosure(expo, prec);
    const Integer lo = ceil_of(h.lo), hi = ceil_of(h.hi);
    if (lo == hi) return std::max(to_i64(lo), n + 1);
  }
  throw PrecisionError("params", "n", "cannot resolve ceil(h(" + std::to_string(n) + "))");
}

/// True when t_m / t_n >= 1/delta_n certainly holds.
inline bool depth_gap_holds(const SieveParams& p, const GrowthSequence& seq, Index n, Index m) {
  const Enclosure d = delta(p, n);
  return seq.eval(m, p.precision).lo * d.lo >= seq.eval(n, p.precision).hi;
}

/// Smallest m > n with t_m / t_n >= 1/delta_n (exponential then binary search).
inline Index h_effective(const SieveParams& p, const GrowthSequence& seq, Index n) {
  if (n < 2 || n < seq.n_min())
    throw DomainError("params", "n", "h_effective needs n >= max(2, n_min), got " + std::to_string(n));
  const Enclosure d = delta(p, n);
  const Rational tn = seq.eval(n, p.precision).hi;
  auto ok = [&](Index m) { return seq.eval(m, p.precision).lo * d.lo >= tn; };
  Index bad = n;
  Index step = 1;
  Index good = n + 1;
  while (!ok(good)) {
    bad = good;
    step *= 2;
    if (good > p.index_cap - step)
      throw CapacityError("params", "index_cap",
                          "h_effective(" + std::to_string(n) + ") exceeds index cap " +
                              std::to_string(p.index_cap));
    good = n + step;
  }
  while (good - bad > 1) {
    const Index mid = bad + (good - bad) / 2;
    (ok(mid) ? good : bad) = mid;
  }
  return good;
}

inline Index h_of(const SieveParams& p, const GrowthSequence& seq, Index n) {
  return p.h_mode == HMode::paper ? h_paper(p, n) : h_effective(p, seq, n);
}

/// Certified enclosure of 2 t_n / delta_n = 2 t_n c n ln n.
inline Enclosure level_argument(const SieveParams& p, const GrowthSequence& seq, Index n, int precision) {
  const Enclosure t = seq.eval(n, precision);
  const Enclosure c = p.c_mode == CMode::paper ? c_of_gamma(p.gamma, precision) : p.c;
  return t * c * n_log_n(n, precision) * Rational(2);
}

/// l_n = floor(log2(2 t_n / delta_n)); precision grows until the enclosure
/// no longer straddles a power of two.
inline int dyadic_level(const SieveParams& p, const GrowthSequence& seq, Index n) {
  if (n < 2) throw DomainError("params", "n", "dyadic_level needs n >= 2, got " + std::to_string(n));
  for (int prec = p.precision; prec <= kMaxPrecision; prec *= 2) {
    const Enclosure x = level_argument(p, seq, n, prec);
    const long lo = floor_log2(x.lo), hi = floor_log2(x.hi);
    if (lo == hi) return static_cast<int>(lo);
  }
  throw PrecisionError("params", "n", "l_n straddles a power of two at n=" + std::to_string(n));
}

struct Ladder {
  std::vector<Index> entries;
  HMode mode = HMode::effective;

  std::size_t size() const noexcept { return entries.size(); }
  Index operator[](std::size_t k) const { return entries[k]; }
};

inline Ladder build_ladder(const SieveParams& p, const GrowthSequence& seq, Index n0, int depth) {
  if (n0 < 2 || n0 < seq.n_min())
    throw DomainError("params", "n0", "ladder start must be >= max(2, n_min)");
  if (depth < 0) throw DomainError("params", "ladder_depth", "depth must be non-negative");
  Ladder ladder;
  ladder.mode = p.h_mode;
  ladder.entries.push_back(n0);
  for (int k = 1; k <= depth; ++k) {
    Index next;
    try {
      next = h_of(p, seq, ladder.entries.back());
    } catch (const CapacityError&) {
      throw CapacityError("params", "index_cap", "ladder entry k=" + std::to_string(k) + " exceeds index cap");
    }
    if (next > p.index_cap)
      throw CapacityError("params", "index_cap", "ladder entry k=" + std::to_string(k) + " = " +
                                                     std::to_string(next) + " exceeds index cap");
    ladder.entries.push_back(next);
  }
  return ladder;
}

/// Sign of base^exponent - value, for positive integers and a positive
/// rational exponent. Exact through integer powers when the operands stay
/// small, certified enclosures otherwise.
inline int compare_power(Index base, const Rational& exponent, Index value) {
  const unsigned long p = mpz_get_ui(exponent.get_num_mpz_t());
  const unsigned long q = mpz_get_ui(exponent.get_den_mpz_t());
  const double bits = static_cast<double>(p) * std::log2(static_cast<double>(base)) +
                      static_cast<double>(q) * std::log2(static_cast<double>(value));
  if (mpz_fits_ulong_p(exponent.get_num_mpz_t()) && mpz_fits_ulong_p(exponent.get_den_mpz_t()) &&
      bits < 4'000'000) {
    Integer lhs, rhs;
    mpz_pow_ui(lhs.get_mpz_t(), from_i64(base).get_mpz_t(), p);
    mpz_pow_ui(rhs.get_mpz_t(), from_i64(value).get_mpz_t(), q);
    return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
  }
  for (int prec = 128; prec <= kMaxPrecision; prec *= 2) {
    const Enclosure lhs = log_of_index(base, prec) * exponent;
    const Enclosure rhs = log_of_index(value, prec);
    if (lhs.hi < rhs.lo) return -1;
    if (lhs.lo > rhs.hi) return 1;
  }
  throw PrecisionError("params", "exponent", "cannot decide power comparison");
}

struct LadderStep {
  Index n_prev = 0;
  Index n_next = 0;
  bool growth_lower = false;  // n_prev^(1+1/gamma) <= n_next
  bool growth_upper = false;  // n_next <= n_prev^(1+1/gamma+eps2)
  bool depth_gap = false;     // t_next / t_prev >= 1/delta_prev
  double log_ratio = 0;       // ln n_next / ln n_prev
};

struct LadderReport {
  std::vector<LadderStep> steps;
  bool growth_pass = true;
  bool depth_gap_pass = true;
  // The iterated-growth bound n_0^((1+1/g)^k) <= n_k <= n_0^((1+1/g+eps2)^k)
  // follows from the per-step growth bounds and is not checked separately.
  bool iterated_growth_derived = true;
};

inline LadderReport check_ladder(const SieveParams& p, const GrowthSequence& seq, const Ladder& ladder) {
  LadderReport r;
  const Rational lower_exp = 1 + 1 / p.gamma;
  const Rational upper_exp = lower_exp + p.eps2;
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    LadderStep s;
    s.n_prev = ladder[k - 1];
    s.n_next = ladder[k];
    s.growth_lower = compare_power(s.n_prev, lower_exp, s.n_next) <= 0;
    s.growth_upper = compare_power(s.n_prev, upper_exp, s.n_next) >= 0;
    s.depth_gap = depth_gap_holds(p, seq, s.n_prev, s.n_next);
    s.log_ratio = std::log(static_cast<double>(s.n_next)) / std::log(static_cast<double>(s.n_prev));
    r.growth_pass = r.growth_pass && s.growth_lower && s.growth_upper;
    r.depth_gap_pass = r.depth_gap_pass && s.depth_gap;
    r.steps.push_back(s);
  }
  r.iterated_growth_derived = r.growth_pass;
  return r;
}

/// omega = ((1 + 1/gamma + eps2) v - 1)(gamma + 1), exact.
inline Rational omega(const Rational& gamma, const Rational& v, const Rational& eps2) {
  return ((1 + 1 / gamma + eps2) * v - 1) * (gamma + 1);
}

enum class VPosition { below, boundary, above };

inline VPosition v_position(const Rational& gamma, const Rational& v) {
  const Rational critical = gamma / (gamma + 1);
  return v < critical ? VPosition::below : v == critical ? VPosition::boundary : VPosition::above;
}

inline const char* to_string(VPosition v) {
  return v == VPosition::below ? "below" : v == VPosition::boundary ? "boundary" : "above";
}

struct SeriesTerm {
  int k = 0;
  double log_term = 0;  // natural log of the term
};

struct SeriesReport {
  Rational omega;
  VPosition v_position = VPosition::below;
  std::vector<SeriesTerm> terms;
  std::string verdict;  // convergent-trend | not-convergent | inconclusive
};

/// Terms 3^k t_{n_k}^v / t_{n_{k-1}} * delta_{n_{k-1}} / delta_{n_k}^v for
/// k = 2..K, evaluated in the log domain.
inline SeriesReport series_report(const SieveParams& p, const GrowthSequence& seq, const Ladder& ladder,
                                  const Rational& v) {
  if (v <= 0 || v >= 1) throw DomainError("params", "v", "v must lie in (0, 1)");
  if (ladder.size() < 3) throw DomainError("params", "ladder", "series needs at least 3 ladder entries");
  SeriesReport r;
  r.omega = omega(p.gamma, v, p.eps2);
  r.v_position = v_position(p.gamma, v);
  const int prec = p.precision;
  auto mid_log = [&](const Enclosure& e) { return log_enclosure(e, prec).approx(); };
  const double vd = v.get_d();
  for (std::size_t k = 2; k < ladder.size(); ++k) {
    const double lt = static_cast<double>(k) * std::log(3.0) + vd * mid_log(seq.eval(ladder[k], prec)) -
                      mid_log(seq.eval(ladder[k - 1], prec)) + mid_log(delta(p, ladder[k - 1])) -
                      vd * mid_log(delta(p, ladder[k]));
    r.terms.push_back({static_cast<int>(k), lt});
  }
  if (r.terms.size() < 2) {
    r.verdict = "inconclusive";
  } else {
    const bool decreasing = r.terms.back().log_term < r.terms[r.terms.size() - 2].log_term;
    r.verdict = decreasing && r.omega < 0 ? "convergent-trend" : "not-convergent";
  }
  return r;
}

}  // namespace dsieve

#endif  // DSIEVE_PARAMS_HPP
