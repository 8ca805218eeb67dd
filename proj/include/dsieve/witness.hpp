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

// Witness extraction and certification. certify() recomputes everything
// from alpha and the sequence alone; it never looks at survivor data.

#ifndef DSIEVE_WITNESS_HPP
#define DSIEVE_WITNESS_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "dsieve/dyadic.hpp"
#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/parallel.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {

/// numerator / 2^level, in [0, 1].
struct DyadicRational {
  Integer numerator;
  int level = 0;

  static DyadicRational make(Integer numerator, int level) {
    if (level < 0) throw DomainError("witness", "level", "negative level");
    if (numerator < 0 || numerator > pow2(level))
      throw DomainError("witness", "numerator", "alpha outside [0, 1]");
    return {std::move(numerator), level};
  }

  Rational value() const { return Rational(numerator) * pow2q(-level); }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.value() == b.value();
  }
};

/// ||x||, the distance to the nearest integer.
inline Rational nearest_integer_distance(const Rational& x) {
  const Rational frac = x - Rational(floor_of(x));
  const Rational other = 1 - frac;
  return frac < other ? frac : other;
}

/// ||alpha t||, exact for a point t.
inline Rational fractional_distance(const Rational& alpha, const Rational& t) {
  return nearest_integer_distance(alpha * t);
}

/// Enclosure of ||alpha t|| over every t in the enclosure (alpha >= 0).
inline Enclosure fractional_distance(const Rational& alpha, const Enclosure& t) {
  if (t.is_point()) return Enclosure::point(fractional_distance(alpha, t.lo));
  const Rational x0 = alpha * t.lo, x1 = alpha * t.hi;
  const Rational d0 = nearest_integer_distance(x0), d1 = nearest_integer_distance(x1);
  Enclosure out{std::min(d0, d1), std::max(d0, d1)};
  if (floor_of(x0) != floor_of(x1) || x0 == Rational(floor_of(x0))) out.lo = 0;
  const Rational half(1, 2);
  if (floor_of(x0 - half) != floor_of(x1 - half)) out.hi = half;
  return out;
}

struct Witness {
  DyadicRational alpha;
  std::vector<DyadicCell> chain;  // nested windows, then the final survivor cell
};

/// Midpoint of a survivor cell chosen by strategy, one level below it.
inline Witness extract_witness(const SurvivorState& state, Strategy strategy, std::mt19937_64& rng) {
  if (state.empty()) throw DomainError("witness", "survivors", "no survivors to extract a witness from");
  const DyadicCell cell = select_cell(state.runs(), state.level(), strategy, rng);
  Witness w;
  w.alpha = DyadicRational::make(from_u64(cell.index) * 2 + 1, cell.level + 1);
  w.chain = state.zoom_path();
  w.chain.push_back(cell);
  return w;
}

inline Witness extract_witness(const SurvivorState& state, Strategy strategy = Strategy::leftmost,
                               std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  return extract_witness(state, strategy, rng);
}

struct WitnessCertificate {
  DyadicRational alpha;
  Index n_from = 0;
  Index n_to = 0;
  std::vector<Rational> scores;  // lower bounds on n ln n ||alpha t_n||, n = n_from..n_to
  Rational min_score;
  Index argmin_n = 0;
  Enclosure target;  // 1/c
  bool verdict = false;

  const Rational& score(Index n) const { return scores.at(static_cast<std::size_t>(n - n_from)); }
};

/// Lower bound on n ln n ||alpha t_n|| for every n in [n_from, n_to]; the
/// verdict holds iff every lower bound exceeds the upper end of 1/c.
inline WitnessCertificate certify(const DyadicRational& alpha, const GrowthSequence& seq, const SieveParams& p,
                                  Index n_from, Index n_to, unsigned threads = 1) {
  if (n_from < 2 || n_from < seq.n_min())
    throw DomainError("witness", "n_from", "certify needs n_from >= max(2, n_min)");
  if (n_to < n_from) throw DomainError("witness", "n_to", "empty certification range");
  WitnessCertificate cert;
  cert.alpha = alpha;
  cert.n_from = n_from;
  cert.n_to = n_to;
  cert.target = reciprocal(p.c);
  const Rational a = alpha.value();
  cert.scores.resize(static_cast<std::size_t>(n_to - n_from + 1));
  parallel_for(cert.scores.size(), threads, [&](std::size_t i) {
    const Index n = n_from + static_cast<Index>(i);
    const Enclosure dist = fractional_distance(a, seq.eval(n, p.precision));
    cert.scores[i] = dist.lo * n_log_n(n, p.precision).lo;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < cert.scores.size(); ++i)
    if (cert.scores[i] < cert.scores[best]) best = i;
  cert.min_score = cert.scores[best];
  cert.argmin_n = n_from + static_cast<Index>(best);
  cert.verdict = cert.min_score > cert.target.hi;
  return cert;
}

}  // namespace dsieve

#endif  // DSIEVE_WITNESS_HPP
