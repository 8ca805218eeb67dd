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

// Fractional-part sieve. Stage n forbids the closed segments
// [a/t_n - delta_n/t_n, a/t_n + delta_n/t_n], a = 0..ceil(t_n), clipped to
// [0, 1], and removes the smallest set of closed level-l_n cells covering
// them, i.e. every cell whose interior meets a segment.
// The survivors after stages n_from..n are kept inside a dyadic window.

#ifndef DSIEVE_SIEVE_HPP
#define DSIEVE_SIEVE_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsieve/dyadic.hpp"
#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"

namespace dsieve {

/// Everything the sieve needs about one stage.
struct StageGeometry {
  Index n = 0;
  Enclosure t;
  Enclosure delta;
  int level = 0;
};

inline StageGeometry stage_geometry(const GrowthSequence& seq, const SieveParams& p, Index n) {
  return {n, seq.eval(n, p.precision), delta(p, n), dyadic_level(p, seq, n)};
}

/// Level-l_n cells inside `window` whose interior meets a forbidden segment,
/// merged into runs. Cost is O(t_n |window| + 1).
inline std::vector<IndexRun> cells_hitting_E(const StageGeometry& g, const DyadicCell& window) {
  const int L = g.level;
  require_level(L, "sieve");
  if (L < window.level)
    throw DomainError("sieve", "window", "window level " + std::to_string(window.level) +
                                             " finer than l_n=" + std::to_string(L));
  const IndexRun span = window.span_at(L);
  const Integer first(from_u64(span.lo)), last(from_u64(span.hi - 1));

  const Integer top = ceil_of(g.t.hi);
  Integer a_lo = floor_of(g.t.lo * window.lower()) - 1;
  Integer a_hi = ceil_of(g.t.hi * window.upper()) + 1;
  if (a_lo < 0) a_lo = 0;
  if (a_hi > top) a_hi = top;

  std::vector<IndexRun> out;
  auto emit = [&](Integer b_lo, Integer b_hi) {
    if (b_lo < first) b_lo = first;
    if (b_hi > last) b_hi = last;
    if (b_lo > b_hi) return;
    const CellIndex lo = to_u64(b_lo), hi = to_u64(b_hi) + 1;
    if (!out.empty() && lo <= out.back().hi)
      out.back().hi = std::max(out.back().hi, hi);
    else
      out.push_back({lo, hi});
  };

  if (a_lo > a_hi) return out;

  if (g.t.is_point()) {
    // b_lo = floor(2^L (a - d)/t), b_hi = ceil(2^L (a + d)/t) - 1 with
    // t = P/Q and d = R/S, stepped incrementally in a.
    const Integer& P = g.t.lo.get_num();
    const Integer& Q = g.t.lo.get_den();
    const Integer& R = g.delta.hi.get_num();
    const Integer& S = g.delta.hi.get_den();
    const Integer K = Q * pow2(L);
    const Integer D = S * P;
    const Integer step = S * K;
    Integer left = (a_lo * S - R) * K;
    Integer right = (a_lo * S + R) * K;
    Integer b_lo, b_hi;
    for (Integer a = a_lo; a <= a_hi; ++a) {
      mpz_fdiv_q(b_lo.get_mpz_t(), left.get_mpz_t(), D.get_mpz_t());
      mpz_cdiv_q(b_hi.get_mpz_t(), right.get_mpz_t(), D.get_mpz_t());
      emit(b_lo, b_hi - 1);
      left += step;
      right += step;
    }
    return out;
  }

  // Enclosure t: cover every segment compatible with t in [t.lo, t.hi].
  const Rational scale = pow2q(L);
  const Rational radius = g.delta.hi / g.t.lo;
  for (Integer a = a_lo; a <= a_hi; ++a) {
    const Rational aq(a);
    const Rational x = (aq / g.t.hi - radius) * scale;
    const Rational y = (aq / g.t.lo + radius) * scale;
    emit(floor_of(x), ceil_of(y) - 1);
  }
  return out;
}

inline std::vector<IndexRun> cells_hitting_E(const GrowthSequence& seq, const SieveParams& p, Index n,
                                             const DyadicCell& window) {
  return cells_hitting_E(stage_geometry(seq, p, n), window);
}

struct StageStats {
  Index n = 0;
  int level = 0;
  double delta = 0;  // upper end of the delta_n enclosure
  CellIndex cells_removed = 0;
  Rational survivor_measure;
};

struct SieveOptions {
  std::size_t max_runs = 20'000'000;  // memory budget, in survivor runs
  int full_level_cap = 25;            // full [0,1) allowed only up to this level
  int window_level = 20;              // auto window width 2^-window_level
  int max_attempts = 16;              // auto window retries after an empty window
};

enum class Strategy { leftmost, max_run, seeded_random };

inline const char* to_string(Strategy s) {
  return s == Strategy::leftmost ? "leftmost" : s == Strategy::max_run ? "max-run" : "seeded-random";
}

inline Strategy parse_strategy(const std::string& s) {
  if (s == "leftmost") return Strategy::leftmost;
  if (s == "max-run") return Strategy::max_run;
  if (s == "seeded-random") return Strategy::seeded_random;
  throw ConfigError("sieve", "strategy", "unknown strategy '" + s + "'");
}

/// Survivors B_n restricted to a window, plus per-stage statistics and the
/// chain of windows chosen by zoom().
class SurvivorState {
 public:
  SurvivorState() = default;

  /// Whole window alive, nothing processed after `processed_up_to`.
  static SurvivorState fresh(const DyadicCell& window, Index processed_up_to, int level,
                             int storage_level = -1) {
    SurvivorState s;
    s.window_ = window;
    s.processed_ = processed_up_to;
    s.level_ = level;
    s.runs_ = RunSet(window, std::max({storage_level, level, window.level}));
    return s;
  }

  const DyadicCell& window() const noexcept { return window_; }
  Index processed_up_to() const noexcept { return processed_; }
  int level() const noexcept { return level_; }
  const std::vector<StageStats>& stats() const noexcept { return stats_; }
  const std::vector<DyadicCell>& zoom_path() const noexcept { return zoom_path_; }
  std::size_t run_count() const noexcept { return runs_.run_count(); }
  bool empty() const noexcept { return runs_.empty(); }

  DyadicSet survivors() const { return runs_.snapshot(level_); }
  CellIndex survivor_count() const { return runs_.count() >> (runs_.storage_level() - level_); }
  Rational survivor_measure() const {
    return Rational(from_u64(runs_.count())) * pow2q(-runs_.storage_level());
  }
  const RunSet& runs() const noexcept { return runs_; }

  /// Pre-sizes the run storage so later stages never rescale.
  void reserve_storage_level(int level) { runs_.rescale(level); }

 private:
  friend SurvivorState subtract_step(SurvivorState, const GrowthSequence&, const SieveParams&, Index,
                                     const SieveOptions&);
  friend SurvivorState zoom(const SurvivorState&, Strategy, std::mt19937_64&, int);
  friend SurvivorState exclude_window(SurvivorState, const DyadicCell&);

  DyadicCell window_;
  Index processed_ = 0;
  int level_ = 0;
  RunSet runs_;
  std::vector<StageStats> stats_;
  std::vector<DyadicCell> zoom_path_;
};

/// Processes stage n = processed_up_to + 1.
inline SurvivorState subtract_step(SurvivorState state, const GrowthSequence& seq, const SieveParams& p,
                                   Index n, const SieveOptions& opts = {}) {
  if (n != state.processed_ + 1)
    throw DomainError("sieve", "n", "expected stage " + std::to_string(state.processed_ + 1) + ", got " +
                                        std::to_string(n));
  const StageGeometry g = stage_geometry(seq, p, n);
  if (g.level < state.level_)
    throw DomainError("sieve", "n", "l_n decreased at n=" + std::to_string(n));
  // lazy monotonicity re-check beyond the eagerly scanned prefix
  if (n - 1 >= seq.n_min() + kEagerScan && seq.eval(n - 1, p.precision).hi >= g.t.lo)
    throw DomainError("sequence", "n", "t_n not increasing at n=" + std::to_string(n));
  state.runs_.rescale(g.level);

  CellIndex removed = 0;
  for (const auto& run : cells_hitting_E(g, state.window_)) removed += state.runs_.erase_at(g.level, run);
  state.level_ = g.level;
  state.processed_ = n;
  state.stats_.push_back({n, g.level, g.delta.hi.get_d(), removed, state.survivor_measure()});
  if (state.runs_.empty()) throw EmptySurvivorError(n);
  if (state.runs_.run_count() > opts.max_runs)
    throw CapacityError("sieve", "memory_budget",
                        std::to_string(state.runs_.run_count()) + " runs at n=" + std::to_string(n) +
                            "; use a narrower window");
  return state;
}

/// Continues an existing state through stage n_to.
inline SurvivorState sieve_continue(SurvivorState state, const GrowthSequence& seq, const SieveParams& p,
                                    Index n_to, const SieveOptions& opts = {}) {
  if (n_to <= state.processed_up_to()) return state;
  const int top = dyadic_level(p, seq, n_to);
  require_level(top, "sieve");
  state.reserve_storage_level(top);
  for (Index n = state.processed_up_to() + 1; n <= n_to; ++n)
    state = subtract_step(std::move(state), seq, p, n, opts);
  return state;
}

/// B_{n_to} relative to stages n_from..n_to, inside `window`.
inline SurvivorState sieve_range(const GrowthSequence& seq, const SieveParams& p, const DyadicCell& window,
                                 Index n_from, Index n_to, const SieveOptions& opts = {}) {
  if (n_from < 2 || n_from < seq.n_min())
    throw DomainError("sieve", "n_from", "n_from must be >= max(2, n_min)");
  if (n_to < n_from) return SurvivorState::fresh(window, n_from - 1, window.level);
  const int first = dyadic_level(p, seq, n_from);
  if (window.level > first)
    throw DomainError("sieve", "window", "window level exceeds l_{n_from}=" + std::to_string(first));
  const int top = dyadic_level(p, seq, n_to);
  require_level(top, "sieve");
  SurvivorState state = SurvivorState::fresh(window, n_from - 1, window.level, top);
  for (Index n = n_from; n <= n_to; ++n) state = subtract_step(std::move(state), seq, p, n, opts);
  return state;
}

/// One survivor cell at the state's current level, chosen by strategy.
inline DyadicCell select_cell(const RunSet& runs, int level, Strategy strategy, std::mt19937_64& rng) {
  if (runs.empty()) throw DomainError("sieve", "survivors", "cannot select from an empty survivor set");
  const int shift = runs.storage_level() - level;
  CellIndex chosen = 0;
  switch (strategy) {
    case Strategy::leftmost: {
      runs.for_each_run([&, done = false](const IndexRun& r) mutable {
        if (!done) chosen = r.lo >> shift, done = true;
      });
      break;
    }
    case Strategy::max_run: {
      CellIndex best = 0;
      runs.for_each_run([&](const IndexRun& r) {
        const CellIndex len = (r.hi - r.lo) >> shift;
        if (len > best) best = len, chosen = (r.lo >> shift) + len / 2;
      });
      break;
    }
    case Strategy::seeded_random: {
      const CellIndex total = runs.count() >> shift;
      CellIndex k = std::uniform_int_distribution<CellIndex>(0, total - 1)(rng);
      bool done = false;
      runs.for_each_run([&](const IndexRun& r) {
        if (done) return;
        const CellIndex len = (r.hi - r.lo) >> shift;
        if (k < len) chosen = (r.lo >> shift) + k, done = true;
        else k -= len;
      });
      break;
    }
  }
  return {level, chosen};
}

/// Narrows the window to one survivor cell (or its ancestor at
/// `target_level`, when given) and keeps only the survivors inside it.
inline SurvivorState zoom(const SurvivorState& state, Strategy strategy, std::mt19937_64& rng,
                          int target_level = -1) {
  if (state.empty()) throw DomainError("sieve", "survivors", "zoom on an empty survivor set");
  const DyadicCell cell = select_cell(state.runs_, state.level_, strategy, rng);
  const int target = target_level < 0 ? state.level_ : target_level;
  if (target < state.window_.level || target > state.level_)
    throw DomainError("sieve", "window_level", "zoom level " + std::to_string(target) + " outside [" +
                                                   std::to_string(state.window_.level) + ", " +
                                                   std::to_string(state.level_) + "]");
  SurvivorState out;
  out.window_ = cell.ancestor(target);
  out.processed_ = state.processed_;
  out.level_ = state.level_;
  out.runs_ = state.runs_.restricted(out.window_);
  out.stats_ = state.stats_;
  out.zoom_path_ = state.zoom_path_;
  out.zoom_path_.push_back(out.window_);
  return out;
}

/// Drops every survivor inside `cell` (used to skip windows that died).
inline SurvivorState exclude_window(SurvivorState state, const DyadicCell& cell) {
  state.runs_.rescale(cell.level);
  const IndexRun span = cell.span_at(state.runs_.storage_level());
  state.runs_.erase(span.lo, span.hi);
  return state;
}

/// Auto window: stage n_from on the full interval (when l_{n_from} is small
/// enough), then zoom to a window of width 2^-window_level and sieve through
/// n_to. A window that empties is excluded and the next choice is tried.
inline SurvivorState sieve_auto(const GrowthSequence& seq, const SieveParams& p, Index n_from, Index n_to,
                                Strategy strategy, std::uint64_t seed, const SieveOptions& opts = {}) {
  std::mt19937_64 rng(seed);
  const int first = dyadic_level(p, seq, n_from);
  const DyadicCell root{0, 0};
  SurvivorState pool;
  if (first <= opts.full_level_cap) {
    pool = sieve_range(seq, p, root, n_from, n_from, opts);
  } else {
    pool = SurvivorState::fresh(root, n_from - 1, std::min(opts.window_level, first));
  }
  const int target = std::min(opts.window_level, pool.level());
  for (int attempt = 0; attempt < opts.max_attempts && !pool.empty(); ++attempt) {
    SurvivorState candidate = zoom(pool, strategy, rng, target);
    const DyadicCell chosen = candidate.window();
    try {
      return sieve_continue(std::move(candidate), seq, p, n_to, opts);
    } catch (const EmptySurvivorError&) {
      pool = exclude_window(std::move(pool), chosen);
    }
  }
  throw EmptySurvivorError(n_to);
}

/// Independent oracle: survivors at level l_{n_to} over the whole of [0, 1),
/// decided cell by cell. A level-l cell [b, b+1)/2^l is removed at stage j
/// iff some integer a in [0, ceil t] satisfies t b/2^l - d <= a <= t (b+1)/2^l + d.
inline DyadicSet brute_force_survivors(const GrowthSequence& seq, const SieveParams& p, Index n_from, Index n_to,
                                       int level_cap) {
  if (level_cap > 25) throw CapacityError("sieve", "level_cap", "brute force is limited to level 25");
  const int L = dyadic_level(p, seq, n_to);
  if (L > level_cap)
    throw CapacityError("sieve", "level_cap",
                        "l_{n_to}=" + std::to_string(L) + " exceeds cap " + std::to_string(level_cap));
  const CellIndex cells = CellIndex{1} << L;
  std::vector<std::uint8_t> alive(cells, 1);
  std::vector<std::uint8_t> hit;
  for (Index j = n_from; j <= n_to; ++j) {
    const Enclosure t = seq.eval(j, p.precision);
    const Rational d = delta(p, j).hi;
    const int lj = dyadic_level(p, seq, j);
    const CellIndex count = CellIndex{1} << lj;
    const Integer top = ceil_of(t.hi);
    hit.assign(count, 0);
    if (t.is_point()) {
      // (P S b - R Q 2^l) / (Q S 2^l) and (P S (b+1) + R Q 2^l) / (Q S 2^l)
      const Integer &P = t.lo.get_num(), &Q = t.lo.get_den(), &R = d.get_num(), &S = d.get_den();
      const Integer PS = P * S, RQ = R * Q * pow2(lj), den = Q * S * pow2(lj);
      Integer num, a_min, a_max;
      for (CellIndex b = 0; b < count; ++b) {
        mpz_mul_ui(num.get_mpz_t(), PS.get_mpz_t(), b);
        num -= RQ;
        mpz_fdiv_q(a_min.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        ++a_min;
        mpz_mul_ui(num.get_mpz_t(), PS.get_mpz_t(), b + 1);
        num += RQ;
        mpz_cdiv_q(a_max.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        --a_max;
        if (a_min < 0) a_min = 0;
        if (a_max > top) a_max = top;
        hit[b] = a_min <= a_max;
      }
    } else {
      const Rational width = pow2q(-lj);
      for (CellIndex b = 0; b < count; ++b) {
        const Rational u = Rational(from_u64(b)) * width, w = u + width;
        // open cell (u, w) meets [(a - d)/t, (a + d)/t] for some t in [t.lo, t.hi]
        Integer a_min = floor_of(t.lo * u - d) + 1;
        Integer a_max = ceil_of(t.hi * w + d) - 1;
        if (a_min < 0) a_min = 0;
        if (a_max > top) a_max = top;
        hit[b] = a_min <= a_max;
      }
    }
    const int shift = L - lj;
    for (CellIndex b = 0; b < cells; ++b)
      if (hit[b >> shift]) alive[b] = 0;
  }
  std::vector<IndexRun> runs;
  for (CellIndex b = 0; b < cells; ++b)
    if (alive[b]) runs.push_back({b, b + 1});
  return DyadicSet::from_runs(L, std::move(runs));
}

}  // namespace dsieve

#endif  // DSIEVE_SIEVE_HPP
