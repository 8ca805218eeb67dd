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

// Empirical checks of the measure-retention estimates behind the
// construction, and the Eggleston-style dimension estimate along a ladder.
// All measures are exact cell counts; the only rounding is the direction of
// the delta enclosure, which is always chosen against passing.

#ifndef DSIEVE_VALIDATE_HPP
#define DSIEVE_VALIDATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dsieve/dyadic.hpp"
#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/parallel.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {

struct LemmaSample {
  Index n = 0;
  Index m = 0;
  Index M = 0;
  DyadicCell J;
  double ratio = 0;
  double bound = 0;
  bool pass = false;
  std::string status = "ok";  // ok | hypothesis-failed | capacity | empty
  CellIndex r = 0;
  CellIndex good = 0;
  CellIndex required = 0;
};

struct LemmaReport {
  std::string lemma_id;  // L1 | L2 | L3 | budget
  std::size_t samples = 0;
  double worst_ratio = 0;
  double bound = 0;
  bool pass = false;
  std::string status;  // pass | fail | inconclusive
  std::string note;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<LemmaSample> details;
};

inline void finish_status(LemmaReport& r) {
  r.status = r.samples == 0 ? "inconclusive" : r.pass ? "pass" : "fail";
  if (r.samples == 0) r.pass = false;
}

// ---------------------------------------------------------------------------
// Cover density (L1): mu(J & A_m) <= 5 delta_m mu(J) for J a surviving stage-n cell.

struct Lemma1Sample {
  Index n = 0;
  Index m = 0;
  DyadicCell J;
};

/// Cached stage geometry for a contiguous range of stages.
class GeometryTable {
 public:
  GeometryTable(const GrowthSequence& seq, const SieveParams& p, Index lo, Index hi) : lo_(lo) {
    for (Index n = lo; n <= hi; ++n) table_.push_back(stage_geometry(seq, p, n));
  }
  const StageGeometry& at(Index n) const { return table_.at(static_cast<std::size_t>(n - lo_)); }
  Index lo() const noexcept { return lo_; }
  Index hi() const noexcept { return lo_ + static_cast<Index>(table_.size()) - 1; }

 private:
  Index lo_;
  std::vector<StageGeometry> table_;
};

/// True if the whole cell J survives stages [n_start, n].
inline bool cell_survives(const GeometryTable& geo, const DyadicCell& J, Index n_start, Index n) {
  for (Index j = n_start; j <= n; ++j) {
    const StageGeometry& g = geo.at(j);
    if (!cells_hitting_E(g, J.ancestor(std::min(g.level, J.level))).empty()) return false;
  }
  return true;
}

/// Uniformly random n in [n_lo, n_hi], m = h(n) under the active h mode, and
/// J uniform among the stage-n survivor cells (stages n_start..n).
inline std::vector<Lemma1Sample> sample_lemma1(const GrowthSequence& seq, const SieveParams& p, Index n_lo,
                                               Index n_hi, std::size_t count, std::uint64_t seed) {
  const Index start = std::min(p.n_start, n_lo);
  const GeometryTable geo(seq, p, start, n_hi);
  std::mt19937_64 rng(seed);
  std::map<Index, Index> h_cache;
  std::vector<Lemma1Sample> out;
  while (out.size() < count) {
    const Index n = std::uniform_int_distribution<Index>(n_lo, n_hi)(rng);
    const int ln = geo.at(n).level;
    require_level(ln, "validate");
    auto [it, fresh] = h_cache.try_emplace(n, 0);
    if (fresh) it->second = h_of(p, seq, n);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const DyadicCell J{ln, std::uniform_int_distribution<CellIndex>(0, (CellIndex{1} << ln) - 1)(rng)};
      if (cell_survives(geo, J, start, n)) {
        out.push_back({n, it->second, J});
        break;
      }
    }
  }
  return out;
}

/// mu(J & A_m) / (delta_m mu(J)), exact, using the lower end of delta_m.
inline Rational lemma1_ratio(const GrowthSequence& seq, const SieveParams& p, const Lemma1Sample& s) {
  const StageGeometry g = stage_geometry(seq, p, s.m);
  CellIndex covered = 0;
  for (const auto& run : cells_hitting_E(g, s.J)) covered += run.length();
  return Rational(from_u64(covered)) * pow2q(s.J.level - g.level) / g.delta.lo;
}

inline LemmaReport lemma1_check(const GrowthSequence& seq, const SieveParams& p,
                                const std::vector<Lemma1Sample>& samples, unsigned threads = 1) {
  const Rational bound = 5;
  LemmaReport report;
  report.lemma_id = "L1";
  report.bound = bound.get_d();
  report.details.resize(samples.size());
  std::map<Index, Index> h;
  for (const auto& s : samples) h.try_emplace(s.n, 0);
  for (auto& [n, hn] : h) hn = h_of(p, seq, n);
  for (const auto& s : samples) {
    if (s.m < h.at(s.n))
      throw DomainError("validate", "m", "m=" + std::to_string(s.m) + " below h(" + std::to_string(s.n) + ")");
    if (s.J.level != dyadic_level(p, seq, s.n))
      throw DomainError("validate", "J", "J is not a level-l_n cell");
  }
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    const Rational ratio = lemma1_ratio(seq, p, samples[i]);
    LemmaSample& d = report.details[i];
    d.n = samples[i].n;
    d.m = samples[i].m;
    d.J = samples[i].J;
    d.ratio = ratio.get_d();
    d.bound = report.bound;
    d.pass = ratio <= bound;
  });
  report.samples = samples.size();
  report.pass = std::all_of(report.details.begin(), report.details.end(), [](const LemmaSample& d) { return d.pass; });
  for (const auto& d : report.details) report.worst_ratio = std::max(report.worst_ratio, d.ratio);
  finish_status(report);
  return report;
}

// ---------------------------------------------------------------------------
// Retention (L2) and good children (L3): retention from stage m to stage M inside a stage-n cell J
// that is at least half alive at stage m.

struct RetentionOptions {
  double work_budget = 2e9;  // segment evaluations allowed per J
  SieveOptions sieve;
};

struct RetentionSample {
  DyadicCell J;
  std::string status = "ok";  // ok | hypothesis-failed | capacity
  std::string note;
  Rational mu_J;
  Rational mu_Bm;  // mu(J & B_m)
  Rational mu_BM;  // mu(J & B_M)
  CellIndex r = 0;     // stage-m survivor cells inside J
  CellIndex good = 0;  // of those, cells keeping >= 1/2 of their measure at M
  double work = 0;
};

struct RetentionStudy {
  Index n = 0;
  Index m = 0;
  Index M = 0;
  Index n_start = 0;
  bool custom_bound = false;
  Rational paper_retention{5, 6};
  double retention_bound = 5.0 / 6.0;
  std::vector<RetentionSample> samples;
};

/// 1 - (10/c) ln(ratio), ratio = ln M / ln m.
inline double retention_constant(double c, double log_ratio) { return 1 - 10 / c * std::log(log_ratio); }

/// Retention bound: 5/6 when c_mode is paper, else retention_constant at (m, M).
inline double retention_bound(const SieveParams& p, Index m, Index M) {
  if (p.c_mode == CMode::paper) return 5.0 / 6.0;
  return retention_constant(p.c.approx(), std::log(static_cast<double>(M)) / std::log(static_cast<double>(m)));
}

/// Upper estimate of the number of segment evaluations needed to sieve a
/// cell of measure mu through stages [lo, hi].
inline double sieve_work(const GrowthSequence& seq, const SieveParams& p, Index lo, Index hi, double mu) {
  if (hi < lo) return 0;
  constexpr int kBlocks = 256;
  double total = 0;
  Index a = lo;
  const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(lo), 1.0 / kBlocks);
  for (int b = 1; b <= kBlocks && a <= hi; ++b) {
    Index e = b == kBlocks ? hi : std::max(a, static_cast<Index>(static_cast<double>(lo) * std::pow(ratio, b)));
    e = std::min(e, hi);
    const double t = seq.eval(e, 53).hi.get_d();
    total += static_cast<double>(e - a + 1) * (t * mu + 3);
    a = e + 1;
  }
  return total;
}

inline RetentionSample retention_sample(const GrowthSequence& seq, const SieveParams& p, Index n, Index m, Index M,
                                        const DyadicCell& J, const RetentionOptions& opts) {
  RetentionSample s;
  s.J = J;
  s.mu_J = pow2q(-J.level);
  const double mu = s.mu_J.get_d();
  s.work = sieve_work(seq, p, n + 1, M, mu);
  const int lm = dyadic_level(p, seq, m), lM = dyadic_level(p, seq, M);
  // Each removed segment can split a run, so work also bounds the run count.
  const double budget = std::min(opts.work_budget, static_cast<double>(opts.sieve.max_runs));
  if (s.work > budget || lM > kMaxLevel) {
    s.status = "capacity";
    char buf[160];
    std::snprintf(buf, sizeof buf, "needs ~%.3g segment evaluations (budget %.3g), l_M=%d", s.work, budget, lM);
    s.note = buf;
    return s;
  }
  auto over_capacity = [&](const CapacityError& e) {
    s.status = "capacity";
    s.note = e.what();
    return s;
  };
  SurvivorState state;
  try {
    state = sieve_range(seq, p, J, n + 1, m, opts.sieve);
  } catch (const EmptySurvivorError&) {
    s.status = "hypothesis-failed";
    s.mu_Bm = 0;
    return s;
  } catch (const CapacityError& e) {
    return over_capacity(e);
  }
  s.mu_Bm = state.survivor_measure();
  if (s.mu_Bm * 2 < s.mu_J) {
    s.status = "hypothesis-failed";
    return s;
  }
  const DyadicSet at_m = state.survivors();
  s.r = at_m.count();
  DyadicSet at_M(lM);
  try {
    state = sieve_continue(std::move(state), seq, p, M, opts.sieve);
    at_M = state.survivors();
    s.mu_BM = state.survivor_measure();
  } catch (const EmptySurvivorError&) {
    s.mu_BM = 0;
  } catch (const CapacityError& e) {
    return over_capacity(e);
  }
  const int shift = lM - lm;
  const CellIndex half = (CellIndex{1} << shift) / 2 + ((CellIndex{1} << shift) % 2);
  for (const auto& run : at_m.runs())
    for (CellIndex k = run.lo; k < run.hi; ++k)
      if (at_M.count_in({k << shift, (k + 1) << shift}) >= half) ++s.good;
  return s;
}

/// Candidate J cells drawn from real survivor sets: the leftmost `count`
/// survivor cells at level l_n plus `count` seeded-random ones.
inline std::vector<DyadicCell> sample_retention_cells(const GrowthSequence& seq, const SieveParams& p, Index n,
                                                      std::size_t count, std::uint64_t seed,
                                                      const SieveOptions& opts = {}) {
  const Index start = std::min(p.n_start, n);
  const int ln = dyadic_level(p, seq, n);
  SurvivorState state;
  if (ln <= opts.full_level_cap) {
    state = sieve_range(seq, p, DyadicCell{0, 0}, start, n, opts);
  } else {
    state = sieve_auto(seq, p, start, n, Strategy::seeded_random, seed, opts);
  }
  std::vector<DyadicCell> cells;
  const DyadicSet s = state.survivors();
  for (const auto& run : s.runs()) {
    for (CellIndex b = run.lo; b < run.hi && cells.size() < count; ++b) cells.push_back({ln, b});
    if (cells.size() >= count) break;
  }
  std::mt19937_64 rng(seed);
  const CellIndex total = s.count();
  for (std::size_t i = 0; i < count && total > 0; ++i) {
    CellIndex k = std::uniform_int_distribution<CellIndex>(0, total - 1)(rng);
    for (const auto& run : s.runs()) {
      if (k < run.length()) {
        const DyadicCell c{ln, run.lo + k};
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
        break;
      }
      k -= run.length();
    }
  }
  return cells;
}

inline RetentionStudy study_retention(const GrowthSequence& seq, const SieveParams& p, Index n, Index m, Index M,
                                      const std::vector<DyadicCell>& cells, const RetentionOptions& opts = {},
                                      unsigned threads = 1) {
  if (!(n < m && m <= M)) throw DomainError("validate", "triple", "need n < m <= M");
  RetentionStudy study;
  study.n = n;
  study.m = m;
  study.M = M;
  study.n_start = p.n_start;
  study.custom_bound = p.c_mode == CMode::custom;
  study.retention_bound = retention_bound(p, m, M);
  study.samples.resize(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t i) {
    study.samples[i] = retention_sample(seq, p, n, m, M, cells[i], opts);
  });
  return study;
}

inline LemmaReport lemma2_report(const RetentionStudy& study) {
  LemmaReport report;
  report.lemma_id = "L2";
  report.bound = study.retention_bound;
  report.worst_ratio = std::numeric_limits<double>::infinity();
  report.pass = true;
  std::size_t skipped = 0, capacity = 0;
  for (const auto& s : study.samples) {
    LemmaSample d;
    d.n = study.n;
    d.m = study.m;
    d.M = study.M;
    d.J = s.J;
    d.status = s.status;
    d.bound = report.bound;
    if (s.status != "ok") {
      skipped += s.status == "hypothesis-failed";
      capacity += s.status == "capacity";
      report.details.push_back(d);
      continue;
    }
    const Rational retention = s.mu_BM / s.mu_Bm;
    d.ratio = retention.get_d();
    d.pass = study.custom_bound ? d.ratio >= report.bound : retention >= study.paper_retention;
    report.pass = report.pass && d.pass;
    report.worst_ratio = std::min(report.worst_ratio, d.ratio);
    ++report.samples;
    report.details.push_back(d);
  }
  if (report.samples == 0) report.worst_ratio = 0;
  report.extras = {{"hypothesis_failed", static_cast<double>(skipped)},
                   {"capacity_limited", static_cast<double>(capacity)}};
  if (capacity) {
    for (const auto& s : study.samples)
      if (s.status == "capacity") {
        report.note = s.note;
        break;
      }
  }
  finish_status(report);
  return report;
}

/// Required good count: floor((2 r_c - 1) r); floor(2r/3) for r_c = 5/6.
inline CellIndex required_good(const RetentionStudy& study, CellIndex r) {
  if (!study.custom_bound) {
    const Rational need = (2 * study.paper_retention - 1) * Rational(from_u64(r));
    return to_u64(floor_of(need));
  }
  const double need = std::floor((2 * study.retention_bound - 1) * static_cast<double>(r));
  return need <= 0 ? 0 : static_cast<CellIndex>(need);
}

inline LemmaReport lemma3_report(const RetentionStudy& study) {
  LemmaReport report;
  report.lemma_id = "L3";
  report.bound = 1;  // ratio is good / required
  report.worst_ratio = std::numeric_limits<double>::infinity();
  report.pass = true;
  for (const auto& s : study.samples) {
    LemmaSample d;
    d.n = study.n;
    d.m = study.m;
    d.M = study.M;
    d.J = s.J;
    d.status = s.status;
    d.r = s.r;
    d.good = s.good;
    if (s.status != "ok" || s.r < 3) {
      if (s.status == "ok") d.status = s.r == 0 ? "empty" : "small-r";
      report.details.push_back(d);
      continue;
    }
    d.required = required_good(study, s.r);
    d.ratio = d.required ? static_cast<double>(s.good) / static_cast<double>(d.required)
                         : std::numeric_limits<double>::infinity();
    d.bound = static_cast<double>(d.required) / static_cast<double>(s.r);
    d.pass = s.good >= d.required;
    report.pass = report.pass && d.pass;
    report.worst_ratio = std::min(report.worst_ratio, d.ratio);
    ++report.samples;
    report.details.push_back(d);
  }
  if (report.samples == 0) report.worst_ratio = 0;
  report.note = "ratio = good / required, required = floor((2 r_c - 1) r); samples with r < 3 are not scored";
  for (const auto& s : study.samples)
    if (s.status == "capacity") {
      report.note += "; " + s.note;
      break;
    }
  finish_status(report);
  return report;
}

inline LemmaReport lemma2_check(const GrowthSequence& seq, const SieveParams& p, Index n, Index m, Index M,
                                const std::vector<DyadicCell>& cells, const RetentionOptions& opts = {}) {
  return lemma2_report(study_retention(seq, p, n, m, M, cells, opts));
}

inline LemmaReport lemma3_check(const GrowthSequence& seq, const SieveParams& p, Index n, Index m, Index M,
                                const std::vector<DyadicCell>& cells, const RetentionOptions& opts = {}) {
  return lemma3_report(study_retention(seq, p, n, m, M, cells, opts));
}

// ---------------------------------------------------------------------------
// sum_{j=m+1}^{M} delta_j against (1/c) ln(ln M / ln m).

inline LemmaReport budget_check(const SieveParams& p, Index m, Index M) {
  if (m < 2 || M <= m) throw DomainError("validate", "budget", "need 2 <= m < M");
  const int prec = p.precision;
  Real c_lo = real_from(p.c.lo, prec, MPFR_RNDD);
  Real sum(prec), term(prec), idx(prec);
  mpfr_set_ui(sum.get(), 0, MPFR_RNDN);
  for (Index j = m + 1; j <= M; ++j) {
    mpfr_set_si(idx.get(), j, MPFR_RNDD);
    mpfr_log(term.get(), idx.get(), MPFR_RNDD);
    mpfr_mul(term.get(), term.get(), idx.get(), MPFR_RNDD);
    mpfr_mul(term.get(), term.get(), c_lo.get(), MPFR_RNDD);
    mpfr_ui_div(term.get(), 1, term.get(), MPFR_RNDU);
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDU);
  }
  // (1/c) ln(ln M / ln m), rounded down
  Real lnM(prec), lnm(prec), bound(prec);
  mpfr_set_si(lnM.get(), M, MPFR_RNDD);
  mpfr_log(lnM.get(), lnM.get(), MPFR_RNDD);
  mpfr_set_si(lnm.get(), m, MPFR_RNDU);
  mpfr_log(lnm.get(), lnm.get(), MPFR_RNDU);
  mpfr_div(bound.get(), lnM.get(), lnm.get(), MPFR_RNDD);
  mpfr_log(bound.get(), bound.get(), MPFR_RNDD);
  Real c_hi = real_from(p.c.hi, prec, MPFR_RNDU);
  mpfr_div(bound.get(), bound.get(), c_hi.get(), MPFR_RNDD);

  LemmaReport r;
  r.lemma_id = "budget";
  r.samples = 1;
  r.worst_ratio = sum.to_double();
  r.bound = bound.to_double();
  r.pass = mpfr_lessequal_p(sum.get(), bound.get()) != 0;
  r.extras = {{"m", static_cast<double>(m)},
              {"M", static_cast<double>(M)},
              {"delta_sum_upper", r.worst_ratio},
              {"integral_bound_lower", r.bound},
              {"retention_constant", 1 - 10 * r.worst_ratio}};
  r.note = "pass iff sum of delta_j <= (1/c) ln(ln M / ln m)";
  finish_status(r);
  return r;
}

// ---------------------------------------------------------------------------
// Dimension estimate along a ladder.

struct DimensionEstimate {
  Ladder ladder;
  std::vector<int> levels;        // l_{n_k}, k = 0..K
  std::vector<Integer> counts;    // N_k, k = 1..K (counts[0] is N_1)
  std::vector<double> log_counts; // ln N_k
  std::vector<double> D;          // D_k, k = 1..K
  std::vector<double> log_series; // ln of the Eggleston series term, k = 2..K
  bool valid = true;
  int invalid_k = 0;
  bool positive = true;
  bool nondecreasing = true;
};

/// N_{k+1} = floor(2^(l_{n_{k+1}} - l_{n_k}) / 3), R_k = prod N_j,
/// D_k = ln R_k / (l_{n_k} ln 2), series term (Delta_{k-1}/Delta_k)(R_k Delta_k^v)^-1.
inline DimensionEstimate eggleston_from_levels(std::vector<int> levels, double v, int precision = kDefaultPrecision) {
  if (levels.size() < 2) throw DomainError("validate", "ladder", "need at least two ladder entries");
  DimensionEstimate est;
  est.levels = std::move(levels);
  Real ln2(precision), acc(precision), x(precision);
  mpfr_const_log2(ln2.get(), MPFR_RNDN);
  mpfr_set_ui(acc.get(), 0, MPFR_RNDN);
  for (std::size_t k = 1; k < est.levels.size(); ++k) {
    const int gap = est.levels[k] - est.levels[k - 1];
    Integer N = gap >= 0 ? Integer(pow2(gap) / 3) : Integer(0);
    est.counts.push_back(N);
    if (N <= 1) {
      if (est.valid) est.invalid_k = static_cast<int>(k);
      est.valid = false;
      est.log_counts.push_back(N == 1 ? 0.0 : -std::numeric_limits<double>::infinity());
      est.D.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    mpfr_set_z(x.get(), N.get_mpz_t(), MPFR_RNDN);
    mpfr_log(x.get(), x.get(), MPFR_RNDN);
    est.log_counts.push_back(x.to_double());
    mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDN);  // ln R_k
    Real denom(precision);
    mpfr_mul_si(denom.get(), ln2.get(), est.levels[k], MPFR_RNDN);
    Real d(precision);
    mpfr_div(d.get(), acc.get(), denom.get(), MPFR_RNDN);
    est.D.push_back(d.to_double());
    if (k >= 2) {
      // (l_k - l_{k-1}) ln 2 - ln R_k + v l_k ln 2
      Real t(precision);
      mpfr_mul_si(t.get(), ln2.get(), gap, MPFR_RNDN);
      mpfr_sub(t.get(), t.get(), acc.get(), MPFR_RNDN);
      Real tail(precision);
      mpfr_mul_d(tail.get(), denom.get(), v, MPFR_RNDN);
      mpfr_add(t.get(), t.get(), tail.get(), MPFR_RNDN);
      est.log_series.push_back(t.to_double());
    }
  }
  for (std::size_t k = 0; k < est.D.size(); ++k) {
    if (!(est.D[k] > 0)) est.positive = false;
    if (k && !(est.D[k] >= est.D[k - 1])) est.nondecreasing = false;
  }
  return est;
}

inline DimensionEstimate eggleston_estimate(const GrowthSequence& seq, const SieveParams& p, const Ladder& ladder) {
  if (ladder.size() < 2) throw DomainError("validate", "ladder", "need at least two ladder entries");
  std::vector<int> levels;
  for (const Index n : ladder.entries) levels.push_back(dyadic_level(p, seq, n));
  DimensionEstimate est = eggleston_from_levels(std::move(levels), p.v.get_d(), p.precision);
  est.ladder = ladder;
  return est;
}

}  // namespace dsieve

#endif  // DSIEVE_VALIDATE_HPP
