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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dsieve/error.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {
namespace {

const GrowthSequence& square() {
  static const GrowthSequence s = make_polynomial({1, 0, 0});
  return s;
}

// Cells b of `window` (at level L) whose open interval meets some closed
// segment [(a - d)/t, (a + d)/t] clipped to [0, 1]; plain rational scan.
std::set<CellIndex> marked_by_scan(const Rational& t, const Rational& d, int L, const DyadicCell& window) {
  std::set<CellIndex> out;
  const IndexRun span = window.span_at(L);
  const Integer top = ceil_of(t);
  for (CellIndex b = span.lo; b < span.hi; ++b) {
    const Rational u = Rational(from_u64(b)) * pow2q(-L), w = Rational(from_u64(b + 1)) * pow2q(-L);
    // d < 1 here, so only grid points within one unit of the cell matter
    Integer a = floor_of(u * t) - 1;
    if (a < 0) a = 0;
    const Integer last = std::min<Integer>(top, ceil_of(w * t) + 1);
    for (; a <= last; ++a) {
      Rational lo = (Rational(a) - d) / t, hi = (Rational(a) + d) / t;
      if (lo < 0) lo = 0;
      if (hi > 1) hi = 1;
      if (lo < w && u < hi) {
        out.insert(b);
        break;
      }
    }
  }
  return out;
}

std::set<CellIndex> as_set(const std::vector<IndexRun>& runs) {
  std::set<CellIndex> out;
  for (const auto& r : runs)
    for (CellIndex b = r.lo; b < r.hi; ++b) out.insert(b);
  return out;
}

StageGeometry toy() { return {2, Enclosure::point(4), Enclosure::point(Rational(1, 8)), 5}; }

TEST(CellsHittingE, ToyExample) {
  const auto cells = as_set(cells_hitting_E(toy(), DyadicCell{0, 0}));
  EXPECT_EQ(cells, (std::set<CellIndex>{0, 7, 8, 15, 16, 23, 24, 31}));
  EXPECT_EQ(cells, marked_by_scan(4, Rational(1, 8), 5, DyadicCell{0, 0}));
}

TEST(CellsHittingE, ToySurvivorMeasure) {
  RunSet r(DyadicCell{0, 0}, 5);
  for (const auto& run : cells_hitting_E(toy(), DyadicCell{0, 0})) r.erase_at(5, run);
  EXPECT_EQ(r.snapshot(5).measure(), Rational(3, 4));
}

TEST(CellsHittingE, SegmentCentredOnBoundaryMarksBothNeighbours) {
  // a = 1 is centred on 8/32, the boundary between cells 7 and 8
  const auto cells = as_set(cells_hitting_E(toy(), DyadicCell{2, 0}));
  EXPECT_EQ(cells, (std::set<CellIndex>{0, 7}));
  const auto right = as_set(cells_hitting_E(toy(), DyadicCell{2, 1}));
  EXPECT_EQ(right, (std::set<CellIndex>{8, 15}));
}

TEST(CellsHittingE, SeparatedWindowIsEmpty) {
  // cells 10..11 at level 5 (window level 4, index 5) lie in (5/16, 6/16),
  // farther than 1/32 + 1/32 from the grid points 1/4 and 1/2
  EXPECT_TRUE(cells_hitting_E(toy(), DyadicCell{4, 5}).empty());
}

TEST(CellsHittingE, RandomGeometryMatchesScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Rational t(static_cast<long>(rng() % 4000 + 3), static_cast<long>(rng() % 7 + 1));
    const Rational d(static_cast<long>(rng() % 50 + 1), static_cast<long>(rng() % 900 + 100));
    const int L = static_cast<int>(rng() % 6) + 10;
    const int wl = static_cast<int>(rng() % 5);
    const DyadicCell window{wl, rng() % (CellIndex{1} << wl)};
    const StageGeometry g{2, Enclosure::point(t), Enclosure::point(d), L};
    ASSERT_EQ(as_set(cells_hitting_E(g, window)), marked_by_scan(t, d, L, window))
        << "t=" << t.get_str() << " d=" << d.get_str() << " L=" << L;
  }
}

TEST(CellsHittingE, EnclosureCoversEveryPointValue) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational t(static_cast<long>(rng() % 3000 + 10), 3);
    const Rational eps(1, 1 << 20);
    const Rational d(1, static_cast<long>(rng() % 90 + 10));
    const int L = 14;
    const StageGeometry point{2, Enclosure::point(t), Enclosure::point(d), L};
    const StageGeometry wide{2, Enclosure{t - eps, t + eps}, Enclosure::point(d), L};
    const auto a = as_set(cells_hitting_E(point, DyadicCell{0, 0}));
    const auto b = as_set(cells_hitting_E(wide, DyadicCell{0, 0}));
    for (CellIndex x : a) ASSERT_TRUE(b.count(x)) << x;
  }
}

TEST(CellsHittingE, WindowFinerThanLevelIsRejected) {
  EXPECT_THROW(cells_hitting_E(toy(), DyadicCell{6, 0}), DomainError);
}

SieveParams half_c() { return SieveParams::custom(2, Rational(1, 2)); }

TEST(SieveRange, MatchesBruteForce) {
  const SieveParams p = half_c();
  for (const auto& [from, to] : std::vector<std::pair<Index, Index>>{{8, 8}, {8, 20}, {10, 40}, {8, 64}}) {
    const SurvivorState s = sieve_range(square(), p, DyadicCell{0, 0}, from, to);
    const DyadicSet brute = brute_force_survivors(square(), p, from, to, 25);
    ASSERT_EQ(s.survivors(), brute) << from << ".." << to;
    ASSERT_EQ(s.survivor_measure(), brute.measure());
  }
}

TEST(SieveRange, BruteForceCapIsCapacityError) {
  EXPECT_THROW(brute_force_survivors(square(), SieveParams::paper(2), 8, 64, 25), CapacityError);
  EXPECT_THROW(brute_force_survivors(square(), half_c(), 8, 9, 26), CapacityError);
}

TEST(SieveRange, EmptyRangeLeavesStateUnchanged) {
  const SurvivorState s = sieve_range(square(), half_c(), DyadicCell{0, 0}, 10, 9);
  EXPECT_TRUE(s.stats().empty());
  EXPECT_EQ(s.survivor_measure(), 1);
  EXPECT_EQ(s.processed_up_to(), 9);
}

TEST(SieveRange, MonotoneAndStatsComplete) {
  const SieveParams p = half_c();
  SurvivorState s = sieve_range(square(), p, DyadicCell{0, 0}, 8, 8);
  DyadicSet prev = s.survivors();
  for (Index n = 9; n <= 40; ++n) {
    s = subtract_step(std::move(s), square(), p, n);
    const DyadicSet now = s.survivors();
    ASSERT_TRUE(now.subset_of(prev)) << n;
    ASSERT_EQ(s.level(), dyadic_level(p, square(), n));
    prev = now;
  }
  ASSERT_EQ(s.stats().size(), 33u);
  for (std::size_t i = 1; i < s.stats().size(); ++i)
    ASSERT_LE(s.stats()[i].survivor_measure, s.stats()[i - 1].survivor_measure);
}

TEST(SieveRange, RemovedMeasureBound) {
  const SieveParams p = half_c();
  const SurvivorState s = sieve_range(square(), p, DyadicCell{0, 0}, 8, 64);
  Rational bound = 1;
  for (Index n = 8; n <= 64; ++n) {
    const Rational t = square().exact(n);
    bound -= 2 * delta(p, n).hi + 4 * pow2q(-dyadic_level(p, square(), n)) * (t + 2);
  }
  EXPECT_GE(s.survivor_measure(), bound);
}

TEST(SieveRange, Deterministic) {
  const SieveParams p = SieveParams::paper(2);
  const DyadicCell window{16, 12345};
  const SurvivorState a = sieve_range(square(), p, window, 32, 1500);
  const SurvivorState b = sieve_range(square(), p, window, 32, 1500);
  EXPECT_EQ(a.survivors(), b.survivors());
}

TEST(SieveRange, LowerPrecisionNeverUnremoves) {
  SieveParams lo = SieveParams::paper(2, 64), hi = SieveParams::paper(2, 128);
  const DyadicCell window{14, 777};
  const SurvivorState a = sieve_range(square(), lo, window, 32, 800);
  const SurvivorState b = sieve_range(square(), hi, window, 32, 800);
  EXPECT_TRUE(a.survivors().subset_of(b.survivors()));
}

TEST(SubtractStep, OutOfOrderStageIsRejected) {
  SurvivorState s = sieve_range(square(), half_c(), DyadicCell{0, 0}, 8, 10);
  EXPECT_THROW(subtract_step(s, square(), half_c(), 12), DomainError);
}

TEST(SubtractStep, EmptySurvivorCarriesStage) {
  const SieveParams p = half_c();
  const int l8 = dyadic_level(p, square(), 8);
  try {
    (void)sieve_range(square(), p, DyadicCell{l8, 0}, 8, 20);
    FAIL() << "expected empty survivors";
  } catch (const EmptySurvivorError& e) {
    EXPECT_EQ(e.stage(), 8);
  }
}

TEST(SubtractStep, RunBudgetIsCapacityError) {
  SieveOptions o;
  o.max_runs = 3;
  EXPECT_THROW(sieve_range(square(), half_c(), DyadicCell{0, 0}, 8, 20, o), CapacityError);
}

RunSet two_runs() {
  RunSet r(DyadicCell{0, 0}, 4);
  r.erase(0, 4);
  r.erase(8, 12);
  r.erase(13, 16);
  return r;  // {[4,8), [12,13)}
}

TEST(SelectCell, Strategies) {
  std::mt19937_64 rng(1);
  const RunSet r = two_runs();
  EXPECT_EQ(select_cell(r, 4, Strategy::leftmost, rng), (DyadicCell{4, 4}));
  EXPECT_EQ(select_cell(r, 4, Strategy::max_run, rng), (DyadicCell{4, 6}));
  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 10; ++i)
    EXPECT_EQ(select_cell(r, 4, Strategy::seeded_random, r1), select_cell(r, 4, Strategy::seeded_random, r2));
}

TEST(SelectCell, SingleCellUnderAnyStrategy) {
  RunSet r(DyadicCell{4, 9}, 4);
  std::mt19937_64 rng(0);
  for (const Strategy s : {Strategy::leftmost, Strategy::max_run, Strategy::seeded_random})
    EXPECT_EQ(select_cell(r, 4, s, rng), (DyadicCell{4, 9}));
}

TEST(Zoom, NarrowsWindowAndRecordsPath) {
  const SieveParams p = half_c();
  const SurvivorState s = sieve_range(square(), p, DyadicCell{0, 0}, 8, 20);
  std::mt19937_64 rng(0);
  const SurvivorState z = zoom(s, Strategy::leftmost, rng, 6);
  EXPECT_EQ(z.window().level, 6);
  EXPECT_EQ(z.processed_up_to(), s.processed_up_to());
  ASSERT_EQ(z.zoom_path().size(), 1u);
  EXPECT_EQ(z.zoom_path()[0], z.window());
  EXPECT_TRUE(z.survivors().subset_of(s.survivors()));
  EXPECT_EQ(z.survivors(), z.survivors().minus({}));
  const DyadicSet inside = DyadicSet::full(z.window(), s.level());
  EXPECT_TRUE(z.survivors().subset_of(inside));
  EXPECT_THROW(zoom(s, Strategy::leftmost, rng, 30), DomainError);
}

TEST(SieveAuto, ProducesNonEmptyDeepWindow) {
  const SieveParams p = SieveParams::paper(2);
  const SurvivorState s = sieve_auto(square(), p, 32, 2000, Strategy::leftmost, 0);
  EXPECT_FALSE(s.empty());
  EXPECT_EQ(s.window().level, 20);
  EXPECT_EQ(s.processed_up_to(), 2000);
  const SurvivorState t = sieve_auto(square(), p, 32, 2000, Strategy::seeded_random, 7);
  const SurvivorState u = sieve_auto(square(), p, 32, 2000, Strategy::seeded_random, 7);
  EXPECT_EQ(t.window(), u.window());
  EXPECT_EQ(t.survivors(), u.survivors());
}

}  // namespace
}  // namespace dsieve
