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

#ifndef DSIEVE_DYADIC_HPP
#define DSIEVE_DYADIC_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"

namespace dsieve {

using CellIndex = std::uint64_t;

// Cell indices are 64-bit; one bit is kept free so that 2^level fits.
inline constexpr int kMaxLevel = 62;

inline void require_level(int level, const char* module) {
  if (level < 0 || level > kMaxLevel)
    throw CapacityError(module, "level",
                        "level " + std::to_string(level) + " outside [0, " + std::to_string(kMaxLevel) + "]");
}

// Half-open run of cell indices [lo, hi).
struct IndexRun {
  CellIndex lo = 0;
  CellIndex hi = 0;

  CellIndex length() const noexcept { return hi - lo; }
  friend bool operator==(const IndexRun&, const IndexRun&) = default;
};

/// The half-open interval [index / 2^level, (index + 1) / 2^level).
struct DyadicCell {
  int level = 0;
  CellIndex index = 0;

  static DyadicCell make(int level, CellIndex index) {
    require_level(level, "dyadic");
    if (index >= (CellIndex{1} << level))
      throw DomainError("dyadic", "index", "cell index " + std::to_string(index) + " outside level " +
                                               std::to_string(level));
    return {level, index};
  }

  Rational lower() const { return Rational(from_u64(index)) * pow2q(-level); }
  Rational upper() const { return Rational(from_u64(index + 1)) * pow2q(-level); }
  Rational midpoint() const { return Rational(from_u64(2 * index + 1)) * pow2q(-level - 1); }

  bool contains(const Rational& x) const { return lower() <= x && x < upper(); }
  bool strictly_contains(const Rational& x) const { return lower() < x && x < upper(); }

  /// Ancestor at a coarser (or equal) level.
  DyadicCell ancestor(int coarser) const {
    assert(coarser <= level);
    return {coarser, index >> (level - coarser)};
  }

  /// All descendants at a finer (or equal) level, as an index run.
  IndexRun span_at(int finer) const {
    assert(finer >= level);
    const int shift = finer - level;
    return {index << shift, (index + 1) << shift};
  }

  bool covers(const DyadicCell& other) const {
    return other.level >= level && other.ancestor(level).index == index;
  }

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
};

/// Sorted, disjoint, non-adjacent runs of cells at one level.
class DyadicSet {
 public:
  DyadicSet() = default;
  explicit DyadicSet(int level) : level_(level) { require_level(level, "dyadic"); }

  /// Normalizes arbitrary runs (sorts, merges overlaps and adjacency, drops empties).
  static DyadicSet from_runs(int level, std::vector<IndexRun> runs) {
    DyadicSet s(level);
    std::sort(runs.begin(), runs.end(), [](const IndexRun& a, const IndexRun& b) { return a.lo < b.lo; });
    for (const auto& r : runs) {
      if (r.hi <= r.lo) continue;
      if (!s.runs_.empty() && r.lo <= s.runs_.back().hi)
        s.runs_.back().hi = std::max(s.runs_.back().hi, r.hi);
      else
        s.runs_.push_back(r);
    }
    return s;
  }

  static DyadicSet full(const DyadicCell& cell, int level) {
    require_level(level, "dyadic");
    DyadicSet s(level);
    s.runs_.push_back(cell.span_at(level));
    return s;
  }

  int level() const noexcept { return level_; }
  const std::vector<IndexRun>& runs() const noexcept { return runs_; }
  bool empty() const noexcept { return runs_.empty(); }

  CellIndex count() const noexcept {
    CellIndex total = 0;
    for (const auto& r : runs_) total += r.length();
    return total;
  }

  /// Lebesgue measure, exact.
  Rational measure() const { return Rational(from_u64(count())) * pow2q(-level_); }

  DyadicSet refined(int level) const {
    if (level < level_) throw DomainError("dyadic", "level", "refinement to a coarser level");
    require_level(level, "dyadic");
    DyadicSet s(level);
    const int shift = level - level_;
    s.runs_.reserve(runs_.size());
    for (const auto& r : runs_) s.runs_.push_back({r.lo << shift, r.hi << shift});
    return s;
  }

  /// Removes the given cells (sorted or not, same level).
  DyadicSet minus(const std::vector<IndexRun>& cells) const {
    const DyadicSet rem = from_runs(level_, cells);
    DyadicSet out(level_);
    auto it = rem.runs_.begin();
    for (auto r : runs_) {
      while (it != rem.runs_.end() && it->hi <= r.lo) ++it;
      auto jt = it;
      while (jt != rem.runs_.end() && jt->lo < r.hi) {
        if (jt->lo > r.lo) out.runs_.push_back({r.lo, jt->lo});
        r.lo = std::max(r.lo, jt->hi);
        if (r.lo >= r.hi) break;
        ++jt;
      }
      if (r.lo < r.hi) out.runs_.push_back(r);
    }
    return out;
  }

  /// Number of member cells inside `range`.
  CellIndex count_in(const IndexRun& range) const {
    CellIndex total = 0;
    auto it = std::upper_bound(runs_.begin(), runs_.end(), range.lo,
                               [](CellIndex x, const IndexRun& r) { return x < r.hi; });
    for (; it != runs_.end() && it->lo < range.hi; ++it)
      total += std::min(it->hi, range.hi) - std::max(it->lo, range.lo);
    return total;
  }

  bool contains_cell(CellIndex index) const { return count_in({index, index + 1}) == 1; }

  /// Point-set inclusion, comparing at the finer of the two levels.
  bool subset_of(const DyadicSet& other) const {
    const int level = std::max(level_, other.level_);
    const DyadicSet a = refined(level), b = other.refined(level);
    for (const auto& r : a.runs_)
      if (b.count_in(r) != r.length()) return false;
    return true;
  }

  friend bool operator==(const DyadicSet& a, const DyadicSet& b) {
    return a.level_ == b.level_ && a.runs_ == b.runs_;
  }

 private:
  int level_ = 0;
  std::vector<IndexRun> runs_;
};

/// Ordered run map backing the live survivor set. Runs are stored at a
/// fixed storage level so that refinement to any coarser logical level is
/// free; removals cost O(log R + k).
class RunSet {
 public:
  RunSet() = default;

  RunSet(const DyadicCell& window, int storage_level) : level_(storage_level) {
    require_level(storage_level, "sieve");
    const IndexRun span = window.span_at(storage_level);
    runs_.emplace(span.lo, span.hi);
    count_ = span.length();
  }

  int storage_level() const noexcept { return level_; }
  CellIndex count() const noexcept { return count_; }
  std::size_t run_count() const noexcept { return runs_.size(); }
  bool empty() const noexcept { return runs_.empty(); }

  /// Raises the storage level (rescales every run).
  void rescale(int level) {
    if (level <= level_) return;
    require_level(level, "sieve");
    const int shift = level - level_;
    std::map<CellIndex, CellIndex> next;
    for (const auto& [lo, hi] : runs_) next.emplace_hint(next.end(), lo << shift, hi << shift);
    runs_.swap(next);
    count_ <<= shift;
    level_ = level;
  }

  /// Removes [lo, hi) given in storage coordinates; returns the number of
  /// storage cells actually removed.
  CellIndex erase(CellIndex lo, CellIndex hi) {
    if (lo >= hi || runs_.empty()) return 0;
    CellIndex removed = 0;
    auto it = runs_.upper_bound(lo);
    if (it != runs_.begin()) {
      auto prev = std::prev(it);
      if (prev->second > lo) it = prev;
    }
    while (it != runs_.end() && it->first < hi) {
      const CellIndex rlo = it->first, rhi = it->second;
      const CellIndex cut_lo = std::max(rlo, lo), cut_hi = std::min(rhi, hi);
      removed += cut_hi - cut_lo;
      it = runs_.erase(it);
      if (rlo < cut_lo) runs_.emplace_hint(it, rlo, cut_lo);
      if (cut_hi < rhi) {
        it = runs_.emplace_hint(it, cut_hi, rhi);
        ++it;
      }
    }
    count_ -= removed;
    return removed;
  }

  /// Removes a run of cells given at a coarser logical level.
  CellIndex erase_at(int level, const IndexRun& cells) {
    const int shift = level_ - level;
    return erase(cells.lo << shift, cells.hi << shift) >> shift;
  }

  /// Snapshot at a logical level <= storage level. Runs must be aligned to
  /// that level, which holds for every level the sieve has reached.
  DyadicSet snapshot(int level) const {
    if (level > level_) {
      RunSet copy = *this;
      copy.rescale(level);
      return copy.snapshot(level);
    }
    const int shift = level_ - level;
    std::vector<IndexRun> runs;
    runs.reserve(runs_.size());
    for (const auto& [lo, hi] : runs_) {
      assert(((lo | hi) & ((CellIndex{1} << shift) - 1)) == 0);
      runs.push_back({lo >> shift, hi >> shift});
    }
    return DyadicSet::from_runs(level, std::move(runs));
  }

  /// The part of this set inside `window`, as a new run set.
  RunSet restricted(const DyadicCell& window) const {
    RunSet out;
    out.level_ = std::max(level_, window.level);
    RunSet src = *this;
    src.rescale(out.level_);
    const IndexRun span = window.span_at(out.level_);
    auto it = src.runs_.upper_bound(span.lo);
    if (it != src.runs_.begin() && std::prev(it)->second > span.lo) --it;
    for (; it != src.runs_.end() && it->first < span.hi; ++it) {
      const CellIndex lo = std::max(it->first, span.lo), hi = std::min(it->second, span.hi);
      out.runs_.emplace_hint(out.runs_.end(), lo, hi);
      out.count_ += hi - lo;
    }
    return out;
  }

  template <class F>
  void for_each_run(F&& f) const {
    for (const auto& [lo, hi] : runs_) f(IndexRun{lo, hi});
  }

 private:
  int level_ = 0;
  std::map<CellIndex, CellIndex> runs_;
  CellIndex count_ = 0;
};

}  // namespace dsieve

#endif  // DSIEVE_DYADIC_HPP
