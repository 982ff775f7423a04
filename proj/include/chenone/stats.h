// include/chenone/stats.h

// Copyright 2026  The chenone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CHENONE_STATS_H_
#define CHENONE_STATS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "chenone/context.h"
#include "chenone/features.h"

namespace chenone {

/// Zeroth, first and second order statistics of a single diagonal Gaussian.
struct GaussStats {
  double count = 0.0;
  std::vector<double> sum;
  std::vector<double> sum_sq;

  GaussStats() = default;
  explicit GaussStats(int32_t dim) : sum(dim, 0.0), sum_sq(dim, 0.0) {}

  int32_t Dim() const { return static_cast<int32_t>(sum.size()); }
  void AddFrame(std::span<const float> x, double weight = 1.0);
  void Add(const GaussStats &other);
  /// Mean and (unfloored) variance; count must be positive.
  std::vector<double> Mean() const;
  std::vector<double> Variance() const;
};

/// Per-tri-context statistics, ordered by context.
class StatsTable {
 public:
  explicit StatsTable(int32_t dim = 0) : dim_(dim) {}

  int32_t dim() const { return dim_; }
  const std::map<TriContext, GaussStats> &rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }
  double TotalCount() const;

  void AddFrame(const TriContext &ctx, std::span<const float> x);
  /// Adds a whole row (used by readers and tests).
  void AddStats(const TriContext &ctx, const GaussStats &stats);

  /// Header `CFSTATS v1 dim=<D>`, then `left center right count sum... sumsq...`
  /// per row at 17 significant digits.
  void Write(std::ostream &os, const UnitInventory &inventory) const;
  static StatsTable Read(std::istream &is, const UnitInventory &inventory);
  static StatsTable ReadFile(const std::string &path, const UnitInventory &inventory);

 private:
  int32_t dim_;
  std::map<TriContext, GaussStats> rows_;
};

/// Hard-occupancy accumulation: frame t adds features.Row(t) to the row of
/// labels[t]. Throws kLengthMismatch when the lengths differ.
StatsTable Accumulate(std::span<const TriContext> labels, const Matrix &features);

/// Fieldwise sum over the union of keys. Throws kDimMismatch.
StatsTable Merge(const StatsTable &a, const StatsTable &b);

}  // namespace chenone

#endif  // CHENONE_STATS_H_
