// src/stats.cc

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

#include "chenone/stats.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

void GaussStats::AddFrame(std::span<const float> x, double weight) {
  CHENONE_ASSERT(static_cast<int32_t>(x.size()) == Dim());
  count += weight;
  for (size_t d = 0; d < x.size(); ++d) {
    double v = x[d];
    sum[d] += weight * v;
    sum_sq[d] += weight * v * v;
  }
}

void GaussStats::Add(const GaussStats &other) {
  if (Dim() == 0 && count == 0.0) {
    sum.assign(other.Dim(), 0.0);
    sum_sq.assign(other.Dim(), 0.0);
  }
  if (other.Dim() != Dim())
    CHENONE_ERR(kDimMismatch) << "adding dim " << other.Dim() << " to " << Dim();
  count += other.count;
  for (int32_t d = 0; d < Dim(); ++d) {
    sum[d] += other.sum[d];
    sum_sq[d] += other.sum_sq[d];
  }
}

std::vector<double> GaussStats::Mean() const {
  if (!(count > 0.0)) CHENONE_ERR(kZeroCount) << "mean of empty statistics";
  std::vector<double> m(sum.size());
  for (size_t d = 0; d < sum.size(); ++d) m[d] = sum[d] / count;
  return m;
}

std::vector<double> GaussStats::Variance() const {
  if (!(count > 0.0)) CHENONE_ERR(kZeroCount) << "variance of empty statistics";
  std::vector<double> v(sum.size());
  for (size_t d = 0; d < sum.size(); ++d) {
    double mean = sum[d] / count;
    v[d] = sum_sq[d] / count - mean * mean;
  }
  return v;
}

double StatsTable::TotalCount() const {
  double total = 0.0;
  for (const auto &[ctx, s] : rows_) total += s.count;
  return total;
}

void StatsTable::AddFrame(const TriContext &ctx, std::span<const float> x) {
  if (static_cast<int32_t>(x.size()) != dim_)
    CHENONE_ERR(kDimMismatch) << "frame dim " << x.size() << " vs table " << dim_;
  auto it = rows_.try_emplace(ctx, dim_).first;
  it->second.AddFrame(x);
}

void StatsTable::AddStats(const TriContext &ctx, const GaussStats &stats) {
  if (stats.Dim() != dim_)
    CHENONE_ERR(kDimMismatch) << "row dim " << stats.Dim() << " vs table " << dim_;
  auto it = rows_.try_emplace(ctx, dim_).first;
  it->second.Add(stats);
}

void StatsTable::Write(std::ostream &os, const UnitInventory &inventory) const {
  os << "CFSTATS v1 dim=" << dim_ << '\n';
  auto slot = [&](UnitId u) {
    return u == kNoContext ? std::string(kNoContextSymbol) : inventory.UnitName(u);
  };
  for (const auto &[ctx, s] : rows_) {
    os << slot(ctx.left) << ' ' << inventory.UnitName(ctx.center) << ' '
       << slot(ctx.right) << ' ' << FormatDouble(s.count);
    for (double v : s.sum) os << ' ' << FormatDouble(v);
    for (double v : s.sum_sq) os << ' ' << FormatDouble(v);
    os << '\n';
  }
}

StatsTable StatsTable::Read(std::istream &is, const UnitInventory &inventory) {
  std::string line;
  if (!std::getline(is, line))
    CHENONE_ERR(kMalformedLine) << "stats file: missing header";
  std::vector<std::string> header = SplitWhitespace(line);
  long long dim = 0;
  if (header.size() != 3 || header[0] != "CFSTATS" || header[1] != "v1" ||
      header[2].rfind("dim=", 0) != 0 || !ParseInt(header[2].substr(4), &dim) ||
      dim < 0)
    CHENONE_ERR(kMalformedLine) << "stats file: bad header '" << line << "'";
  StatsTable table(static_cast<int32_t>(dim));
  int64_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> f = SplitWhitespace(line);
    if (f.size() != 4 + 2 * size_t(dim))
      CHENONE_ERR(kMalformedLine) << "stats line " << line_no << ": expected "
                                  << 4 + 2 * dim << " fields";
    auto ctx = ParseContextName(f[0] + "/" + f[1] + "/" + f[2], inventory);
    if (!ctx) CHENONE_ERR(kUnknownSymbol) << "stats line " << line_no;
    GaussStats s(static_cast<int32_t>(dim));
    bool ok = ParseDouble(f[3], &s.count);
    for (long long d = 0; d < dim; ++d) {
      ok = ok && ParseDouble(f[4 + d], &s.sum[d]);
      ok = ok && ParseDouble(f[4 + dim + d], &s.sum_sq[d]);
    }
    if (!ok) CHENONE_ERR(kMalformedLine) << "stats line " << line_no;
    table.AddStats(*ctx, s);
  }
  return table;
}

StatsTable StatsTable::ReadFile(const std::string &path,
                                const UnitInventory &inventory) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open stats " << path;
  return Read(is, inventory);
}

StatsTable Accumulate(std::span<const TriContext> labels, const Matrix &features) {
  if (static_cast<int32_t>(labels.size()) != features.NumRows())
    CHENONE_ERR(kLengthMismatch) << labels.size() << " labels for "
                                 << features.NumRows() << " frames";
  StatsTable table(features.NumCols());
  for (size_t t = 0; t < labels.size(); ++t)
    table.AddFrame(labels[t], features.Row(static_cast<int32_t>(t)));
  return table;
}

StatsTable Merge(const StatsTable &a, const StatsTable &b) {
  // An empty table with dim 0 merges with anything.
  if (a.empty() && a.dim() == 0) return b;
  if (b.empty() && b.dim() == 0) return a;
  if (a.dim() != b.dim())
    CHENONE_ERR(kDimMismatch) << "merging dim " << a.dim() << " and " << b.dim();
  StatsTable out = a;
  for (const auto &[ctx, s] : b.rows()) out.AddStats(ctx, s);
  return out;
}

}  // namespace chenone
