// tests/unit/stats-test.cc

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


#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "chenone/stats.h"
#include "test-util.h"

namespace chenone {
namespace {

using testing::RelDiff;
using testing::ThrownCode;

void ExpectTablesNear(const StatsTable &a, const StatsTable &b, double tol) {
  ASSERT_EQ(a.dim(), b.dim());
  ASSERT_EQ(a.rows().size(), b.rows().size());
  for (const auto &[ctx, s] : a.rows()) {
    auto it = b.rows().find(ctx);
    ASSERT_NE(it, b.rows().end());
    EXPECT_LE(RelDiff(s.count, it->second.count), tol);
    for (int32_t d = 0; d < a.dim(); ++d) {
      EXPECT_LE(RelDiff(s.sum[d], it->second.sum[d]), tol);
      EXPECT_LE(RelDiff(s.sum_sq[d], it->second.sum_sq[d]), tol);
    }
  }
}

struct Labeled {
  std::vector<TriContext> labels;
  Matrix feats;
};

Labeled RandomAlignment(int32_t frames, int32_t dim, std::mt19937_64 &rng) {
  std::uniform_int_distribution<UnitId> unit(2, 9);
  std::uniform_int_distribution<int> edge(0, 2);
  Labeled out;
  for (int32_t t = 0; t < frames; ++t) {
    TriContext ctx{edge(rng) ? unit(rng) : kNoContext, unit(rng), edge(rng) ? unit(rng) : kNoContext};
    out.labels.push_back(ctx);
  }
  out.feats = testing::RandomMatrix(frames, dim, rng, -5.0, 5.0);
  return out;
}

TEST(Accumulate, Empty) {
  StatsTable t = Accumulate({}, Matrix(0, 3));
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.TotalCount(), 0.0);
}

TEST(Accumulate, HandArithmetic) {
  auto inv = UnitInventory::Graphemic();
  TriContext ctx{kNoContext, *inv.ParseUnitName("a_WB"), kNoContext};
  std::vector<TriContext> labels(3, ctx);
  StatsTable t = Accumulate(labels, Matrix::FromRows({{1}, {2}, {3}}));
  ASSERT_EQ(t.rows().size(), 1u);
  const GaussStats &s = t.rows().at(ctx);
  EXPECT_EQ(s.count, 3.0);
  EXPECT_EQ(s.sum, std::vector<double>{6.0});
  EXPECT_EQ(s.sum_sq, std::vector<double>{14.0});
  EXPECT_DOUBLE_EQ(s.Mean()[0], 2.0);
  EXPECT_DOUBLE_EQ(s.Variance()[0], 2.0 / 3.0);
}

TEST(Accumulate, LengthMismatch) {
  std::vector<TriContext> labels(5);
  EXPECT_EQ(ThrownCode([&] { Accumulate(labels, Matrix(4, 1)); }), ErrorCode::kLengthMismatch);
}

TEST(GaussStats, ZeroCount) {
  GaussStats s(2);
  EXPECT_EQ(ThrownCode([&] { s.Mean(); }), ErrorCode::kZeroCount);
  EXPECT_EQ(s.sum, (std::vector<double>{0.0, 0.0}));
}

TEST(Merge, IdentityAndDoubling) {
  std::mt19937_64 rng(1);
  auto a = RandomAlignment(200, 3, rng);
  StatsTable s = Accumulate(a.labels, a.feats);
  ExpectTablesNear(Merge(StatsTable(), s), s, 0.0);
  ExpectTablesNear(Merge(StatsTable(3), s), s, 0.0);
  StatsTable doubled = Merge(s, s);
  for (const auto &[ctx, row] : doubled.rows()) {
    const GaussStats &one = s.rows().at(ctx);
    EXPECT_EQ(row.count, 2 * one.count);
    for (int32_t d = 0; d < 3; ++d) {
      EXPECT_EQ(row.sum[d], 2 * one.sum[d]);
      EXPECT_EQ(row.sum_sq[d], 2 * one.sum_sq[d]);
    }
  }
}

TEST(Merge, DimMismatch) {
  std::mt19937_64 rng(2);
  auto a = RandomAlignment(5, 2, rng);
  auto b = RandomAlignment(5, 3, rng);
  StatsTable sa = Accumulate(a.labels, a.feats), sb = Accumulate(b.labels, b.feats);
  EXPECT_EQ(ThrownCode([&] { Merge(sa, sb); }), ErrorCode::kDimMismatch);
}

TEST(Merge, ShardsMatchSinglePass) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = RandomAlignment(1000, 4, rng);
    StatsTable whole = Accumulate(a.labels, a.feats);
    StatsTable merged;
    for (int shard = 0; shard < 4; ++shard) {
      int32_t b = shard * 250, e = b + 250;
      std::vector<TriContext> labels(a.labels.begin() + b, a.labels.begin() + e);
      merged = Merge(merged, Accumulate(labels, a.feats.RowRange(b, e)));
    }
    ExpectTablesNear(merged, whole, 1e-9);
    EXPECT_NEAR(merged.TotalCount(), 1000.0, 1e-9);
  }
}

TEST(Merge, CommutativeAndAssociative) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = RandomAlignment(100, 2, rng), y = RandomAlignment(100, 2, rng),
         z = RandomAlignment(100, 2, rng);
    StatsTable a = Accumulate(x.labels, x.feats), b = Accumulate(y.labels, y.feats),
               c = Accumulate(z.labels, z.feats);
    ExpectTablesNear(Merge(a, b), Merge(b, a), 1e-9);
    ExpectTablesNear(Merge(Merge(a, b), c), Merge(a, Merge(b, c)), 1e-9);
  }
}

TEST(StatsTable, VarianceNonNegative) {
  std::mt19937_64 rng(5);
  auto a = RandomAlignment(2000, 3, rng);
  StatsTable t = Accumulate(a.labels, a.feats);
  for (const auto &[ctx, s] : t.rows())
    for (double v : s.Variance()) EXPECT_GE(v, -1e-9);
}

TEST(StatsTable, FileRoundTrip) {
  auto inv = UnitInventory::Graphemic();
  std::mt19937_64 rng(6);
  auto a = RandomAlignment(300, 2, rng);
  StatsTable t = Accumulate(a.labels, a.feats);
  std::ostringstream os;
  t.Write(os, inv);
  std::istringstream is(os.str());
  StatsTable back = StatsTable::Read(is, inv);
  ExpectTablesNear(back, t, 0.0);
  std::ostringstream again;
  back.Write(again, inv);
  EXPECT_EQ(again.str(), os.str());
  EXPECT_EQ(os.str().rfind("CFSTATS v1 dim=2\n", 0), 0u);
}

TEST(StatsTable, RowFormat) {
  auto inv = UnitInventory::Graphemic();
  StatsTable t(1);
  TriContext ctx{kNoContext, *inv.ParseUnitName("a"), *inv.ParseUnitName("b_WB")};
  std::vector<float> x{0.5f};
  t.AddFrame(ctx, x);
  t.AddFrame(ctx, x);
  std::ostringstream os;
  t.Write(os, inv);
  EXPECT_EQ(os.str(), "CFSTATS v1 dim=1\n<none> a b_WB 2 1 0.5\n");
}

TEST(StatsTable, MalformedInput) {
  auto inv = UnitInventory::Graphemic();
  std::istringstream no_header("<none> a <none> 1 1 1\n");
  EXPECT_EQ(ThrownCode([&] { StatsTable::Read(no_header, inv); }), ErrorCode::kMalformedLine);
  std::istringstream short_row("CFSTATS v1 dim=1\n<none> a <none> 1 1\n");
  EXPECT_EQ(ThrownCode([&] { StatsTable::Read(short_row, inv); }), ErrorCode::kMalformedLine);
  std::istringstream bad_unit("CFSTATS v1 dim=1\n<none> % <none> 1 1 1\n");
  EXPECT_EQ(ThrownCode([&] { StatsTable::Read(bad_unit, inv); }), ErrorCode::kUnknownSymbol);
}

}  // namespace
}  // namespace chenone
