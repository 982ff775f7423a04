// tests/unit/tree-test.cc

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

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "chenone/tree.h"
#include "test-util.h"

namespace chenone {
namespace {

using testing::FramesLogLik;
using testing::RelDiff;
using testing::ThrownCode;

GaussStats StatsOf(const std::vector<std::vector<double>> &frames) {
  GaussStats s(static_cast<int32_t>(frames.front().size()));
  for (const auto &f : frames) {
    std::vector<float> x(f.begin(), f.end());
    s.AddFrame(x);
  }
  return s;
}

std::vector<std::vector<double>> Normal(int n, std::vector<double> mean, double sd,
                                        std::mt19937_64 &rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::vector<double>> out(n, mean);
  for (auto &f : out)
    for (double &v : f) v = static_cast<float>(v + sd * z(rng));  // frames are stored as float
  return out;
}

class TreeTest : public ::testing::Test {
 protected:
  UnitInventory inv_ = UnitInventory::Graphemic();
  UnitId U(const std::string &n) const { return *inv_.ParseUnitName(n); }
  int32_t B(const std::string &n) const { return *inv_.FindBase(n); }
  TriContext C(const std::string &l, const std::string &c, const std::string &r) const {
    return {l.empty() ? kNoContext : U(l), U(c), r.empty() ? kNoContext : U(r)};
  }
};

TEST(SingleGaussLogLik, OneFrameFloorsVariance) {
  GaussStats s(1);
  std::vector<float> x{0.7f};
  s.AddFrame(x);
  double expected = -0.5 * (std::log(2.0 * std::numbers::pi * 1e-4) + 1.0);
  EXPECT_NEAR(SingleGaussLogLik(s), expected, 1e-12);
  EXPECT_NEAR(SingleGaussLogLik(s), 3.18623, 1e-5);
}

TEST(SingleGaussLogLik, DuplicatingFramesDoubles) {
  std::mt19937_64 rng(1);
  auto frames = Normal(50, {1.0, -2.0, 0.5}, 1.5, rng);
  GaussStats once = StatsOf(frames);
  GaussStats twice = once;
  twice.Add(once);
  EXPECT_NEAR(SingleGaussLogLik(twice), 2.0 * SingleGaussLogLik(once),
              1e-9 * std::abs(SingleGaussLogLik(once)));
  EXPECT_LE(RelDiff(SingleGaussLogLik(once), FramesLogLik(frames)), 1e-9);
}

TEST(SingleGaussLogLik, ZeroCount) {
  EXPECT_EQ(ThrownCode([] { SingleGaussLogLik(GaussStats(2)); }), ErrorCode::kZeroCount);
}

TEST_F(TreeTest, SplitGainOfIdenticalHalvesIsZero) {
  StatsTable t(1);
  // the same multiset of frames under both contexts
  for (float v : {-1.0f, 0.0f, 1.0f, 2.0f, 5.0f, -3.0f, 0.25f, 0.5f, 1.5f, -0.5f, 4.0f, 2.5f}) {
    std::vector<float> x{v};
    t.AddFrame(C("b", "a", ""), x);
    t.AddFrame(C("c", "a", ""), x);
  }
  std::vector<const StatsRow *> rows;
  for (const auto &row : t.rows()) rows.push_back(&row);
  Question q{QuestionSlot::kLeft, {B("b")}};
  EXPECT_LT(std::abs(SplitGain(rows, q, 1.0)), 1e-6);
}

TEST_F(TreeTest, SplitGainMatchesClosedForm) {
  std::mt19937_64 rng(2);
  auto low = Normal(100, {0.0}, 1.0, rng), high = Normal(100, {10.0}, 1.0, rng);
  StatsTable t(1);
  t.AddStats(C("b", "a", ""), StatsOf(low));
  t.AddStats(C("c", "a", ""), StatsOf(high));
  std::vector<const StatsRow *> rows;
  for (const auto &row : t.rows()) rows.push_back(&row);
  auto all = low;
  all.insert(all.end(), high.begin(), high.end());
  double oracle = FramesLogLik(low) + FramesLogLik(high) - FramesLogLik(all);
  double gain = SplitGain(rows, {QuestionSlot::kLeft, {B("b")}}, 1.0);
  EXPECT_LE(RelDiff(gain, oracle), 1e-9);
  EXPECT_GT(gain, 100.0);
}

TEST_F(TreeTest, SplitGainDegenerate) {
  StatsTable t(1);
  std::vector<float> x{1.0f};
  for (int i = 0; i < 20; ++i) t.AddFrame(C("b", "a", ""), x);
  std::vector<const StatsRow *> rows;
  for (const auto &row : t.rows()) rows.push_back(&row);
  EXPECT_EQ(SplitGain(rows, {QuestionSlot::kLeft, {B("z")}}, 1.0), -testing::kInf);
  // below min_count on one side
  for (int i = 0; i < 3; ++i) t.AddFrame(C("c", "a", ""), x);
  rows.clear();
  for (const auto &row : t.rows()) rows.push_back(&row);
  EXPECT_EQ(SplitGain(rows, {QuestionSlot::kLeft, {B("c")}}, 10.0), -testing::kInf);
  EXPECT_GT(SplitGain(rows, {QuestionSlot::kLeft, {B("c")}}, 1.0), -testing::kInf);
}

TEST_F(TreeTest, QuestionsForOneBase) {
  StatsTable t(1);
  std::vector<float> x{1.0f};
  t.AddFrame(C("a", "a", "a"), x);
  auto qs = GenerateQuestions(t);
  std::vector<Question> want{{QuestionSlot::kLeft, {B("a")}},
                             {QuestionSlot::kRight, {B("a")}},
                             {QuestionSlot::kPosition, {}}};
  EXPECT_EQ(qs, want);
  EXPECT_EQ(ThrownCode([] { GenerateQuestions(StatsTable(1)); }), ErrorCode::kEmptyStats);
}

TEST_F(TreeTest, QuestionsForThreeBases) {
  std::mt19937_64 rng(3);
  StatsTable t(2);
  // a and e nearly identical on the left, t far away
  std::map<std::string, std::vector<std::vector<double>>> frames{
      {"a", Normal(200, {0.0, 0.0}, 1.0, rng)},
      {"e", Normal(200, {0.1, 0.0}, 1.0, rng)},
      {"t", Normal(200, {8.0, -8.0}, 1.0, rng)}};
  for (const auto &[l, f] : frames) t.AddStats(C(l, "o", ""), StatsOf(f));
  auto qs = GenerateQuestions(t);
  int per_slot[4] = {0, 0, 0, 0};
  for (const auto &q : qs) ++per_slot[static_cast<int>(q.slot)];
  EXPECT_LE(per_slot[0], 3 + 2);
  EXPECT_EQ(per_slot[1], 0);  // no right contexts observed
  EXPECT_EQ(per_slot[3], 1);

  // exhaustive pair evaluation: the cheapest merge
  std::vector<std::string> names{"a", "e", "t"};
  double best_loss = testing::kInf;
  std::vector<int32_t> best_pair;
  for (size_t i = 0; i < names.size(); ++i)
    for (size_t j = i + 1; j < names.size(); ++j) {
      auto pooled = frames[names[i]];
      pooled.insert(pooled.end(), frames[names[j]].begin(), frames[names[j]].end());
      double loss = FramesLogLik(frames[names[i]]) + FramesLogLik(frames[names[j]]) -
                    FramesLogLik(pooled);
      if (loss < best_loss) {
        best_loss = loss;
        best_pair = {B(names[i]), B(names[j])};
      }
    }
  std::sort(best_pair.begin(), best_pair.end());
  EXPECT_EQ(best_pair, (std::vector<int32_t>{B("a"), B("e")}));
  std::vector<std::vector<int32_t>> pairs;
  for (const auto &q : qs)
    if (q.slot == QuestionSlot::kLeft && q.members.size() == 2) pairs.push_back(q.members);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0], best_pair);
}

// Two generating Gaussians: left in {t, d} and left in {i, o}.
StatsTable TwoClusterStats(const TreeTest &, std::mt19937_64 &rng, const UnitInventory &inv,
                           int frames_per_context = 500) {
  StatsTable t(2);
  auto u = [&](const char *n) { return *inv.ParseUnitName(n); };
  for (const char *l : {"t", "d"})
    t.AddStats({u(l), u("a"), kNoContext}, StatsOf(Normal(frames_per_context, {-5.0, 0.0}, 1.0, rng)));
  for (const char *l : {"i", "o"})
    t.AddStats({u(l), u("a"), kNoContext}, StatsOf(Normal(frames_per_context, {5.0, 0.0}, 1.0, rng)));
  return t;
}

TEST_F(TreeTest, GrowRecoversTwoClusters) {
  std::mt19937_64 rng(4);
  StatsTable t = TwoClusterStats(*this, rng, inv_);
  TreeConfig config;
  config.max_leaves = 100;
  auto map = GrowTree(t, GenerateQuestions(t), config);
  EXPECT_EQ(map.NumLeaves(), 2);
  EXPECT_EQ(map.Tie(C("t", "a", "")), map.Tie(C("d", "a", "")));
  EXPECT_EQ(map.Tie(C("i", "a", "")), map.Tie(C("o", "a", "")));
  EXPECT_NE(map.Tie(C("t", "a", "")), map.Tie(C("i", "a", "")));
  // contexts never seen still land on a leaf
  int32_t leaf = map.Tie(C("z", "a", "q"));
  EXPECT_GE(leaf, 0);
  EXPECT_LT(leaf, 2);
  EXPECT_EQ(map.SilenceId(), 2);
  EXPECT_EQ(map.GarbageId(), 3);
}

TEST_F(TreeTest, NoSplitsAtRootCount) {
  std::mt19937_64 rng(5);
  StatsTable t = TwoClusterStats(*this, rng, inv_);
  std::vector<float> x{0.0f, 0.0f};
  for (int i = 0; i < 20; ++i) t.AddFrame(C("", "b_WB", ""), x);
  TreeConfig config;
  config.max_leaves = 2;  // a and b_WB
  auto map = GrowTree(t, GenerateQuestions(t), config);
  EXPECT_TRUE(map.splits().empty());
  EXPECT_EQ(map.Tie(C("t", "a", "")), map.Tie(C("i", "a", "")));
  EXPECT_NE(map.Tie(C("t", "a", "")), map.Tie(C("", "b_WB", "")));

  config.max_leaves = 1;
  EXPECT_EQ(ThrownCode([&] { GrowTree(t, GenerateQuestions(t), config); }),
            ErrorCode::kInvalidArgument);
  config.max_leaves = 100;
  config.min_gain = testing::kInf;
  EXPECT_TRUE(GrowTree(t, GenerateQuestions(t), config).splits().empty());
}

TEST_F(TreeTest, UnknownCenter) {
  std::mt19937_64 rng(6);
  StatsTable t = TwoClusterStats(*this, rng, inv_);
  TreeConfig config;
  auto map = GrowTree(t, GenerateQuestions(t), config);
  EXPECT_EQ(ThrownCode([&] { map.Tie(C("", "q", "")); }), ErrorCode::kUnknownCenterUnit);
  EXPECT_EQ(map.Tie(C("", "SIL", "")), map.SilenceId());
  EXPECT_EQ(ThrownCode([] { GrowTree(StatsTable(2), {}, TreeConfig{}); }), ErrorCode::kEmptyStats);
}

// Random stats over a handful of centers and contexts.
StatsTable RandomStats(std::mt19937_64 &rng, int32_t dim) {
  auto inv = UnitInventory::Graphemic(CaseMode::kLowercase);
  std::uniform_int_distribution<int> letter(0, 5), means(-4, 4), frames(5, 80), edge(0, 3);
  StatsTable t(dim);
  for (int i = 0; i < 60; ++i) {
    auto unit = [&](bool wb) {
      auto base = *inv.FindBase(std::string(1, static_cast<char>('a' + letter(rng))));
      return UnitInventory::MakeUnit(base, wb ? Position::kWordBoundary : Position::kInternal);
    };
    TriContext ctx{edge(rng) ? unit(false) : kNoContext, unit(edge(rng) == 0),
                   edge(rng) ? unit(false) : kNoContext};
    std::vector<double> mean(dim);
    for (auto &m : mean) m = means(rng);
    t.AddStats(ctx, StatsOf(Normal(frames(rng), mean, 1.0, rng)));
  }
  return t;
}

TEST(TreeProperties, GainsLeavesAndRefinement) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    StatsTable t = RandomStats(rng, 2);
    auto qs = GenerateQuestions(t);
    TreeConfig small, large;
    small.min_gain = large.min_gain = 5.0;
    small.max_leaves = 20;
    large.max_leaves = 40;
    auto a = GrowTree(t, qs, small), b = GrowTree(t, qs, large);
    EXPECT_LE(a.NumLeaves(), small.max_leaves);
    // monotone refinement
    ASSERT_LE(a.splits().size(), b.splits().size());
    for (size_t i = 0; i < a.splits().size(); ++i) EXPECT_EQ(a.splits()[i], b.splits()[i]);
    for (const auto &s : b.splits()) EXPECT_GE(s.gain, large.min_gain);
    // leaf partition
    std::vector<double> leaf_count(b.NumLeaves(), 0.0);
    for (const auto &[ctx, s] : t.rows()) leaf_count[b.Tie(ctx)] += s.count;
    double sum = 0.0;
    for (double c : leaf_count) sum += c;
    EXPECT_NEAR(sum, t.TotalCount(), 1e-9);
    // no leaf mixes word-boundary and internal centers
    std::map<int32_t, std::set<Position>> positions;
    for (const auto &[ctx, s] : t.rows())
      positions[b.Tie(ctx)].insert(UnitInventory::PositionOf(ctx.center));
    for (const auto &[leaf, p] : positions) EXPECT_EQ(p.size(), 1u) << "leaf " << leaf;
  }
}

TEST(TreeProperties, SharedWbRoot) {
  std::mt19937_64 rng(8);
  StatsTable t = RandomStats(rng, 2);
  TreeConfig shared;
  shared.share_wb_root = true;
  shared.max_leaves = 6;  // one root per letter
  auto map = GrowTree(t, GenerateQuestions(t), shared);
  EXPECT_TRUE(map.share_wb_root());
  for (const auto &root : map.roots()) EXPECT_FALSE(root.position.has_value());
}

TEST(TreeFile, RoundTrip) {
  std::mt19937_64 rng(9);
  auto inv = UnitInventory::Graphemic(CaseMode::kLowercase);
  StatsTable t = RandomStats(rng, 2);
  TreeConfig config;
  config.min_gain = 1.0;
  config.max_leaves = 30;
  auto map = GrowTree(t, GenerateQuestions(t), config);
  std::ostringstream os;
  map.Write(os, inv);
  std::string text = os.str();
  EXPECT_EQ(text.rfind("CFTREE v1 leaves=" + std::to_string(map.NumLeaves()) + "\n", 0), 0u);
  EXPECT_NE(text.find("ROOT a "), std::string::npos);
  std::istringstream is(text);
  auto back = TiedStateMap::Read(is, inv);
  EXPECT_TRUE(back == map);
  std::ostringstream again;
  back.Write(again, inv);
  EXPECT_EQ(again.str(), text);
  for (const auto &[ctx, s] : t.rows()) EXPECT_EQ(back.Tie(ctx), map.Tie(ctx));
  std::istringstream bad("CFTREE v1 leaves=3\nROOT a wb-split\nL 0\n");
  EXPECT_EQ(ThrownCode([&] { TiedStateMap::Read(bad, inv); }), ErrorCode::kMalformedLine);
}

TEST(TiedStateMap, ContextIndependent) {
  auto inv = UnitInventory::Graphemic();
  std::vector<UnitId> centers;
  for (const char *n : {"a", "b_WB", "a_WB", "c"}) centers.push_back(*inv.ParseUnitName(n));
  auto map = TiedStateMap::ContextIndependent(centers, false);
  EXPECT_EQ(map.NumLeaves(), 4);
  std::set<int32_t> leaves;
  for (UnitId c : centers) {
    leaves.insert(map.Tie({kNoContext, c, kNoContext}));
    EXPECT_EQ(map.Tie({*inv.ParseUnitName("z"), c, *inv.ParseUnitName("q")}),
              map.Tie({kNoContext, c, kNoContext}));
  }
  EXPECT_EQ(leaves.size(), 4u);
}

}  // namespace
}  // namespace chenone
