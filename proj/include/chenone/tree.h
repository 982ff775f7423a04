// include/chenone/tree.h

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

#ifndef CHENONE_TREE_H_
#define CHENONE_TREE_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chenone/context.h"
#include "chenone/stats.h"

namespace chenone {

inline constexpr double kVarianceFloor = 1e-4;

enum class QuestionSlot { kLeft = 0, kRight = 1, kCenter = 2, kPosition = 3 };

const char *QuestionSlotName(QuestionSlot slot);

/// Set-membership test on one slot of a tri-context. Members are base unit
/// indices (sorted, unique); a Position question has no members and asks
/// whether the center is the word-boundary variant. The sentinel never
/// belongs to a Left/Right set.
struct Question {
  QuestionSlot slot = QuestionSlot::kLeft;
  std::vector<int32_t> members;

  bool Answer(const TriContext &ctx) const;
  auto operator<=>(const Question &) const = default;
};

struct TreeConfig {
  int32_t max_leaves = 500;
  double min_gain = 20.0;
  double min_count = 10.0;
  bool share_wb_root = false;
  double variance_floor = kVarianceFloor;
};

/// Maximum-likelihood log-likelihood of the data summarized by `stats`
/// under its own diagonal Gaussian:
///   -0.5 * count * sum_d [log(2*pi*var_d) + 1],
/// with each variance floored. Throws kZeroCount.
double SingleGaussLogLik(const GaussStats &stats,
                         double variance_floor = kVarianceFloor);

using StatsRow = std::pair<const TriContext, GaussStats>;

/// L(yes) + L(no) - L(parent) for `question` over `rows`; -infinity when
/// either side holds fewer than `min_count` frames.
double SplitGain(const std::vector<const StatsRow *> &rows,
                 const Question &question, double min_count,
                 double variance_floor = kVarianceFloor);

/// Agglomerative, likelihood-driven question sets for the Left and Right
/// slots (every singleton and every merge result), plus the Position
/// question. Sorted and unique. Throws kEmptyStats.
std::vector<Question> GenerateQuestions(const StatsTable &stats,
                                        double variance_floor = kVarianceFloor);

struct TreeNode {
  Question question;
  int32_t yes = -1;
  int32_t no = -1;
  double gain = 0.0;
  int32_t leaf = -1;

  bool IsLeaf() const { return yes < 0; }
};

/// One tree per center group. `position` is empty when the word-boundary
/// and internal variants share the root.
struct TreeRoot {
  int32_t base = -1;
  std::optional<Position> position;
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct SplitRecord {
  int32_t root;
  Question question;
  double gain;

  bool operator==(const SplitRecord &) const = default;
};

/// Decision-tree forest mapping tri-contexts to tied states. Leaves are
/// numbered 0..L-1 over the whole forest; silence and garbage are not
/// clustered and take the fixed ids L and L+1.
class TiedStateMap {
 public:
  TiedStateMap() = default;
  TiedStateMap(std::vector<TreeRoot> roots, bool share_wb_root);

  /// One leaf per center unit of `centers` (projected units); pure CI tying.
  static TiedStateMap ContextIndependent(const std::vector<UnitId> &centers,
                                         bool share_wb_root);

  int32_t NumLeaves() const { return num_leaves_; }
  int32_t NumTiedStates() const { return num_leaves_ + 2; }
  int32_t SilenceId() const { return num_leaves_; }
  int32_t GarbageId() const { return num_leaves_ + 1; }
  bool share_wb_root() const { return share_wb_root_; }
  const std::vector<TreeRoot> &roots() const { return roots_; }
  /// Splits in the order they were applied by GrowTree (empty otherwise).
  const std::vector<SplitRecord> &splits() const { return splits_; }

  /// Root index for a center unit, or -1.
  int32_t FindRoot(UnitId center) const;
  /// Throws kUnknownCenterUnit when the center has no tree.
  int32_t Tie(const TriContext &ctx) const;
  /// Leaf id and the path of node indices (root first) for a context.
  int32_t Descend(const TriContext &ctx, std::vector<int32_t> *path) const;

  /// Header `CFTREE v1 leaves=<L>`, then per root `ROOT <center>
  /// <wb-shared|wb-split>` followed by pre-order `N <slot> <members> <gain>`
  /// and `L <id>` lines.
  void Write(std::ostream &os, const UnitInventory &inventory) const;
  static TiedStateMap Read(std::istream &is, const UnitInventory &inventory);
  static TiedStateMap ReadFile(const std::string &path,
                               const UnitInventory &inventory);

  bool operator==(const TiedStateMap &other) const;

 private:
  friend TiedStateMap GrowTree(const StatsTable &, const std::vector<Question> &,
                               const TreeConfig &);
  void Index();
  int32_t RootKey(int32_t base, Position pos) const;

  std::vector<TreeRoot> roots_;
  bool share_wb_root_ = false;
  int32_t num_leaves_ = 0;
  std::vector<int32_t> root_of_unit_;  // indexed by UnitId
  std::vector<SplitRecord> splits_;
};

/// Greedy best-first growth over all root groups. Throws kEmptyStats and
/// kInvalidArgument (max_leaves below the number of roots).
TiedStateMap GrowTree(const StatsTable &stats,
                      const std::vector<Question> &questions,
                      const TreeConfig &config);

/// Tie(map, ctx) convenience.
inline int32_t Tie(const TiedStateMap &map, const TriContext &ctx) {
  return map.Tie(ctx);
}

}  // namespace chenone

#endif  // CHENONE_TREE_H_
