// src/tree.cc

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

#include "chenone/tree.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

const char *QuestionSlotName(QuestionSlot slot) {
  switch (slot) {
    case QuestionSlot::kLeft: return "Left";
    case QuestionSlot::kRight: return "Right";
    case QuestionSlot::kCenter: return "Center";
    case QuestionSlot::kPosition: return "Position";
  }
  return "Left";
}

namespace {

std::optional<QuestionSlot> ParseQuestionSlot(std::string_view s) {
  if (s == "Left") return QuestionSlot::kLeft;
  if (s == "Right") return QuestionSlot::kRight;
  if (s == "Center") return QuestionSlot::kCenter;
  if (s == "Position") return QuestionSlot::kPosition;
  return std::nullopt;
}

bool InSet(const std::vector<int32_t> &members, UnitId unit) {
  if (unit == kNoContext || UnitInventory::IsSpecial(unit)) return false;
  return std::binary_search(members.begin(), members.end(),
                            UnitInventory::BaseOf(unit));
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

bool Question::Answer(const TriContext &ctx) const {
  switch (slot) {
    case QuestionSlot::kLeft: return InSet(members, ctx.left);
    case QuestionSlot::kRight: return InSet(members, ctx.right);
    case QuestionSlot::kCenter: return InSet(members, ctx.center);
    case QuestionSlot::kPosition:
      return !UnitInventory::IsSpecial(ctx.center) &&
             UnitInventory::PositionOf(ctx.center) == Position::kWordBoundary;
  }
  return false;
}

double SingleGaussLogLik(const GaussStats &stats, double variance_floor) {
  if (!(stats.count > 0.0))
    CHENONE_ERR(kZeroCount) << "log-likelihood of empty statistics";
  const double n = stats.count;
  double acc = 0.0;
  for (int32_t d = 0; d < stats.Dim(); ++d) {
    double mean = stats.sum[d] / n;
    double var = std::max(stats.sum_sq[d] / n - mean * mean, variance_floor);
    acc += std::log(2.0 * std::numbers::pi * var) + 1.0;
  }
  return -0.5 * n * acc;
}

double SplitGain(const std::vector<const StatsRow *> &rows,
                 const Question &question, double min_count,
                 double variance_floor) {
  CHENONE_ASSERT(!rows.empty());
  const int32_t dim = rows.front()->second.Dim();
  GaussStats yes(dim), no(dim);
  for (const StatsRow *row : rows) {
    if (question.Answer(row->first))
      yes.Add(row->second);
    else
      no.Add(row->second);
  }
  if (yes.count < min_count || no.count < min_count || !(yes.count > 0.0) ||
      !(no.count > 0.0))
    return kNegInf;
  GaussStats parent = yes;
  parent.Add(no);
  return SingleGaussLogLik(yes, variance_floor) +
         SingleGaussLogLik(no, variance_floor) -
         SingleGaussLogLik(parent, variance_floor);
}

// ---------------------------------------------------------------------------
// Question generation

namespace {

struct Cluster {
  std::vector<int32_t> members;  // sorted
  GaussStats stats;
};

void ClusterSlot(const std::map<int32_t, GaussStats> &pooled, QuestionSlot slot,
                 double variance_floor, std::vector<Question> *out) {
  std::vector<Cluster> clusters;
  for (const auto &[base, stats] : pooled) {
    clusters.push_back({{base}, stats});
    out->push_back({slot, {base}});
  }
  while (clusters.size() > 1) {
    size_t best_i = 0, best_j = 1;
    double best_loss = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < clusters.size(); ++i) {
      double li = SingleGaussLogLik(clusters[i].stats, variance_floor);
      for (size_t j = i + 1; j < clusters.size(); ++j) {
        GaussStats merged = clusters[i].stats;
        merged.Add(clusters[j].stats);
        double loss = li + SingleGaussLogLik(clusters[j].stats, variance_floor) -
                      SingleGaussLogLik(merged, variance_floor);
        // Clusters stay sorted by smallest member, so the first strict
        // improvement is also the lexicographically smallest pair on ties.
        if (loss < best_loss) {
          best_loss = loss;
          best_i = i;
          best_j = j;
        }
      }
    }
    Cluster merged = clusters[best_i];
    merged.stats.Add(clusters[best_j].stats);
    merged.members.insert(merged.members.end(), clusters[best_j].members.begin(),
                          clusters[best_j].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    out->push_back({slot, merged.members});
    clusters.erase(clusters.begin() + best_j);
    clusters[best_i] = std::move(merged);
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster &a, const Cluster &b) {
                return a.members.front() < b.members.front();
              });
  }
}

}  // namespace

std::vector<Question> GenerateQuestions(const StatsTable &stats,
                                        double variance_floor) {
  std::map<int32_t, GaussStats> left, right;
  bool any = false;
  for (const auto &[ctx, s] : stats.rows()) {
    if (UnitInventory::IsSpecial(ctx.center) || !(s.count > 0.0)) continue;
    any = true;
    if (ctx.left != kNoContext && !UnitInventory::IsSpecial(ctx.left))
      left.try_emplace(UnitInventory::BaseOf(ctx.left), stats.dim())
          .first->second.Add(s);
    if (ctx.right != kNoContext && !UnitInventory::IsSpecial(ctx.right))
      right.try_emplace(UnitInventory::BaseOf(ctx.right), stats.dim())
          .first->second.Add(s);
  }
  if (!any) CHENONE_ERR(kEmptyStats) << "no clusterable rows for question generation";
  std::vector<Question> questions;
  ClusterSlot(left, QuestionSlot::kLeft, variance_floor, &questions);
  ClusterSlot(right, QuestionSlot::kRight, variance_floor, &questions);
  questions.push_back({QuestionSlot::kPosition, {}});
  std::sort(questions.begin(), questions.end());
  questions.erase(std::unique(questions.begin(), questions.end()), questions.end());
  return questions;
}

// ---------------------------------------------------------------------------
// TiedStateMap

TiedStateMap::TiedStateMap(std::vector<TreeRoot> roots, bool share_wb_root)
    : roots_(std::move(roots)), share_wb_root_(share_wb_root) {
  Index();
}

void TiedStateMap::Index() {
  root_of_unit_.clear();
  num_leaves_ = 0;
  for (size_t r = 0; r < roots_.size(); ++r) {
    const TreeRoot &root = roots_[r];
    std::vector<UnitId> units;
    if (root.position) {
      units.push_back(UnitInventory::MakeUnit(root.base, *root.position));
    } else {
      units.push_back(UnitInventory::MakeUnit(root.base, Position::kInternal));
      units.push_back(UnitInventory::MakeUnit(root.base, Position::kWordBoundary));
    }
    for (UnitId u : units) {
      if (static_cast<size_t>(u) >= root_of_unit_.size())
        root_of_unit_.resize(u + 1, -1);
      if (root_of_unit_[u] != -1)
        CHENONE_ERR(kInvalidArgument) << "two trees for one center unit";
      root_of_unit_[u] = static_cast<int32_t>(r);
    }
    for (const TreeNode &node : root.nodes)
      if (node.IsLeaf()) num_leaves_ = std::max(num_leaves_, node.leaf + 1);
  }
}

TiedStateMap TiedStateMap::ContextIndependent(const std::vector<UnitId> &centers,
                                              bool share_wb_root) {
  std::map<std::pair<int32_t, int32_t>, std::optional<Position>> keys;
  for (UnitId u : centers) {
    if (UnitInventory::IsSpecial(u)) continue;
    int32_t base = UnitInventory::BaseOf(u);
    if (share_wb_root) {
      keys[{base, 0}] = std::nullopt;
    } else {
      Position pos = UnitInventory::PositionOf(u);
      keys[{base, pos == Position::kInternal ? 0 : 1}] = pos;
    }
  }
  std::vector<TreeRoot> roots;
  int32_t leaf = 0;
  for (const auto &[key, pos] : keys) {
    TreeRoot root;
    root.base = key.first;
    root.position = pos;
    TreeNode node;
    node.leaf = leaf++;
    root.nodes.push_back(node);
    roots.push_back(std::move(root));
  }
  return TiedStateMap(std::move(roots), share_wb_root);
}

int32_t TiedStateMap::FindRoot(UnitId center) const {
  if (center < 0 || static_cast<size_t>(center) >= root_of_unit_.size()) return -1;
  return root_of_unit_[center];
}

int32_t TiedStateMap::Descend(const TriContext &ctx, std::vector<int32_t> *path) const {
  if (ctx.center == UnitInventory::kSilence) return SilenceId();
  if (ctx.center == UnitInventory::kGarbage) return GarbageId();
  int32_t r = FindRoot(ctx.center);
  if (r < 0)
    CHENONE_ERR(kUnknownCenterUnit) << "no tree for center unit " << ctx.center;
  const auto &nodes = roots_[r].nodes;
  int32_t n = 0;
  while (true) {
    if (path) path->push_back(n);
    const TreeNode &node = nodes[n];
    if (node.IsLeaf()) return node.leaf;
    n = node.question.Answer(ctx) ? node.yes : node.no;
  }
}

int32_t TiedStateMap::Tie(const TriContext &ctx) const { return Descend(ctx, nullptr); }

bool TiedStateMap::operator==(const TiedStateMap &other) const {
  if (share_wb_root_ != other.share_wb_root_ || num_leaves_ != other.num_leaves_ ||
      roots_.size() != other.roots_.size())
    return false;
  // node numbering differs between grown and parsed trees; compare shapes
  std::function<bool(const TreeRoot &, int32_t, const TreeRoot &, int32_t)> same =
      [&](const TreeRoot &a, int32_t i, const TreeRoot &b, int32_t j) {
        const TreeNode &x = a.nodes[i], &y = b.nodes[j];
        if (x.IsLeaf() || y.IsLeaf()) return x.IsLeaf() == y.IsLeaf() && x.leaf == y.leaf;
        return x.question == y.question && same(a, x.yes, b, y.yes) && same(a, x.no, b, y.no);
      };
  for (size_t r = 0; r < roots_.size(); ++r) {
    const TreeRoot &a = roots_[r], &b = other.roots_[r];
    if (a.base != b.base || a.position != b.position || a.nodes.size() != b.nodes.size() ||
        !same(a, 0, b, 0))
      return false;
  }
  return true;
}

namespace {

std::string MembersString(const Question &q, const UnitInventory &inventory) {
  if (q.slot == QuestionSlot::kPosition) return "WB";
  std::vector<std::string> names;
  for (int32_t b : q.members) names.push_back(inventory.BaseSymbol(b));
  return Join(names, ",");
}

void WriteSubtree(std::ostream &os, const TreeRoot &root, int32_t n,
                  const UnitInventory &inventory) {
  const TreeNode &node = root.nodes[n];
  if (node.IsLeaf()) {
    os << "L " << node.leaf << '\n';
    return;
  }
  os << "N " << QuestionSlotName(node.question.slot) << ' '
     << MembersString(node.question, inventory) << ' ' << FormatDouble(node.gain)
     << '\n';
  WriteSubtree(os, root, node.yes, inventory);
  WriteSubtree(os, root, node.no, inventory);
}

}  // namespace

void TiedStateMap::Write(std::ostream &os, const UnitInventory &inventory) const {
  os << "CFTREE v1 leaves=" << num_leaves_ << '\n';
  for (const TreeRoot &root : roots_) {
    UnitId center = UnitInventory::MakeUnit(
        root.base, root.position.value_or(Position::kInternal));
    os << "ROOT " << inventory.UnitName(center) << ' '
       << (root.position ? "wb-split" : "wb-shared") << '\n';
    WriteSubtree(os, root, 0, inventory);
  }
}

TiedStateMap TiedStateMap::Read(std::istream &is, const UnitInventory &inventory) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(is, line))
    if (!Trim(line).empty()) lines.push_back(SplitWhitespace(line));
  long long leaves = 0;
  if (lines.empty() || lines[0].size() != 3 || lines[0][0] != "CFTREE" ||
      lines[0][1] != "v1" || lines[0][2].rfind("leaves=", 0) != 0 ||
      !ParseInt(lines[0][2].substr(7), &leaves))
    CHENONE_ERR(kMalformedLine) << "tree file: bad header";
  size_t pos = 1;
  auto fail = [&](const std::string &what) {
    CHENONE_ERR(kMalformedLine) << "tree file line " << pos + 1 << ": " << what;
  };
  std::function<int32_t(TreeRoot &)> parse_node = [&](TreeRoot &root) -> int32_t {
    if (pos >= lines.size()) fail("unexpected end of file");
    const auto &f = lines[pos++];
    int32_t id = static_cast<int32_t>(root.nodes.size());
    root.nodes.emplace_back();
    if (f.size() == 2 && f[0] == "L") {
      long long leaf;
      if (!ParseInt(f[1], &leaf) || leaf < 0 || leaf >= leaves) fail("bad leaf id");
      root.nodes[id].leaf = static_cast<int32_t>(leaf);
      return id;
    }
    if (f.size() != 4 || f[0] != "N") fail("expected N or L line");
    auto slot = ParseQuestionSlot(f[1]);
    if (!slot) fail("bad slot " + f[1]);
    Question q{*slot, {}};
    if (*slot != QuestionSlot::kPosition) {
      for (const auto &sym : Split(f[2], ',')) {
        auto base = inventory.FindBase(sym);
        if (!base) CHENONE_ERR(kUnknownSymbol) << "tree file: symbol '" << sym << "'";
        q.members.push_back(*base);
      }
      std::sort(q.members.begin(), q.members.end());
    }
    double gain;
    if (!ParseDouble(f[3], &gain)) fail("bad gain");
    root.nodes[id].question = q;
    root.nodes[id].gain = gain;
    int32_t yes = parse_node(root);
    int32_t no = parse_node(root);
    root.nodes[id].yes = yes;
    root.nodes[id].no = no;
    return id;
  };
  std::vector<TreeRoot> roots;
  std::optional<bool> shared;
  while (pos < lines.size()) {
    const auto &f = lines[pos];
    if (f.size() != 3 || f[0] != "ROOT") fail("expected ROOT line");
    auto center = inventory.ParseUnitName(f[1]);
    if (!center || UnitInventory::IsSpecial(*center))
      CHENONE_ERR(kUnknownSymbol) << "tree file: center '" << f[1] << "'";
    bool is_shared;
    if (f[2] == "wb-shared")
      is_shared = true;
    else if (f[2] == "wb-split")
      is_shared = false;
    else
      fail("bad root mode " + f[2]);
    if (shared && *shared != is_shared) fail("mixed root modes");
    shared = is_shared;
    ++pos;
    TreeRoot root;
    root.base = UnitInventory::BaseOf(*center);
    if (!is_shared) root.position = UnitInventory::PositionOf(*center);
    parse_node(root);
    roots.push_back(std::move(root));
  }
  TiedStateMap map(std::move(roots), shared.value_or(false));
  if (map.NumLeaves() != leaves)
    CHENONE_ERR(kMalformedLine) << "tree file: header says " << leaves
                                << " leaves, found " << map.NumLeaves();
  return map;
}

TiedStateMap TiedStateMap::ReadFile(const std::string &path,
                                    const UnitInventory &inventory) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open tree " << path;
  return Read(is, inventory);
}

// ---------------------------------------------------------------------------
// Tree growth

namespace {

struct Frontier {
  int32_t root;
  int32_t node;
  int64_t seq;
  std::vector<const StatsRow *> rows;
  double best_gain = kNegInf;
  int32_t best_question = -1;
};

void Evaluate(Frontier *leaf, const std::vector<Question> &questions,
              const TreeConfig &config) {
  leaf->best_gain = kNegInf;
  leaf->best_question = -1;
  for (size_t q = 0; q < questions.size(); ++q) {
    double gain = SplitGain(leaf->rows, questions[q], config.min_count,
                            config.variance_floor);
    if (gain > leaf->best_gain) {
      leaf->best_gain = gain;
      leaf->best_question = static_cast<int32_t>(q);
    }
  }
}

}  // namespace

TiedStateMap GrowTree(const StatsTable &stats, const std::vector<Question> &questions_in,
                      const TreeConfig &config) {
  if (config.min_count < 1.0)
    CHENONE_ERR(kInvalidArgument) << "min_count must be >= 1";
  std::vector<Question> questions = questions_in;
  std::sort(questions.begin(), questions.end());
  questions.erase(std::unique(questions.begin(), questions.end()), questions.end());

  // Root groups, ordered by base then Internal before WB.
  std::map<std::pair<int32_t, int32_t>, std::vector<const StatsRow *>> groups;
  for (const auto &row : stats.rows()) {
    const TriContext &ctx = row.first;
    if (ctx.center == kNoContext || ctx.center < 0)
      CHENONE_ERR(kMissingRoot) << "stats row without a center unit";
    if (UnitInventory::IsSpecial(ctx.center) || !(row.second.count > 0.0)) continue;
    int32_t base = UnitInventory::BaseOf(ctx.center);
    int32_t pos = config.share_wb_root
                      ? 0
                      : (UnitInventory::PositionOf(ctx.center) == Position::kInternal ? 0 : 1);
    groups[{base, pos}].push_back(&row);
  }
  if (groups.empty()) CHENONE_ERR(kEmptyStats) << "no clusterable rows";
  if (config.max_leaves < static_cast<int32_t>(groups.size()))
    CHENONE_ERR(kInvalidArgument) << "max_leaves " << config.max_leaves << " < "
                                  << groups.size() << " root groups";

  std::vector<TreeRoot> roots;
  std::vector<Frontier> frontier;
  int64_t seq = 0;
  for (auto &[key, rows] : groups) {
    TreeRoot root;
    root.base = key.first;
    if (!config.share_wb_root)
      root.position = key.second == 0 ? Position::kInternal : Position::kWordBoundary;
    root.nodes.emplace_back();
    Frontier leaf{static_cast<int32_t>(roots.size()), 0, seq++, rows};
    Evaluate(&leaf, questions, config);
    frontier.push_back(std::move(leaf));
    roots.push_back(std::move(root));
  }

  std::vector<SplitRecord> splits;
  int32_t num_leaves = static_cast<int32_t>(frontier.size());
  while (num_leaves < config.max_leaves) {
    // Highest gain; ties go to the lowest root, then the smallest question,
    // then the oldest leaf.
    int32_t best = -1;
    for (size_t i = 0; i < frontier.size(); ++i) {
      const Frontier &f = frontier[i];
      if (f.best_question < 0) continue;
      if (best < 0) {
        best = static_cast<int32_t>(i);
        continue;
      }
      const Frontier &b = frontier[best];
      auto key = [](const Frontier &x) {
        return std::make_tuple(-x.best_gain, x.root, x.best_question, x.seq);
      };
      if (key(f) < key(b)) best = static_cast<int32_t>(i);
    }
    if (best < 0) break;
    Frontier chosen = std::move(frontier[best]);
    if (!(chosen.best_gain >= config.min_gain) || std::isinf(chosen.best_gain)) {
      frontier[best] = std::move(chosen);
      break;
    }
    frontier.erase(frontier.begin() + best);
    const Question &q = questions[chosen.best_question];
    TreeRoot &root = roots[chosen.root];
    int32_t yes_id = static_cast<int32_t>(root.nodes.size());
    int32_t no_id = yes_id + 1;
    root.nodes.emplace_back();
    root.nodes.emplace_back();
    TreeNode &node = root.nodes[chosen.node];
    node.question = q;
    node.gain = chosen.best_gain;
    node.yes = yes_id;
    node.no = no_id;
    splits.push_back({chosen.root, q, chosen.best_gain});

    Frontier yes{chosen.root, yes_id, seq++, {}};
    Frontier no{chosen.root, no_id, seq++, {}};
    for (const StatsRow *row : chosen.rows)
      (q.Answer(row->first) ? yes.rows : no.rows).push_back(row);
    Evaluate(&yes, questions, config);
    Evaluate(&no, questions, config);
    frontier.push_back(std::move(yes));
    frontier.push_back(std::move(no));
    ++num_leaves;
  }

  // Dense leaf ids: roots in order, pre-order (yes before no) within a root.
  int32_t next_leaf = 0;
  for (TreeRoot &root : roots) {
    std::function<void(int32_t)> number = [&](int32_t n) {
      TreeNode &node = root.nodes[n];
      if (node.IsLeaf()) {
        node.leaf = next_leaf++;
        return;
      }
      number(node.yes);
      number(node.no);
    };
    number(0);
  }
  TiedStateMap map(std::move(roots), config.share_wb_root);
  map.splits_ = std::move(splits);
  return map;
}

}  // namespace chenone
