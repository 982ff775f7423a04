// include/chenone/context.h

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

#ifndef CHENONE_CONTEXT_H_
#define CHENONE_CONTEXT_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chenone/units.h"

namespace chenone {

/// Left/right slot value meaning "no context" (utterance edge, word edge
/// without cross-word context, or adjacent silence).
inline constexpr UnitId kNoContext = -1;

struct TriContext {
  UnitId left = kNoContext;
  UnitId center = UnitInventory::kSilence;
  UnitId right = kNoContext;

  auto operator<=>(const TriContext &) const = default;
};

/// "l/c/r" with "<none>" for the sentinel.
std::string ContextName(const TriContext &ctx, const UnitInventory &inventory);
std::optional<TriContext> ParseContextName(std::string_view text,
                                           const UnitInventory &inventory);
inline constexpr const char *kNoContextSymbol = "<none>";

struct CdConfig {
  bool context_dependent = true;
  bool position_dependent = true;
  bool cross_word_context = false;
};

/// One emitting state per unit with a fixed self-loop/forward split.
class HmmTopology {
 public:
  explicit HmmTopology(double self_loop_prob = 0.5);

  int32_t states_per_unit() const { return 1; }
  double self_loop_prob() const { return self_loop_prob_; }
  double forward_prob() const { return 1.0 - self_loop_prob_; }
  double LogSelfLoop() const;
  double LogForward() const;

  bool operator==(const HmmTopology &other) const = default;

 private:
  double self_loop_prob_;
};

/// Maps a unit to the variant the configuration models: the word-internal
/// variant when position dependency is off.
UnitId ProjectUnit(UnitId unit, const CdConfig &config);

/// Tri-contexts for the units of one word. Word-edge units see the sentinel
/// on their outer side; silence and garbage are never context.
std::vector<TriContext> ExpandContexts(std::span<const UnitId> units,
                                       const CdConfig &config);

/// Tri-contexts for consecutive words spoken without intervening silence.
/// With cross_word_context the edge units of adjacent words see each other;
/// otherwise this is ExpandContexts applied per word.
std::vector<TriContext> ExpandContexts(
    const std::vector<std::vector<UnitId>> &words, const CdConfig &config);

struct GraphNode {
  bool emitting = false;
  TriContext context;
  /// Tied state id; -1 until resolved against a tied-state map.
  int32_t pdf = -1;
  /// Index of the transcript word this state belongs to, -1 for silence and
  /// non-emitting nodes.
  int32_t word_index = -1;
};

struct GraphArc {
  int32_t src;
  int32_t dst;
  double log_prob;
};

/// HMM state graph of an utterance. Non-emitting nodes must only have
/// non-emitting successors with larger ids, so that epsilon closure can be
/// computed in id order.
class UtteranceGraph {
 public:
  int32_t AddNode(const GraphNode &node);
  void AddArc(int32_t src, int32_t dst, double log_prob);
  void SetStart(int32_t node) { start_ = node; }
  void SetFinal(int32_t node) { final_ = node; }

  int32_t start() const { return start_; }
  int32_t final() const { return final_; }
  int32_t NumNodes() const { return static_cast<int32_t>(nodes_.size()); }
  int32_t NumEmitting() const;
  const GraphNode &Node(int32_t i) const { return nodes_[i]; }
  GraphNode &MutableNode(int32_t i) { return nodes_[i]; }
  const std::vector<GraphArc> &Arcs() const { return arcs_; }
  /// Arc indices leaving `node`.
  const std::vector<int32_t> &ArcsFrom(int32_t node) const { return out_[node]; }
  /// Arc indices entering `node`.
  const std::vector<int32_t> &ArcsTo(int32_t node) const { return in_[node]; }

  /// Fewest emitting states on any start-to-final path (= fewest frames);
  /// -1 if final is unreachable.
  int32_t MinPathLength() const;

  /// Throws kInvalidArgument when the structural requirements above fail.
  void Validate() const;

  /// Debug dump: one arc per line, `src dst label logprob`, where label is
  /// the destination state's context or `<eps>`.
  void Write(std::ostream &os, const UnitInventory &inventory) const;

 private:
  std::vector<GraphNode> nodes_;
  std::vector<GraphArc> arcs_;
  std::vector<std::vector<int32_t>> out_;
  std::vector<std::vector<int32_t>> in_;
  int32_t start_ = -1;
  int32_t final_ = -1;
};

struct GraphOptions {
  /// Probability of taking the optional silence between two words.
  double optional_silence_prob = 0.5;
};

/// Linear word chain: mandatory silence at both ends, optional silence
/// between words, one parallel branch per pronunciation (uniform branch
/// probability) and a single GARBAGE state for words missing from the
/// lexicon.
UtteranceGraph BuildAlignmentGraph(const std::vector<std::string> &transcript,
                                   const Lexicon &lexicon,
                                   const CdConfig &config,
                                   const HmmTopology &topology,
                                   const GraphOptions &options = {});

}  // namespace chenone

#endif  // CHENONE_CONTEXT_H_
