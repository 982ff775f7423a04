// src/context.cc

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

#include "chenone/context.h"

#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

std::string ContextName(const TriContext &ctx, const UnitInventory &inventory) {
  auto slot = [&](UnitId u) {
    return u == kNoContext ? std::string(kNoContextSymbol) : inventory.UnitName(u);
  };
  return slot(ctx.left) + "/" + inventory.UnitName(ctx.center) + "/" +
         slot(ctx.right);
}

std::optional<TriContext> ParseContextName(std::string_view text,
                                           const UnitInventory &inventory) {
  std::vector<std::string> parts = Split(text, '/');
  if (parts.size() != 3) return std::nullopt;
  auto slot = [&](const std::string &s) -> std::optional<UnitId> {
    if (s == kNoContextSymbol) return kNoContext;
    return inventory.ParseUnitName(s);
  };
  auto l = slot(parts[0]), r = slot(parts[2]);
  auto c = inventory.ParseUnitName(parts[1]);
  if (!l || !c || !r) return std::nullopt;
  return TriContext{*l, *c, *r};
}

HmmTopology::HmmTopology(double self_loop_prob) : self_loop_prob_(self_loop_prob) {
  if (!(self_loop_prob > 0.0 && self_loop_prob < 1.0))
    CHENONE_ERR(kInvalidArgument) << "self-loop probability must be in (0,1), got "
                                  << self_loop_prob;
}

double HmmTopology::LogSelfLoop() const { return std::log(self_loop_prob_); }
double HmmTopology::LogForward() const { return std::log(forward_prob()); }

UnitId ProjectUnit(UnitId unit, const CdConfig &config) {
  return config.position_dependent ? unit : UnitInventory::Internal(unit);
}

namespace {

bool IsContextUnit(UnitId u) { return !UnitInventory::IsSpecial(u); }

// Contexts over a flat sequence in which every adjacent non-special pair is
// allowed to see each other.
void ExpandFlat(std::span<const UnitId> units, const CdConfig &config,
                std::vector<TriContext> *out) {
  for (size_t i = 0; i < units.size(); ++i) {
    TriContext ctx;
    ctx.center = ProjectUnit(units[i], config);
    if (config.context_dependent && IsContextUnit(units[i])) {
      if (i > 0 && IsContextUnit(units[i - 1]))
        ctx.left = ProjectUnit(units[i - 1], config);
      if (i + 1 < units.size() && IsContextUnit(units[i + 1]))
        ctx.right = ProjectUnit(units[i + 1], config);
    }
    out->push_back(ctx);
  }
}

}  // namespace

std::vector<TriContext> ExpandContexts(std::span<const UnitId> units,
                                       const CdConfig &config) {
  CHENONE_ASSERT(!units.empty());
  std::vector<TriContext> out;
  out.reserve(units.size());
  ExpandFlat(units, config, &out);
  return out;
}

std::vector<TriContext> ExpandContexts(
    const std::vector<std::vector<UnitId>> &words, const CdConfig &config) {
  std::vector<TriContext> out;
  if (config.cross_word_context) {
    std::vector<UnitId> flat;
    for (const auto &w : words) flat.insert(flat.end(), w.begin(), w.end());
    CHENONE_ASSERT(!flat.empty());
    ExpandFlat(flat, config, &out);
  } else {
    for (const auto &w : words) ExpandFlat(w, config, &out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// UtteranceGraph

int32_t UtteranceGraph::AddNode(const GraphNode &node) {
  nodes_.push_back(node);
  out_.emplace_back();
  in_.emplace_back();
  return NumNodes() - 1;
}

void UtteranceGraph::AddArc(int32_t src, int32_t dst, double log_prob) {
  CHENONE_ASSERT(src >= 0 && src < NumNodes() && dst >= 0 && dst < NumNodes());
  out_[src].push_back(static_cast<int32_t>(arcs_.size()));
  in_[dst].push_back(static_cast<int32_t>(arcs_.size()));
  arcs_.push_back({src, dst, log_prob});
}

int32_t UtteranceGraph::NumEmitting() const {
  int32_t n = 0;
  for (const auto &node : nodes_) n += node.emitting ? 1 : 0;
  return n;
}

int32_t UtteranceGraph::MinPathLength() const {
  if (start_ < 0 || final_ < 0) return -1;
  const int32_t inf = std::numeric_limits<int32_t>::max();
  std::vector<int32_t> dist(NumNodes(), inf);
  std::deque<int32_t> queue;
  dist[start_] = nodes_[start_].emitting ? 1 : 0;
  queue.push_back(start_);
  while (!queue.empty()) {
    int32_t n = queue.front();
    queue.pop_front();
    for (int32_t a : out_[n]) {
      int32_t d = arcs_[a].dst;
      int32_t w = nodes_[d].emitting ? 1 : 0;
      if (dist[n] + w < dist[d]) {
        dist[d] = dist[n] + w;
        if (w == 0)
          queue.push_front(d);
        else
          queue.push_back(d);
      }
    }
  }
  return dist[final_] == inf ? -1 : dist[final_];
}

void UtteranceGraph::Validate() const {
  if (start_ < 0 || start_ >= NumNodes() || final_ < 0 || final_ >= NumNodes())
    CHENONE_ERR(kInvalidArgument) << "graph start/final not set";
  if (nodes_[start_].emitting || nodes_[final_].emitting)
    CHENONE_ERR(kInvalidArgument) << "graph start and final must be non-emitting";
  if (!in_[start_].empty())
    CHENONE_ERR(kInvalidArgument) << "graph start has incoming arcs";
  for (const auto &arc : arcs_) {
    if (!(arc.log_prob <= 0.0))
      CHENONE_ERR(kInvalidArgument) << "arc " << arc.src << "->" << arc.dst
                                    << " has log-prob " << arc.log_prob;
    if (!nodes_[arc.src].emitting && !nodes_[arc.dst].emitting &&
        arc.dst <= arc.src)
      CHENONE_ERR(kInvalidArgument) << "epsilon arc " << arc.src << "->"
                                    << arc.dst << " is not id-ascending";
  }
}

void UtteranceGraph::Write(std::ostream &os, const UnitInventory &inventory) const {
  for (const auto &arc : arcs_) {
    const GraphNode &dst = nodes_[arc.dst];
    os << arc.src << ' ' << arc.dst << ' '
       << (dst.emitting ? ContextName(dst.context, inventory) : "<eps>") << ' '
       << FormatDouble(arc.log_prob) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Alignment graph

namespace {

int32_t AddEmitting(UtteranceGraph *graph, const TriContext &ctx,
                    int32_t word_index, const HmmTopology &topology) {
  GraphNode node;
  node.emitting = true;
  node.context = ctx;
  node.word_index = word_index;
  int32_t id = graph->AddNode(node);
  graph->AddArc(id, id, topology.LogSelfLoop());
  return id;
}

int32_t AddEpsilon(UtteranceGraph *graph) { return graph->AddNode(GraphNode{}); }

const TriContext kSilenceContext{kNoContext, UnitInventory::kSilence, kNoContext};
const TriContext kGarbageContext{kNoContext, UnitInventory::kGarbage, kNoContext};

}  // namespace

UtteranceGraph BuildAlignmentGraph(const std::vector<std::string> &transcript,
                                   const Lexicon &lexicon,
                                   const CdConfig &config,
                                   const HmmTopology &topology,
                                   const GraphOptions &options) {
  if (transcript.empty())
    CHENONE_ERR(kEmptyTranscript) << "cannot build a graph for an empty transcript";
  if (config.cross_word_context)
    CHENONE_ERR(kUnsupported)
        << "alignment graphs are built with word-internal contexts only";
  const double p_sil = options.optional_silence_prob;
  if (!(p_sil > 0.0 && p_sil < 1.0))
    CHENONE_ERR(kInvalidArgument) << "optional silence probability " << p_sil;

  UtteranceGraph graph;
  const double log_fwd = topology.LogForward();
  int32_t start = AddEpsilon(&graph);
  graph.SetStart(start);
  int32_t sil = AddEmitting(&graph, kSilenceContext, -1, topology);
  graph.AddArc(start, sil, 0.0);
  int32_t junction = AddEpsilon(&graph);
  graph.AddArc(sil, junction, log_fwd);

  for (size_t w = 0; w < transcript.size(); ++w) {
    const int32_t word_index = static_cast<int32_t>(w);
    std::vector<std::vector<int32_t>> branches;
    const auto *prons = lexicon.Find(transcript[w]);
    if (prons == nullptr) {
      branches.push_back({AddEmitting(&graph, kGarbageContext, word_index, topology)});
    } else {
      for (const auto &pron : *prons) {
        std::vector<int32_t> chain;
        for (const auto &ctx : ExpandContexts(pron, config))
          chain.push_back(AddEmitting(&graph, ctx, word_index, topology));
        branches.push_back(std::move(chain));
      }
    }
    int32_t word_end = AddEpsilon(&graph);
    const double log_branch = -std::log(static_cast<double>(branches.size()));
    for (const auto &chain : branches) {
      graph.AddArc(junction, chain.front(), log_branch);
      for (size_t k = 0; k + 1 < chain.size(); ++k)
        graph.AddArc(chain[k], chain[k + 1], log_fwd);
      graph.AddArc(chain.back(), word_end, log_fwd);
    }
    if (w + 1 < transcript.size()) {
      int32_t opt_sil = AddEmitting(&graph, kSilenceContext, -1, topology);
      int32_t next = AddEpsilon(&graph);
      graph.AddArc(word_end, opt_sil, std::log(p_sil));
      graph.AddArc(word_end, next, std::log(1.0 - p_sil));
      graph.AddArc(opt_sil, next, log_fwd);
      junction = next;
    } else {
      int32_t end_sil = AddEmitting(&graph, kSilenceContext, -1, topology);
      graph.AddArc(word_end, end_sil, 0.0);
      int32_t final_node = AddEpsilon(&graph);
      graph.AddArc(end_sil, final_node, log_fwd);
      graph.SetFinal(final_node);
    }
  }
  return graph;
}

}  // namespace chenone
