// src/acoustic-model.cc

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

#include "chenone/acoustic-model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "chenone/error.h"
#include "chenone/parallel.h"
#include "chenone/text-utils.h"

namespace chenone {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void AcousticModel::Validate() const {
  if (NumPdfs() != tied_map.NumTiedStates())
    CHENONE_ERR(kInvalidArgument) << NumPdfs() << " pdfs for "
                                  << tied_map.NumTiedStates() << " tied states";
  for (const auto &pdf : pdfs) {
    pdf.Validate();
    if (pdf.Dim() != dim) CHENONE_ERR(kDimMismatch) << "pdf dim " << pdf.Dim();
  }
}

void AcousticModel::Write(std::ostream &os) const {
  os << "CFAM v1 dim=" << dim << " leaves=" << NumPdfs()
     << " selfloop=" << FormatDouble(topology.self_loop_prob()) << '\n';
  for (int32_t p = 0; p < NumPdfs(); ++p) {
    const Gmm &gmm = pdfs[p];
    os << "PDF " << p << " ncomp=" << gmm.NumComponents() << '\n';
    os << 'W';
    for (double w : gmm.weights) os << ' ' << FormatDouble(w);
    os << '\n';
    for (const auto &c : gmm.components) {
      os << 'M';
      for (double v : c.mean) os << ' ' << FormatDouble(v);
      os << "\nV";
      for (double v : c.var) os << ' ' << FormatDouble(v);
      os << '\n';
    }
  }
}

AcousticModel AcousticModel::Read(std::istream &is, TiedStateMap tied_map) {
  std::string line;
  int64_t line_no = 0;
  auto next = [&](const char *what) {
    if (!std::getline(is, line))
      CHENONE_ERR(kMalformedLine) << "model file: missing " << what;
    ++line_no;
    return SplitWhitespace(line);
  };
  auto fail = [&]() {
    CHENONE_ERR(kMalformedLine) << "model file line " << line_no << ": '" << line << "'";
  };
  auto header = next("header");
  long long dim = 0, leaves = 0;
  double self_loop = 0.0;
  if (header.size() != 5 || header[0] != "CFAM" || header[1] != "v1" ||
      header[2].rfind("dim=", 0) != 0 || !ParseInt(header[2].substr(4), &dim) ||
      header[3].rfind("leaves=", 0) != 0 || !ParseInt(header[3].substr(7), &leaves) ||
      header[4].rfind("selfloop=", 0) != 0 ||
      !ParseDouble(header[4].substr(9), &self_loop))
    fail();
  AcousticModel model{HmmTopology(self_loop), std::move(tied_map), {},
                      static_cast<int32_t>(dim)};
  auto parse_vec = [&](const std::vector<std::string> &f, const char *tag,
                       size_t n) {
    if (f.size() != n + 1 || f[0] != tag) fail();
    std::vector<double> v(n);
    for (size_t i = 0; i < n; ++i)
      if (!ParseDouble(f[i + 1], &v[i])) fail();
    return v;
  };
  for (long long p = 0; p < leaves; ++p) {
    auto f = next("PDF line");
    long long id = -1, ncomp = 0;
    if (f.size() != 3 || f[0] != "PDF" || !ParseInt(f[1], &id) || id != p ||
        f[2].rfind("ncomp=", 0) != 0 || !ParseInt(f[2].substr(6), &ncomp) || ncomp < 1)
      fail();
    Gmm gmm;
    gmm.weights = parse_vec(next("W line"), "W", ncomp);
    for (long long k = 0; k < ncomp; ++k) {
      DiagGaussian g;
      g.mean = parse_vec(next("M line"), "M", dim);
      g.var = parse_vec(next("V line"), "V", dim);
      gmm.components.push_back(std::move(g));
    }
    model.pdfs.push_back(std::move(gmm));
  }
  model.Validate();
  return model;
}

AcousticModel AcousticModel::ReadFile(const std::string &path, TiedStateMap tied_map) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open model " << path;
  return Read(is, std::move(tied_map));
}

// ---------------------------------------------------------------------------
// Viterbi

AlignmentResult ViterbiAlign(const UtteranceGraph &graph, const Matrix &features,
                             const AcousticModel &model) {
  graph.Validate();
  if (graph.NumEmitting() == 0)
    CHENONE_ERR(kInvalidArgument) << "graph has no emitting states";
  if (features.NumCols() != model.dim)
    CHENONE_ERR(kDimMismatch) << "features have dim " << features.NumCols()
                              << ", model " << model.dim;
  const int32_t num_nodes = graph.NumNodes();
  const int32_t num_frames = features.NumRows();
  const auto &arcs = graph.Arcs();

  std::vector<int32_t> pdf_of(num_nodes, -1);
  for (int32_t n = 0; n < num_nodes; ++n) {
    const GraphNode &node = graph.Node(n);
    if (!node.emitting) continue;
    pdf_of[n] = node.pdf >= 0 ? node.pdf : model.tied_map.Tie(node.context);
    if (pdf_of[n] >= model.NumPdfs())
      CHENONE_ERR(kInvalidArgument) << "pdf " << pdf_of[n] << " out of range";
  }

  // prev/cur: best score of a path ending in emitting node n at frame t.
  std::vector<double> prev(num_nodes, kNegInf), cur(num_nodes, kNegInf);
  std::vector<double> eps_score(num_nodes, kNegInf);
  std::vector<int32_t> eps_origin(num_nodes, -1);
  // backptr[t * num_nodes + n]: emitting predecessor at t-1 (-1 from start).
  std::vector<int32_t> backptr(size_t(std::max(num_frames, 1)) * num_nodes, -1);
  std::vector<double> emission_cache(model.NumPdfs());
  std::vector<int32_t> emission_stamp(model.NumPdfs(), -1);

  auto better = [](double score, int32_t origin, double best, int32_t best_origin) {
    return score > best || (score == best && score > kNegInf && origin < best_origin);
  };

  // Scores of non-emitting nodes given `prev` (frame t-1) and the start.
  auto close_epsilon = [&](bool at_start) {
    for (int32_t n = 0; n < num_nodes; ++n) {
      if (graph.Node(n).emitting) continue;
      double best = kNegInf;
      int32_t origin = std::numeric_limits<int32_t>::max();
      if (n == graph.start() && at_start) {
        best = 0.0;
        origin = -1;
      }
      for (int32_t a : graph.ArcsTo(n)) {
        const GraphArc &arc = arcs[a];
        double s;
        int32_t o;
        if (graph.Node(arc.src).emitting) {
          s = prev[arc.src] + arc.log_prob;
          o = arc.src;
        } else {
          s = eps_score[arc.src] + arc.log_prob;
          o = eps_origin[arc.src];
        }
        if (better(s, o, best, origin)) {
          best = s;
          origin = o;
        }
      }
      eps_score[n] = best;
      eps_origin[n] = origin;
    }
  };

  for (int32_t t = 0; t < num_frames; ++t) {
    close_epsilon(t == 0);
    auto x = features.Row(t);
    for (int32_t n = 0; n < num_nodes; ++n) {
      if (!graph.Node(n).emitting) continue;
      double best = kNegInf;
      int32_t origin = std::numeric_limits<int32_t>::max();
      for (int32_t a : graph.ArcsTo(n)) {
        const GraphArc &arc = arcs[a];
        double s;
        int32_t o;
        if (graph.Node(arc.src).emitting) {
          s = prev[arc.src] + arc.log_prob;
          o = arc.src;
        } else {
          s = eps_score[arc.src] + arc.log_prob;
          o = eps_origin[arc.src];
        }
        if (better(s, o, best, origin)) {
          best = s;
          origin = o;
        }
      }
      if (best == kNegInf) {
        cur[n] = kNegInf;
        continue;
      }
      int32_t pdf = pdf_of[n];
      if (emission_stamp[pdf] != t) {
        emission_cache[pdf] = model.LogLikelihood(pdf, x);
        emission_stamp[pdf] = t;
      }
      cur[n] = best + emission_cache[pdf];
      backptr[size_t(t) * num_nodes + n] = origin;
    }
    std::swap(prev, cur);
  }
  close_epsilon(num_frames == 0);
  double total = eps_score[graph.final()];
  if (num_frames == 0 || total == kNegInf)
    CHENONE_ERR(kNoPath) << num_frames << " frames cannot traverse a graph needing "
                         << graph.MinPathLength();

  AlignmentResult result;
  result.log_likelihood = total;
  result.frame_labels.resize(num_frames);
  int32_t n = eps_origin[graph.final()];
  for (int32_t t = num_frames - 1; t >= 0; --t) {
    CHENONE_ASSERT(n >= 0);
    result.frame_labels[t] = {pdf_of[n], graph.Node(n).context, n};
    n = backptr[size_t(t) * num_nodes + n];
  }
  return result;
}

// ---------------------------------------------------------------------------
// Flat start

AcousticModel FlatStart(const Corpus &corpus, const Lexicon &lexicon,
                        const CdConfig &config, const HmmTopology &topology,
                        bool share_wb_root, FlatStartReport *report) {
  if (corpus.empty()) CHENONE_ERR(kInvalidArgument) << "flat start on an empty corpus";
  std::set<UnitId> centers;
  for (int32_t w = 0; w < lexicon.NumWords(); ++w)
    for (const auto &pron : lexicon.Pronunciations(w))
      for (UnitId u : pron) centers.insert(ProjectUnit(u, config));
  TiedStateMap ci_map = TiedStateMap::ContextIndependent(
      std::vector<UnitId>(centers.begin(), centers.end()), share_wb_root);

  const int32_t dim = corpus.front().features.NumCols();
  std::vector<GaussStats> acc(ci_map.NumTiedStates(), GaussStats(dim));
  GaussStats global(dim);
  for (const Utterance &utt : corpus) {
    if (utt.features.NumCols() != dim)
      CHENONE_ERR(kDimMismatch) << "utterance " << utt.id << " has dim "
                                << utt.features.NumCols();
    std::vector<int32_t> states{ci_map.SilenceId()};
    for (const auto &word : utt.words) {
      const auto *prons = lexicon.Find(word);
      if (prons == nullptr) {
        states.push_back(ci_map.GarbageId());
        continue;
      }
      for (UnitId u : prons->front())
        states.push_back(ci_map.Tie({kNoContext, ProjectUnit(u, config), kNoContext}));
    }
    states.push_back(ci_map.SilenceId());
    const int64_t num_frames = utt.features.NumRows();
    const int64_t num_states = static_cast<int64_t>(states.size());
    if (num_frames < num_states) {
      if (report) report->skipped.push_back(utt.id);
      continue;
    }
    for (int64_t k = 0; k < num_states; ++k) {
      int64_t begin = k * num_frames / num_states;
      int64_t end = (k + 1) * num_frames / num_states;
      for (int64_t t = begin; t < end; ++t) {
        auto x = utt.features.Row(static_cast<int32_t>(t));
        acc[states[k]].AddFrame(x);
        global.AddFrame(x);
      }
    }
  }
  if (!(global.count > 0.0))
    CHENONE_ERR(kUtteranceTooShort) << "every utterance is shorter than its graph";
  Gmm fallback = Gmm::FromStats(global);
  AcousticModel model{topology, std::move(ci_map), {}, dim};
  for (const auto &s : acc)
    model.pdfs.push_back(s.count > 0.0 ? Gmm::FromStats(s) : fallback);
  return model;
}

// ---------------------------------------------------------------------------
// EM

namespace {

Gmm ReestimateGmm(const Gmm &gmm, const std::vector<std::span<const float>> &frames,
                  const EmOptions &options) {
  const int32_t k_num = gmm.NumComponents();
  const int32_t dim = gmm.Dim();
  std::vector<GaussStats> acc(k_num, GaussStats(dim));
  std::vector<double> post;
  for (const auto &x : frames) {
    gmm.Posteriors(x, &post);
    for (int32_t k = 0; k < k_num; ++k)
      if (post[k] > 0.0) acc[k].AddFrame(x, post[k]);
  }
  Gmm out = gmm;
  const double total = static_cast<double>(frames.size());
  for (int32_t k = 0; k < k_num; ++k) {
    out.weights[k] = acc[k].count / total;
    if (!(acc[k].count > 1e-10)) continue;  // keep the old component
    DiagGaussian &c = out.components[k];
    for (int32_t d = 0; d < dim; ++d) {
      double mean = acc[k].sum[d] / acc[k].count;
      c.mean[d] = mean;
      c.var[d] = std::max(acc[k].sum_sq[d] / acc[k].count - mean * mean,
                          options.variance_floor);
    }
  }
  FloorWeights(&out.weights, options.weight_floor);
  return out;
}

}  // namespace

EmResult EmIterate(const AcousticModel &model, const Corpus &corpus,
                   const std::vector<UtteranceGraph> &graphs,
                   const EmOptions &options) {
  if (graphs.size() != corpus.size())
    CHENONE_ERR(kLengthMismatch) << graphs.size() << " graphs for " << corpus.size()
                                 << " utterances";
  const int64_t n = static_cast<int64_t>(corpus.size());
  EmResult result{model, 0.0, 0, std::vector<AlignmentResult>(n)};
  std::vector<char> aligned(n, 0);
  ParallelFor(n, options.jobs, [&](int64_t i) {
    try {
      result.alignments[i] = ViterbiAlign(graphs[i], corpus[i].features, model);
      aligned[i] = 1;
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoPath) throw;
    }
  });

  std::vector<std::vector<std::span<const float>>> frames(model.NumPdfs());
  for (int64_t i = 0; i < n; ++i) {
    if (!aligned[i]) {
      ++result.num_skipped;
      continue;
    }
    result.log_likelihood += result.alignments[i].log_likelihood;
    const auto &labels = result.alignments[i].frame_labels;
    for (size_t t = 0; t < labels.size(); ++t)
      frames[labels[t].pdf].push_back(corpus[i].features.Row(static_cast<int32_t>(t)));
  }
  for (int32_t p = 0; p < model.NumPdfs(); ++p)
    if (!frames[p].empty())
      result.model.pdfs[p] = ReestimateGmm(model.pdfs[p], frames[p], options);
  return result;
}

AcousticModel SplitMixtures(const AcousticModel &model, int32_t target_components) {
  AcousticModel out = model;
  for (Gmm &gmm : out.pdfs) {
    if (target_components < gmm.NumComponents())
      CHENONE_ERR(kInvalidArgument) << "cannot shrink a " << gmm.NumComponents()
                                    << "-component GMM to " << target_components;
    while (gmm.NumComponents() < target_components) {
      size_t heaviest = std::max_element(gmm.weights.begin(), gmm.weights.end()) -
                        gmm.weights.begin();
      DiagGaussian plus = gmm.components[heaviest];
      DiagGaussian minus = plus;
      for (int32_t d = 0; d < plus.Dim(); ++d) {
        double sigma = std::sqrt(plus.var[d]);
        plus.mean[d] += 0.1 * sigma;
        minus.mean[d] -= 0.1 * sigma;
      }
      double w = gmm.weights[heaviest] / 2.0;
      gmm.components[heaviest] = std::move(plus);
      gmm.weights[heaviest] = w;
      gmm.components.push_back(std::move(minus));
      gmm.weights.push_back(w);
    }
    double total = 0.0;
    for (double w : gmm.weights) total += w;
    for (double &w : gmm.weights) w /= total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Retie

AcousticModel Retie(const AcousticModel &ci_model, const TiedStateMap &tied_map,
                    const StatsTable &stats, double variance_floor) {
  const int32_t dim = ci_model.dim;
  if (!stats.empty() && stats.dim() != dim)
    CHENONE_ERR(kDimMismatch) << "stats dim " << stats.dim() << ", model " << dim;
  const auto &roots = tied_map.roots();
  std::vector<std::vector<GaussStats>> node_stats(roots.size());
  std::vector<std::vector<int32_t>> parent(roots.size());
  for (size_t r = 0; r < roots.size(); ++r) {
    node_stats[r].assign(roots[r].nodes.size(), GaussStats(dim));
    parent[r].assign(roots[r].nodes.size(), -1);
    for (size_t n = 0; n < roots[r].nodes.size(); ++n) {
      const TreeNode &node = roots[r].nodes[n];
      if (!node.IsLeaf()) {
        parent[r][node.yes] = static_cast<int32_t>(n);
        parent[r][node.no] = static_cast<int32_t>(n);
      }
    }
  }
  GaussStats sil(dim), garbage(dim);
  std::vector<int32_t> path;
  for (const auto &[ctx, s] : stats.rows()) {
    if (ctx.center == UnitInventory::kSilence) {
      sil.Add(s);
      continue;
    }
    if (ctx.center == UnitInventory::kGarbage) {
      garbage.Add(s);
      continue;
    }
    int32_t r = tied_map.FindRoot(ctx.center);
    if (r < 0) continue;
    path.clear();
    tied_map.Descend(ctx, &path);
    for (int32_t n : path) node_stats[r][n].Add(s);
  }

  AcousticModel model{ci_model.topology, tied_map,
                      std::vector<Gmm>(tied_map.NumTiedStates()), dim};
  for (size_t r = 0; r < roots.size(); ++r) {
    for (size_t n = 0; n < roots[r].nodes.size(); ++n) {
      const TreeNode &node = roots[r].nodes[n];
      if (!node.IsLeaf()) continue;
      int32_t m = static_cast<int32_t>(n);
      while (m >= 0 && !(node_stats[r][m].count > 0.0)) m = parent[r][m];
      if (m >= 0) {
        model.pdfs[node.leaf] = Gmm::FromStats(node_stats[r][m], variance_floor);
        continue;
      }
      UnitId center = UnitInventory::MakeUnit(
          roots[r].base, roots[r].position.value_or(Position::kInternal));
      int32_t ci_pdf = ci_model.tied_map.Tie({kNoContext, center, kNoContext});
      model.pdfs[node.leaf] = ci_model.pdfs[ci_pdf];
    }
  }
  model.pdfs[tied_map.SilenceId()] =
      sil.count > 0.0 ? Gmm::FromStats(sil, variance_floor)
                      : ci_model.pdfs[ci_model.tied_map.SilenceId()];
  model.pdfs[tied_map.GarbageId()] =
      garbage.count > 0.0 ? Gmm::FromStats(garbage, variance_floor)
                          : ci_model.pdfs[ci_model.tied_map.GarbageId()];
  return model;
}

StatsTable AccumulateAlignment(const AlignmentResult &alignment,
                               const Matrix &features) {
  std::vector<TriContext> labels;
  labels.reserve(alignment.frame_labels.size());
  for (const auto &f : alignment.frame_labels) labels.push_back(f.context);
  return Accumulate(labels, features);
}

}  // namespace chenone
