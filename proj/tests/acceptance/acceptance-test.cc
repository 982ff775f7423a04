// tests/acceptance/acceptance-test.cc

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


// Runs the ten acceptance checks and prints one PASS/FAIL line for each.
// Usage: acceptance-test [work-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chenone/acoustic-model.h"
#include "chenone/eval.h"
#include "chenone/pipeline.h"
#include "chenone/synth.h"
#include "chenone/tree.h"
#include "chenone/units.h"
#include "test-util.h"

namespace fs = std::filesystem;
using namespace chenone;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Check {
  int id;
  std::string name;
  double limit_sec;  // 0: no limit
  std::function<Outcome()> run;
};

std::string Fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

fs::path g_work;

// 1 ------------------------------------------------------------------------

Outcome GoldenLexicon() {
  auto inv = UnitInventory::Graphemic();
  Lexicon lex = BuildLexicon({"hello", "Michael's", "Ritz-Carlton", "DNN", "D.N.N.", "naïve"}, inv);
  std::ostringstream os;
  lex.Write(os, inv);
  const std::string expected =
      "hello\th_WB e l l o_WB\n"
      "Michael's\tM_WB i c h a e l ' s_WB\n"
      "Ritz-Carlton\tR_WB i t z - C a r l t o n_WB\n"
      "DNN\tD_WB N N_WB\n"
      "D.N.N.\tD_WB N N_WB\n"
      "naïve\tn_WB a i v e_WB\n";
  if (os.str() != expected) return {false, "got:\n" + os.str()};
  return {true, "6/6 entries byte-identical"};
}

// 2 ------------------------------------------------------------------------

// Generating partitions come from three tree-shaped families so that four
// leaves can express them: lefts onto 4 groups; lefts onto 2 groups crossed
// with the right; one right split further by lefts onto 3 groups.
Outcome TyingOracle() {
  auto inv = UnitInventory::Graphemic();
  auto unit = [&](const char *s) { return *inv.ParseUnitName(s); };
  const UnitId center = unit("a");
  const std::vector<UnitId> lefts{unit("b"), unit("c"), unit("d"), unit("e"), unit("f"), unit("g")};
  const std::vector<UnitId> rights{unit("h"), unit("k")};
  int recovered = 0;
  std::string failures;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    auto surject = [&](int groups) {
      std::vector<int> g(lefts.size());
      for (;;) {
        std::uniform_int_distribution<int> pick(0, groups - 1);
        for (int &x : g) x = pick(rng);
        if (static_cast<int>(std::set<int>(g.begin(), g.end()).size()) == groups) return g;
      }
    };
    std::map<TriContext, int> truth;
    const int family = static_cast<int>(seed % 3);
    if (family == 0) {
      auto g = surject(4);
      for (size_t l = 0; l < lefts.size(); ++l)
        for (UnitId r : rights) truth[{lefts[l], center, r}] = g[l];
    } else if (family == 1) {
      auto g = surject(2);
      for (size_t l = 0; l < lefts.size(); ++l)
        for (size_t r = 0; r < rights.size(); ++r) truth[{lefts[l], center, rights[r]}] = 2 * g[l] + static_cast<int>(r);
    } else {
      auto g = surject(3);
      for (size_t l = 0; l < lefts.size(); ++l) {
        truth[{lefts[l], center, rights[0]}] = g[l];
        truth[{lefts[l], center, rights[1]}] = 3;
      }
    }
    // K well separated means, 10 sigma apart, random order in 3-D
    const int32_t dim = 3;
    std::vector<std::vector<double>> means(4, std::vector<double>(dim, 0.0));
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int k = 0; k < 4; ++k) means[k][k % dim] = 10.0 * (1 + perm[k]);
    std::normal_distribution<double> z(0.0, 1.0);
    StatsTable stats(dim);
    for (const auto &[ctx, k] : truth)
      for (int n = 0; n < 60; ++n) {
        std::vector<float> x(dim);
        for (int32_t d = 0; d < dim; ++d) x[d] = static_cast<float>(means[k][d] + z(rng));
        stats.AddFrame(ctx, x);
      }
    TreeConfig config;
    config.max_leaves = 4;
    TiedStateMap map = GrowTree(stats, GenerateQuestions(stats), config);
    std::map<int, std::set<TriContext>> want, got;
    for (const auto &[ctx, k] : truth) {
      want[k].insert(ctx);
      got[map.Tie(ctx)].insert(ctx);
    }
    std::set<std::set<TriContext>> a, b;
    for (auto &[k, s] : want) a.insert(s);
    for (auto &[k, s] : got) b.insert(s);
    if (a == b) {
      ++recovered;
    } else {
      failures += " seed" + std::to_string(seed);
    }
  }
  return {recovered == 20, std::to_string(recovered) + "/20 seeds recovered exactly" + failures};
}

// 3 ------------------------------------------------------------------------

Outcome SplitGainOracle() {
  auto inv = UnitInventory::Graphemic();
  std::mt19937_64 rng(3);
  double worst = 0.0;
  int checked = 0;
  for (int32_t dim : {1, 5}) {
    for (int instance = 0; instance < 100; ++instance) {
      std::uniform_int_distribution<int> nctx(2, 6), nframes(2, 40);
      std::uniform_real_distribution<double> mean(-5.0, 5.0), sd(0.2, 3.0);
      std::normal_distribution<double> z(0.0, 1.0);
      const int32_t k = nctx(rng);
      StatsTable stats(dim);
      std::map<TriContext, std::vector<std::vector<double>>> frames;
      for (int32_t c = 0; c < k; ++c) {
        TriContext ctx{UnitInventory::MakeUnit(c + 1, Position::kInternal), *inv.ParseUnitName("a"), kNoContext};
        std::vector<double> mu(dim);
        for (double &m : mu) m = mean(rng);
        double s = sd(rng);
        for (int n = nframes(rng); n > 0; --n) {
          std::vector<float> x(dim);
          std::vector<double> xd(dim);
          for (int32_t d = 0; d < dim; ++d) xd[d] = x[d] = static_cast<float>(mu[d] + s * z(rng));
          stats.AddFrame(ctx, x);
          frames[ctx].push_back(xd);
        }
      }
      // a random proper nonempty subset of the lefts
      Question q{QuestionSlot::kLeft, {}};
      std::vector<int32_t> bases;
      for (int32_t c = 0; c < k; ++c) bases.push_back(c + 1);
      std::shuffle(bases.begin(), bases.end(), rng);
      q.members.assign(bases.begin(), bases.begin() + std::uniform_int_distribution<int>(1, k - 1)(rng));
      std::sort(q.members.begin(), q.members.end());
      std::vector<const StatsRow *> rows;
      for (const auto &row : stats.rows()) rows.push_back(&row);
      std::vector<std::vector<double>> yes, no, all;
      for (const auto &[ctx, f] : frames) {
        auto &side = q.Answer(ctx) ? yes : no;
        side.insert(side.end(), f.begin(), f.end());
        all.insert(all.end(), f.begin(), f.end());
      }
      double oracle = testing::FramesLogLik(yes) + testing::FramesLogLik(no) - testing::FramesLogLik(all);
      double gain = SplitGain(rows, q, 1.0);
      worst = std::max(worst, testing::RelDiff(gain, oracle));
      ++checked;
    }
  }
  return {worst <= 1e-9, std::to_string(checked) + " instances, worst relative error " + Fmt("%.3g", worst)};
}

// 4 ------------------------------------------------------------------------

Outcome EmMonotone() {
  const CdConfig cd{false, true, false};
  std::string detail;
  bool ok = true;
  for (uint64_t seed : {11, 12, 13}) {
    SyntheticSpec spec = DefaultSpec(seed, 12);
    spec.num_train = 200;
    spec.num_test = 0;
    SyntheticCorpus corpus = GenerateCorpus(spec);
    const Corpus &utts = corpus.train.corpus.utterances;
    HmmTopology topo;
    std::vector<UtteranceGraph> graphs;
    for (const auto &u : utts) graphs.push_back(BuildAlignmentGraph(u.words, corpus.lexicon, cd, topo));
    AcousticModel model = FlatStart(utts, corpus.lexicon, cd, topo);
    double prev = -testing::kInf, first = 0.0;
    for (int it = 0; it < 10; ++it) {
      EmResult r = EmIterate(model, utts, graphs);
      if (it == 0) first = r.log_likelihood;
      if (r.log_likelihood < prev - 1e-6 * std::abs(prev)) {
        ok = false;
        detail += " seed " + std::to_string(seed) + " dropped at iteration " + std::to_string(it) + ";";
      }
      prev = r.log_likelihood;
      model = std::move(r.model);
    }
    detail += " corpus " + std::to_string(seed) + ": " + Fmt("%.1f", first) + " -> " + Fmt("%.1f", prev) + ";";
  }
  return {ok, "3 corpora x 200 utterances x 10 iterations;" + detail};
}

// 5 ------------------------------------------------------------------------

Outcome BruteForceEquivalence() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  int64_t aligned = 0, decoded = 0, mismatches = 0;
  std::string first_failure;
  auto fail = [&](const std::string &what) {
    if (++mismatches == 1) first_failure = what;
  };
  // every arc subset over start, n emitting states and final
  for (int32_t n = 1; n <= 3; ++n) {
    AcousticModel model;
    model.dim = 2;
    model.tied_map = TiedStateMap::ContextIndependent({}, false);
    for (int32_t i = 0; i < n; ++i) model.pdfs.push_back(testing::RandomGaussian(2, rng));
    struct Arc {
      int32_t src, dst;
      double lp;
    };
    std::vector<Arc> arcs;
    const int32_t final_node = n + 1;
    for (int32_t i = 1; i <= n; ++i) {
      arcs.push_back({0, i, std::log(u(rng))});
      arcs.push_back({i, final_node, std::log(u(rng))});
      for (int32_t j = 1; j <= n; ++j) arcs.push_back({i, j, std::log(u(rng))});
    }
    std::vector<Matrix> feats;
    for (int32_t T = 1; T <= 6; ++T) feats.push_back(testing::RandomMatrix(T, 2, rng));
    const uint32_t subsets = 1u << arcs.size();
    for (uint32_t mask = 0; mask < subsets; ++mask) {
      UtteranceGraph g;
      g.SetStart(g.AddNode({}));
      for (int32_t i = 0; i < n; ++i) {
        GraphNode node;
        node.emitting = true;
        node.pdf = i;
        g.AddNode(node);
      }
      g.SetFinal(g.AddNode({}));
      for (size_t a = 0; a < arcs.size(); ++a)
        if (mask >> a & 1u) g.AddArc(arcs[a].src, arcs[a].dst, arcs[a].lp);
      // all lengths for small graphs, one length per subset for n = 3
      std::vector<int32_t> lengths;
      if (n < 3) {
        for (int32_t T = 1; T <= 6; ++T) lengths.push_back(T);
      } else {
        lengths.push_back(1 + static_cast<int32_t>(mask % 6));
      }
      for (int32_t T : lengths) {
        const Matrix &x = feats[T - 1];
        auto brute = testing::BruteForceAlign(g, x, model);
        ++aligned;
        try {
          auto res = ViterbiAlign(g, x, model);
          if (brute.score == -testing::kInf || testing::RelDiff(res.log_likelihood, brute.score) > 1e-9) {
            fail("alignment n=" + std::to_string(n) + " mask=" + std::to_string(mask));
            continue;
          }
          if (brute.score - brute.runner_up > 1e-9) {
            std::vector<int32_t> nodes;
            for (const auto &f : res.frame_labels) nodes.push_back(f.node);
            if (nodes != brute.nodes) fail("alignment path n=" + std::to_string(n) + " mask=" + std::to_string(mask));
          }
        } catch (const Error &e) {
          if (!(e.code() == ErrorCode::kNoPath && brute.score == -testing::kInf))
            fail(std::string("alignment threw ") + e.what());
        }
      }
    }
  }
  for (int trial = 0; trial < 600; ++trial) {
    auto in = testing::RandomDecodeInstance(rng, 1 + trial % 3, 2);
    DecodeConfig config;
    config.beam = testing::kInf;
    config.lm_weight = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    config.word_insertion_penalty = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const int32_t T = 1 + trial % 8;
    Matrix x = testing::RandomMatrix(T, 2, rng);
    auto brute = testing::BruteForceDecode(x, in.model, in.lex, in.lm, in.cd, config);
    ++decoded;
    try {
      auto res = Decode(x, in.model, in.tree, in.lm, config);
      if (brute.total == -testing::kInf || testing::RelDiff(res.total, brute.total) > 1e-9)
        fail("decode trial " + std::to_string(trial));
      else if (brute.total - brute.runner_up > 1e-9 && res.words != brute.words)
        fail("decode words trial " + std::to_string(trial));
    } catch (const Error &e) {
      if (!(e.code() == ErrorCode::kNoHypothesis && brute.total == -testing::kInf))
        fail(std::string("decode threw ") + e.what());
    }
  }
  std::string detail = std::to_string(aligned) + " alignments, " + std::to_string(decoded) +
                       " decodes, " + std::to_string(mismatches) + " mismatches";
  if (mismatches) detail += " (first: " + first_failure + ")";
  return {mismatches == 0, detail};
}

// 6 and 10 -----------------------------------------------------------------

PipelineConfig DefaultRunConfig(const fs::path &out, int32_t jobs) {
  PipelineConfig c = LoadPipelineConfig(std::string(CHENONE_SOURCE_DIR) + "/configs/default.ini");
  c.out = out.string();
  c.jobs = jobs;
  fs::remove_all(out);
  return c;
}

std::string ReportValue(const std::string &path, const std::string &key) {
  for (const auto &[k, v] : ReadReport(path))
    if (k == key) return v;
  return "";
}

Outcome EndToEnd() {
  PipelineConfig c = DefaultRunConfig(g_work / "e2e", 1);
  CmdRun(c);
  double wer = std::stod(ReportValue(c.OutPath(kReportFile), "wer_exact"));
  return {wer <= 2.0, "WER " + Fmt("%.2f", wer) + "% over " +
                          ReportValue(c.OutPath(kReportFile), "ref_words") + " test words"};
}

std::map<std::string, std::string> HashTree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file())
      out[fs::relative(entry.path(), root).generic_string()] = Sha256File(entry.path().string());
  return out;
}

Outcome Determinism() {
  PipelineConfig a = DefaultRunConfig(g_work / "det-a", 1);
  PipelineConfig b = DefaultRunConfig(g_work / "det-b", 2);
  CmdRun(a);
  CmdRun(b);
  auto ha = HashTree(a.out), hb = HashTree(b.out);
  std::string diff;
  for (const auto &[name, h] : ha)
    if (!hb.count(name) || hb[name] != h) diff += " " + name;
  for (const auto &[name, h] : hb)
    if (!ha.count(name)) diff += " " + name;
  if (!diff.empty()) return {false, "differing files:" + diff};
  return {true, std::to_string(ha.size()) + " files hash-identical (jobs 1 vs 2)"};
}

// 7 ------------------------------------------------------------------------

Outcome Ablation() {
  int wins = 0;
  std::string table;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    PipelineConfig c = LoadPipelineConfig(std::string(CHENONE_SOURCE_DIR) + "/configs/ablation.ini");
    c.seed = seed;
    c.out = (g_work / ("ablate-" + std::to_string(seed))).string();
    fs::remove_all(c.out);
    auto cells = CmdAblate(c);
    std::map<std::pair<bool, bool>, double> wer;
    bool complete = true;
    for (const auto &cell : cells) {
      if (!cell.wer) {
        complete = false;
        table += " seed " + std::to_string(seed) + " failed: " + cell.error + ";";
        continue;
      }
      wer[{cell.context_dependent, cell.position_dependent}] = *cell.wer;
    }
    if (!complete) continue;
    // CD on beats CD off and PD on beats PD off, at either setting of the other
    bool ok = wer[{true, false}] < wer[{false, false}] && wer[{true, true}] < wer[{false, true}] &&
              wer[{false, true}] < wer[{false, false}] && wer[{true, true}] < wer[{true, false}];
    wins += ok;
    table += " " + std::to_string(seed) + ":" + Fmt("%.1f", wer[{false, false}]) + "/" +
             Fmt("%.1f", wer[{false, true}]) + "/" + Fmt("%.1f", wer[{true, false}]) + "/" +
             Fmt("%.1f", wer[{true, true}]) + (ok ? "" : "!");
  }
  return {wins == 10, std::to_string(wins) + "/10 seeds; WER NN/NY/YN/YY" + table};
}

// 8 ------------------------------------------------------------------------

Outcome TaggedCer() {
  struct Row {
    const char *ref, *hyp;
    std::vector<std::pair<int32_t, int32_t>> spans;
  };
  // per-span character errors / reference characters, worked out by hand:
  //  1 jean valjean -> jean val jean   1/12   one inserted space
  //  2 saint paul   -> (deleted)       10/10
  //  3 michael      -> michel          1/7
  //  4 louvre       -> louvre          0/6
  //  5 siri, kyoto  -> siri, kioto     0/4 + 1/5
  //  6 new york     -> newark          3/8    delete space, y->a, delete o
  //  7 dr smith     -> doctor smith    4/8
  //  8 abba         -> a b b a         3/4    three inserted spaces
  //  9 san jose     -> san hose        1/8
  // 10 zoe          -> zoe extra       6/3    trailing insertion attaches to zoe
  const std::vector<Row> rows{
      {"we met jean valjean in paris", "we met jean val jean in paris", {{2, 3}}},
      {"to saint paul we go", "to we go", {{1, 2}}},
      {"call michael now", "call michel now", {{1, 1}}},
      {"the louvre is big", "the louvre is big", {{1, 1}}},
      {"ask siri about kyoto", "ask siri about kioto", {{1, 1}, {3, 3}}},
      {"hello new york city", "hello newark city", {{1, 2}}},
      {"meet dr smith at noon", "meet doctor smith at noon", {{1, 2}}},
      {"play abba songs", "play a b b a songs", {{1, 1}}},
      {"go to san jose now", "go to san hose now", {{2, 3}}},
      {"bye zoe", "bye zoe extra", {{1, 1}}},
  };
  const int64_t hand_errors = 1 + 10 + 1 + 0 + 1 + 3 + 4 + 3 + 1 + 6;
  const int64_t hand_chars = 12 + 10 + 7 + 6 + 9 + 8 + 8 + 4 + 8 + 3;
  std::vector<SegmentPair> segments;
  for (size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> ref, hyp;
    std::istringstream rs(rows[i].ref), hs(rows[i].hyp);
    for (std::string w; rs >> w;) ref.push_back(w);
    for (std::string w; hs >> w;) hyp.push_back(w);
    std::vector<TagSpan> tags;
    for (auto [b, e] : rows[i].spans) tags.push_back({"utt" + std::to_string(i), b, e, TagLabel::kProperNoun});
    auto pairs = ExtractTaggedSegments(ref, hyp, AlignWords(ref, hyp), tags);
    segments.insert(segments.end(), pairs.begin(), pairs.end());
  }
  ErrorCounts counts = CerCounts(segments);
  const double cer = ComputeCer(segments);
  const double hand_cer = 100.0 * static_cast<double>(hand_errors) / static_cast<double>(hand_chars);

  std::map<std::string, int64_t> uniform;
  for (int i = 0; i < 10; ++i) uniform["word" + std::to_string(i)] = 7;
  const size_t rare = SelectRareWords(uniform, 0.8).size();

  bool ok = counts.Errors() == hand_errors && counts.reference_length == hand_chars && cer == hand_cer &&
            rare == 8;
  return {ok, "CER " + std::to_string(counts.Errors()) + "/" + std::to_string(counts.reference_length) +
                  " = " + Fmt("%.4f", cer) + "% (hand " + std::to_string(hand_errors) + "/" +
                  std::to_string(hand_chars) + "); rare words selected " + std::to_string(rare) + "/10"};
}

// 9 ------------------------------------------------------------------------

Outcome EditDistanceOracle() {
  std::vector<std::vector<std::string>> strings{{}};
  for (size_t i = 0; i < strings.size(); ++i) {
    if (strings[i].size() == 6) continue;
    for (const char *s : {"x", "y", "z"}) {
      auto next = strings[i];
      next.push_back(s);
      strings.push_back(std::move(next));
    }
  }
  int64_t pairs = 0, wrong = 0;
  for (const auto &a : strings)
    for (const auto &b : strings) {
      ++pairs;
      if (EditCost(AlignWords(a, b)) != testing::ReferenceEditDistance(a, b)) ++wrong;
    }
  return {wrong == 0, std::to_string(pairs) + " pairs over " + std::to_string(strings.size()) +
                          " strings, " + std::to_string(wrong) + " disagreements"};
}

}  // namespace

int main(int argc, char **argv) {
  g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "chenone-acceptance";
  fs::create_directories(g_work);

  const std::vector<Check> checks{
      {1, "golden lexicon", 1.0, GoldenLexicon},
      {2, "tying oracle", 10.0, TyingOracle},
      {3, "split-gain oracle", 1.0, SplitGainOracle},
      {4, "EM monotonicity", 60.0, EmMonotone},
      {5, "Viterbi and decoder brute force", 30.0, BruteForceEquivalence},
      {6, "end-to-end synthetic WER", 300.0, EndToEnd},
      {7, "ablation directionality", 0.0, Ablation},
      {8, "tagged-segment CER and rare words", 0.0, TaggedCer},
      {9, "edit-distance oracle", 30.0, EditDistanceOracle},
      {10, "determinism", 0.0, Determinism},
  };
  int failed = 0;
  for (const auto &check : checks) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check.run();
    } catch (const std::exception &e) {
      out = {false, std::string("threw ") + e.what()};
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (check.limit_sec > 0 && sec > check.limit_sec) {
      out.ok = false;
      out.detail += "; over the " + Fmt("%.0f", check.limit_sec) + " s budget";
    }
    failed += !out.ok;
    std::printf("[%s] %2d %-36s %8.2f s  %s\n", out.ok ? "PASS" : "FAIL", check.id, check.name.c_str(), sec,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance checks passed\n", static_cast<int>(checks.size()) - failed, checks.size());
  return failed == 0 ? 0 : 1;
}
