// include/chenone/pipeline.h

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


#ifndef CHENONE_PIPELINE_H_
#define CHENONE_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chenone/context.h"
#include "chenone/decoder.h"
#include "chenone/eval.h"
#include "chenone/tree.h"
#include "chenone/units.h"

namespace chenone {

/// Everything a pipeline run depends on. Relative paths are resolved
/// against the working directory; empty corpus-derived paths default to
/// files inside `corpus`.
struct PipelineConfig {
  // [data]
  std::string out = "exp";
  std::string corpus;  // default: <out>/corpus
  std::string train_split = "train";
  std::string test_split = "test";
  std::string words;             // default: <corpus>/words.txt
  std::string lm;                // default: <corpus>/lm.arpa
  std::string phonetic_lexicon;  // switches to phonetic units
  std::string inventory;         // unit inventory for a phonetic lexicon

  // [units]
  CaseMode case_mode = CaseMode::kPreserve;
  // [context]
  CdConfig cd;
  // [tree]
  TreeConfig tree;
  // [train]
  double self_loop = 0.5;
  int32_t bootstrap_iters = 4;
  std::vector<int32_t> mixtures{1, 2};
  int32_t iters_per_mixture = 3;
  // [decode]
  DecodeConfig decode;
  // [score]
  double rare_threshold = 0.8;
  RareWordMode rare_mode = RareWordMode::kType;
  bool count_spaces = true;
  // [synth]
  std::string synth_preset = "default";  // default | ablation
  int32_t synth_words = 20;
  int32_t synth_pairs = 6;
  int32_t synth_train = 500;
  int32_t synth_test = 100;
  int32_t synth_dim = 8;
  double synth_separation = 10.0;
  // [ablate]
  std::vector<CaseMode> ablate_cases{CaseMode::kPreserve};

  uint64_t seed = 1;
  int32_t jobs = 1;

  /// `section.key = value`; throws kInvalidArgument for unknown keys or
  /// unparsable values.
  void Set(const std::string &key, const std::string &value);
  /// Canonical sorted `section.key=value` lines of every setting that can
  /// change an artifact (paths, jobs and out excluded).
  std::string Describe() const;

  std::string CorpusDir() const;
  std::string SplitDir(const std::string &split) const;
  std::string WordsPath() const;
  std::string LmPath() const;
  std::string OutPath(const std::string &name) const;
};

/// Reads a `key = value` file with `[section]` headers, then applies
/// `overrides` (`section.key=value`).
PipelineConfig LoadPipelineConfig(const std::string &path,
                                  const std::vector<std::string> &overrides = {});
void ApplyOverrides(PipelineConfig *config, const std::vector<std::string> &overrides);

/// Artifact names inside the output directory.
inline constexpr const char *kLexiconFile = "lexicon.txt";
inline constexpr const char *kCiTreeFile = "ci.tree";
inline constexpr const char *kCiModelFile = "ci.mdl";
inline constexpr const char *kAlignmentFile = "ali.txt";
inline constexpr const char *kStatsFile = "stats.txt";
inline constexpr const char *kTreeFile = "tree.txt";
inline constexpr const char *kModelFile = "final.mdl";
inline constexpr const char *kHypothesisFile = "hyp.txt";
inline constexpr const char *kReportFile = "report.txt";
inline constexpr const char *kAblationFile = "ablation.txt";
inline constexpr const char *kManifestFile = "MANIFEST";

struct StageSummary {
  std::string stage;
  std::vector<std::string> outputs;
  std::vector<std::string> notes;  // human-readable progress lines
};

StageSummary CmdSynth(const PipelineConfig &config);
StageSummary CmdLexicon(const PipelineConfig &config);
/// Flat start, bootstrap EM, then alignment of the training split.
StageSummary CmdAlign(const PipelineConfig &config);
StageSummary CmdStats(const PipelineConfig &config);
StageSummary CmdTree(const PipelineConfig &config);
/// Retie then mixture-growing EM.
StageSummary CmdTrain(const PipelineConfig &config);
StageSummary CmdDecode(const PipelineConfig &config);
StageSummary CmdScore(const PipelineConfig &config);
/// lexicon through score; synthesizes the corpus first when it is missing.
std::vector<StageSummary> CmdRun(const PipelineConfig &config);

struct AblationCell {
  bool context_dependent;
  bool position_dependent;
  CaseMode case_mode;
  std::optional<double> wer;
  std::string error;
};

/// The CD x PD grid for every configured case mode, one pipeline run per
/// cell under <out>/ablate/. Failed cells are recorded and skipped.
std::vector<AblationCell> CmdAblate(const PipelineConfig &config);

/// Per-utterance frame contexts: `utt_id<TAB>l/c/r l/c/r ...`.
void WriteAlignments(std::ostream &os,
                     const std::vector<std::pair<std::string, std::vector<TriContext>>> &rows,
                     const UnitInventory &inventory);
std::vector<std::pair<std::string, std::vector<TriContext>>> ReadAlignments(
    std::istream &is, const UnitInventory &inventory);

/// Graphemic inventory, or the configured phone set when a phonetic
/// lexicon is used.
UnitInventory LoadInventory(const PipelineConfig &config);
LexiconSource LexiconSourceOf(const PipelineConfig &config);

/// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::string &path);

/// Parses report.txt back into key/value pairs.
std::vector<std::pair<std::string, std::string>> ReadReport(const std::string &path);

}  // namespace chenone

#endif  // CHENONE_PIPELINE_H_
