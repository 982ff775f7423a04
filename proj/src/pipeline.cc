// src/pipeline.cc

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

#include "chenone/pipeline.h"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "chenone/acoustic-model.h"
#include "chenone/arpa-lm.h"
#include "chenone/corpus.h"
#include "chenone/error.h"
#include "chenone/parallel.h"
#include "chenone/prefix-tree.h"
#include "chenone/synth.h"
#include "chenone/text-utils.h"

namespace chenone {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Settings

namespace {

bool ParseBool(const std::string &v, bool *out) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return *out = true, true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return *out = false, true;
  return false;
}

template <typename T>
bool ParseValue(const std::string &v, T *out);

template <>
bool ParseValue(const std::string &v, bool *out) { return ParseBool(v, out); }

template <>
bool ParseValue(const std::string &v, int32_t *out) {
  long long x = 0;
  if (!ParseInt(v, &x) || x < INT32_MIN || x > INT32_MAX) return false;
  *out = static_cast<int32_t>(x);
  return true;
}

template <>
bool ParseValue(const std::string &v, uint64_t *out) {
  long long x = 0;
  if (!ParseInt(v, &x) || x < 0) return false;
  *out = static_cast<uint64_t>(x);
  return true;
}

template <>
bool ParseValue(const std::string &v, double *out) { return ParseDouble(v, out); }

template <>
bool ParseValue(const std::string &v, std::string *out) {
  *out = v;
  return true;
}

template <>
bool ParseValue(const std::string &v, CaseMode *out) {
  auto m = ParseCaseMode(v);
  if (m) *out = *m;
  return m.has_value();
}

template <>
bool ParseValue(const std::string &v, RareWordMode *out) {
  if (v == "type") *out = RareWordMode::kType;
  else if (v == "token") *out = RareWordMode::kToken;
  else return false;
  return true;
}

std::vector<std::string> ListItems(const std::string &v) {
  std::string s = v;
  for (char &c : s)
    if (c == ',') c = ' ';
  return SplitWhitespace(s);
}

template <>
bool ParseValue(const std::string &v, std::vector<int32_t> *out) {
  std::vector<int32_t> items;
  for (const auto &item : ListItems(v)) {
    int32_t x = 0;
    if (!ParseValue(item, &x) || x < 1) return false;
    items.push_back(x);
  }
  if (items.empty()) return false;
  *out = std::move(items);
  return true;
}

template <>
bool ParseValue(const std::string &v, std::vector<CaseMode> *out) {
  std::vector<CaseMode> items;
  for (const auto &item : ListItems(v)) {
    CaseMode m;
    if (!ParseValue(item, &m)) return false;
    items.push_back(m);
  }
  if (items.empty()) return false;
  *out = std::move(items);
  return true;
}

std::string FormatValue(bool v) { return v ? "true" : "false"; }
std::string FormatValue(int32_t v) { return std::to_string(v); }
std::string FormatValue(uint64_t v) { return std::to_string(v); }
std::string FormatValue(double v) { return FormatDouble(v); }
std::string FormatValue(const std::string &v) { return v; }
std::string FormatValue(CaseMode v) { return CaseModeName(v); }
std::string FormatValue(RareWordMode v) { return v == RareWordMode::kType ? "type" : "token"; }
std::string FormatValue(const std::vector<int32_t> &v) {
  std::vector<std::string> parts;
  for (int32_t x : v) parts.push_back(std::to_string(x));
  return Join(parts, ",");
}
std::string FormatValue(const std::vector<CaseMode> &v) {
  std::vector<std::string> parts;
  for (CaseMode x : v) parts.push_back(CaseModeName(x));
  return Join(parts, ",");
}

struct Field {
  std::function<bool(PipelineConfig &, const std::string &)> set;
  std::function<std::string(const PipelineConfig &)> get;
  bool affects_artifacts;
};

template <typename T>
Field MakeField(T &(*access)(PipelineConfig &), bool affects_artifacts = true) {
  return {[access](PipelineConfig &c, const std::string &v) { return ParseValue(v, &access(c)); },
          [access](const PipelineConfig &c) {
            return FormatValue(access(const_cast<PipelineConfig &>(c)));
          },
          affects_artifacts};
}

#define CHENONE_FIELD(key, member, ...)                                              \
  {                                                                                  \
    key, MakeField(+[](PipelineConfig &c) -> auto & { return c.member; }, ##__VA_ARGS__) \
  }

const std::map<std::string, Field> &Fields() {
  static const std::map<std::string, Field> fields = {
      CHENONE_FIELD("data.out", out, false),
      CHENONE_FIELD("data.corpus", corpus, false),
      CHENONE_FIELD("data.train_split", train_split),
      CHENONE_FIELD("data.test_split", test_split),
      CHENONE_FIELD("data.words", words, false),
      CHENONE_FIELD("data.lm", lm, false),
      CHENONE_FIELD("data.phonetic_lexicon", phonetic_lexicon, false),
      CHENONE_FIELD("data.inventory", inventory, false),
      CHENONE_FIELD("units.case", case_mode),
      CHENONE_FIELD("context.cd", cd.context_dependent),
      CHENONE_FIELD("context.pd", cd.position_dependent),
      CHENONE_FIELD("context.cross_word", cd.cross_word_context),
      CHENONE_FIELD("tree.max_leaves", tree.max_leaves),
      CHENONE_FIELD("tree.min_gain", tree.min_gain),
      CHENONE_FIELD("tree.min_count", tree.min_count),
      CHENONE_FIELD("tree.share_wb_root", tree.share_wb_root),
      CHENONE_FIELD("tree.variance_floor", tree.variance_floor),
      CHENONE_FIELD("train.self_loop", self_loop),
      CHENONE_FIELD("train.bootstrap_iters", bootstrap_iters),
      CHENONE_FIELD("train.mixtures", mixtures),
      CHENONE_FIELD("train.iters_per_mixture", iters_per_mixture),
      CHENONE_FIELD("decode.beam", decode.beam),
      CHENONE_FIELD("decode.max_active", decode.max_active),
      CHENONE_FIELD("decode.lm_weight", decode.lm_weight),
      CHENONE_FIELD("decode.word_insertion_penalty", decode.word_insertion_penalty),
      CHENONE_FIELD("decode.optional_silence_prob", decode.optional_silence_prob),
      CHENONE_FIELD("score.rare_threshold", rare_threshold),
      CHENONE_FIELD("score.rare_mode", rare_mode),
      CHENONE_FIELD("score.count_spaces", count_spaces),
      CHENONE_FIELD("synth.preset", synth_preset),
      CHENONE_FIELD("synth.words", synth_words),
      CHENONE_FIELD("synth.pairs", synth_pairs),
      CHENONE_FIELD("synth.train", synth_train),
      CHENONE_FIELD("synth.test", synth_test),
      CHENONE_FIELD("synth.dim", synth_dim),
      CHENONE_FIELD("synth.separation", synth_separation),
      CHENONE_FIELD("ablate.cases", ablate_cases),
      CHENONE_FIELD("run.seed", seed),
      CHENONE_FIELD("run.jobs", jobs, false),
  };
  return fields;
}

#undef CHENONE_FIELD

}  // namespace

void PipelineConfig::Set(const std::string &key, const std::string &value) {
  auto it = Fields().find(key);
  if (it == Fields().end()) CHENONE_ERR(kInvalidArgument) << "unknown setting '" << key << "'";
  std::string v(Trim(value));
  if (!it->second.set(*this, v))
    CHENONE_ERR(kInvalidArgument) << "bad value for " << key << ": '" << v << "'";
}

std::string PipelineConfig::Describe() const {
  std::string out;
  for (const auto &[key, field] : Fields())
    if (field.affects_artifacts) out += key + "=" + field.get(*this) + "\n";
  return out;
}

std::string PipelineConfig::CorpusDir() const {
  return corpus.empty() ? (fs::path(out) / "corpus").string() : corpus;
}

std::string PipelineConfig::SplitDir(const std::string &split) const {
  return (fs::path(CorpusDir()) / split).string();
}

std::string PipelineConfig::WordsPath() const {
  return words.empty() ? (fs::path(CorpusDir()) / "words.txt").string() : words;
}

std::string PipelineConfig::LmPath() const {
  return lm.empty() ? (fs::path(CorpusDir()) / "lm.arpa").string() : lm;
}

std::string PipelineConfig::OutPath(const std::string &name) const {
  return (fs::path(out) / name).string();
}

void ApplyOverrides(PipelineConfig *config, const std::vector<std::string> &overrides) {
  for (const auto &o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos)
      CHENONE_ERR(kInvalidArgument) << "override '" << o << "' is not key=value";
    config->Set(std::string(Trim(o.substr(0, eq))), o.substr(eq + 1));
  }
}

PipelineConfig LoadPipelineConfig(const std::string &path,
                                  const std::vector<std::string> &overrides) {
  PipelineConfig config;
  if (!path.empty()) {
    if (!fs::exists(path)) CHENONE_ERR(kMissingArtifact) << "no config file " << path;
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error &e) {
      CHENONE_ERR(kMalformedLine) << path << ":" << e.line() << ": " << e.message();
    }
    for (const auto &[section, body] : tree) {
      if (body.empty())
        CHENONE_ERR(kMalformedLine) << path << ": '" << section << "' is outside a section";
      for (const auto &[key, value] : body) {
        try {
          config.Set(section + "." + key, value.data());
        } catch (const Error &e) {
          throw Error(e.code(), path + ": " + (e.what() + std::strlen(ErrorCodeName(e.code())) + 2));
        }
      }
    }
  }
  ApplyOverrides(&config, overrides);
  return config;
}

// ---------------------------------------------------------------------------
// Files and manifest

std::string Sha256File(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot hash " << path;
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<size_t>(is.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

namespace {

std::string Sha256Text(const std::string &text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

// Paths in the manifest are relative to the output or corpus directory so
// that identical runs in different places produce identical manifests.
std::string DisplayPath(const PipelineConfig &config, const std::string &path) {
  auto inside = [](const fs::path &p, const fs::path &dir) -> std::optional<std::string> {
    fs::path rel = fs::weakly_canonical(p).lexically_relative(fs::weakly_canonical(dir));
    if (rel.empty() || *rel.begin() == "..") return std::nullopt;
    return rel.generic_string();
  };
  if (auto r = inside(path, config.CorpusDir())) return "corpus/" + *r;
  if (auto r = inside(path, config.out)) return *r;
  return path;
}

void RecordManifest(const PipelineConfig &config, const std::string &stage,
                    const std::vector<std::string> &inputs,
                    const std::vector<std::string> &outputs) {
  std::string line = stage + " config=" + Sha256Text(config.Describe());
  for (const auto &p : inputs) line += " in=" + DisplayPath(config, p) + ":" + Sha256File(p);
  for (const auto &p : outputs) line += " out=" + DisplayPath(config, p) + ":" + Sha256File(p);

  const std::string path = config.OutPath(kManifestFile);
  std::vector<std::string> lines;
  bool replaced = false;
  {
    std::ifstream is(path);
    for (std::string l; std::getline(is, l);) {
      if (l.rfind(stage + " ", 0) == 0) {
        l = line;
        replaced = true;
      }
      lines.push_back(l);
    }
  }
  if (!replaced) lines.push_back(line);
  std::ofstream os(path, std::ios::binary);
  if (!os) CHENONE_ERR(kIo) << "cannot write " << path;
  for (const auto &l : lines) os << l << '\n';
}

std::ofstream OpenOutput(const std::string &path) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) CHENONE_ERR(kIo) << "cannot write " << path;
  return os;
}

void RequireFile(const std::string &path, const std::string &stage) {
  if (!fs::exists(path))
    CHENONE_ERR(kMissingArtifact) << stage << " needs " << path
                                  << "; run the earlier stages first";
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open " << path;
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);)
    if (!Trim(l).empty()) lines.emplace_back(Trim(l));
  return lines;
}

}  // namespace

UnitInventory LoadInventory(const PipelineConfig &config) {
  if (config.phonetic_lexicon.empty()) return UnitInventory::Graphemic(config.case_mode);
  if (config.inventory.empty())
    CHENONE_ERR(kInvalidArgument) << "a phonetic lexicon needs data.inventory";
  return UnitInventory::ReadFile(config.inventory, config.case_mode);
}

LexiconSource LexiconSourceOf(const PipelineConfig &config) {
  return config.phonetic_lexicon.empty() ? LexiconSource::kGraphemic : LexiconSource::kPhonetic;
}

namespace {

Lexicon LoadStageLexicon(const PipelineConfig &config, const UnitInventory &inventory,
                         const std::string &stage) {
  RequireFile(config.OutPath(kLexiconFile), stage);
  return ReadLexiconFile(config.OutPath(kLexiconFile), inventory, LexiconSourceOf(config));
}

struct TrainingData {
  Corpus corpus;
  std::vector<UtteranceGraph> graphs;
  int32_t dropped = 0;
};

TrainingData LoadTrainingData(const PipelineConfig &config, const Lexicon &lexicon,
                              const HmmTopology &topology) {
  TrainingData data;
  CorpusSplit split = ReadCorpusSplit(config.SplitDir(config.train_split));
  GraphOptions options;
  options.optional_silence_prob = config.decode.optional_silence_prob;
  for (auto &utt : split.utterances) {
    if (utt.words.empty()) {
      ++data.dropped;
      continue;
    }
    data.graphs.push_back(BuildAlignmentGraph(utt.words, lexicon, config.cd, topology, options));
    data.corpus.push_back(std::move(utt));
  }
  if (data.corpus.empty())
    CHENONE_ERR(kEmptyTranscript) << "no transcribed training utterances in "
                                  << config.SplitDir(config.train_split);
  return data;
}

std::string Note(const char *fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

void WriteModel(const AcousticModel &model, const std::string &path) {
  auto os = OpenOutput(path);
  model.Write(os);
}

void WriteTree(const TiedStateMap &map, const UnitInventory &inv, const std::string &path) {
  auto os = OpenOutput(path);
  map.Write(os, inv);
}

}  // namespace

// ---------------------------------------------------------------------------
// Alignment and report files

void WriteAlignments(std::ostream &os,
                     const std::vector<std::pair<std::string, std::vector<TriContext>>> &rows,
                     const UnitInventory &inventory) {
  for (const auto &[id, contexts] : rows) {
    os << id << '\t';
    for (size_t t = 0; t < contexts.size(); ++t)
      os << (t ? " " : "") << ContextName(contexts[t], inventory);
    os << '\n';
  }
}

std::vector<std::pair<std::string, std::vector<TriContext>>> ReadAlignments(
    std::istream &is, const UnitInventory &inventory) {
  std::vector<std::pair<std::string, std::vector<TriContext>>> rows;
  int64_t line_no = 0;
  for (const auto &[id, text] : ReadKeyedText(is)) {
    ++line_no;
    std::vector<TriContext> contexts;
    for (const auto &name : SplitWhitespace(text)) {
      auto ctx = ParseContextName(name, inventory);
      if (!ctx)
        CHENONE_ERR(kMalformedLine) << "alignment for " << id << ": bad context '" << name
                                    << "'";
      contexts.push_back(*ctx);
    }
    rows.emplace_back(id, std::move(contexts));
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> ReadReport(const std::string &path) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto &line : ReadLines(path)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) CHENONE_ERR(kMalformedLine) << path << ": '" << line << "'";
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Stages

StageSummary CmdSynth(const PipelineConfig &config) {
  SyntheticSpec spec;
  if (config.synth_preset == "default") {
    spec = DefaultSpec(config.seed, config.synth_words);
  } else if (config.synth_preset == "ablation") {
    spec = AblationSpec(config.seed, config.synth_pairs);
  } else {
    CHENONE_ERR(kInvalidArgument) << "unknown synth preset '" << config.synth_preset << "'";
  }
  spec.num_train = config.synth_train;
  spec.num_test = config.synth_test;
  spec.dim = config.synth_dim;
  spec.separation = config.synth_separation;
  spec.self_loop_prob = config.self_loop;
  SyntheticCorpus corpus = GenerateCorpus(spec);
  const std::string dir = config.CorpusDir();
  WriteSyntheticCorpus(corpus, dir);

  StageSummary summary{"synth", {}, {}};
  for (const char *f : {"words.txt", "lexicon.txt", "lm.arpa", "sounds.txt"})
    summary.outputs.push_back((fs::path(dir) / f).string());
  for (const char *split : {"train", "test"})
    for (const char *f : {"text", "segments", "feats.cfea", "tags", "ali.truth"})
      summary.outputs.push_back((fs::path(dir) / split / f).string());
  summary.notes.push_back(std::to_string(spec.words.size()) + " words, " +
                          std::to_string(spec.num_train) + " train / " +
                          std::to_string(spec.num_test) + " test utterances in " + dir);
  fs::create_directories(config.out);
  RecordManifest(config, "synth", {}, summary.outputs);
  return summary;
}

StageSummary CmdLexicon(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  Lexicon lexicon;
  std::vector<std::string> inputs;
  StageSummary summary{"lexicon", {config.OutPath(kLexiconFile)}, {}};
  if (config.phonetic_lexicon.empty()) {
    std::vector<std::string> skipped;
    lexicon = BuildLexicon(ReadLines(config.WordsPath()), inv, &skipped);
    inputs.push_back(config.WordsPath());
    for (const auto &w : skipped) summary.notes.push_back("skipped '" + w + "'");
  } else {
    lexicon = LoadPhoneticLexicon(config.phonetic_lexicon, inv);
    inputs = {config.phonetic_lexicon, config.inventory};
  }
  {
    auto os = OpenOutput(config.OutPath(kLexiconFile));
    lexicon.Write(os, inv);
  }
  summary.notes.push_back(std::to_string(lexicon.NumWords()) + " words");
  RecordManifest(config, "lexicon", inputs, summary.outputs);
  return summary;
}

StageSummary CmdAlign(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  Lexicon lexicon = LoadStageLexicon(config, inv, "align");
  HmmTopology topology(config.self_loop);
  TrainingData data = LoadTrainingData(config, lexicon, topology);
  StageSummary summary{"align",
                       {config.OutPath(kCiTreeFile), config.OutPath(kCiModelFile),
                        config.OutPath(kAlignmentFile)},
                       {}};
  FlatStartReport report;
  AcousticModel model =
      FlatStart(data.corpus, lexicon, config.cd, topology, config.tree.share_wb_root, &report);
  for (const auto &id : report.skipped)
    summary.notes.push_back("flat start skipped " + id + " (too short)");
  EmOptions options;
  options.jobs = config.jobs;
  options.variance_floor = config.tree.variance_floor;
  for (int32_t it = 0; it < config.bootstrap_iters; ++it) {
    EmResult r = EmIterate(model, data.corpus, data.graphs, options);
    summary.notes.push_back(Note("bootstrap iteration %.0f: log-likelihood %.6g", it + 1,
                                 r.log_likelihood));
    model = std::move(r.model);
  }

  const int64_t n = static_cast<int64_t>(data.corpus.size());
  std::vector<std::optional<AlignmentResult>> alignments(n);
  ParallelFor(n, config.jobs, [&](int64_t i) {
    try {
      alignments[i] = ViterbiAlign(data.graphs[i], data.corpus[i].features, model);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoPath) throw;
    }
  });
  std::vector<std::pair<std::string, std::vector<TriContext>>> rows;
  for (int64_t i = 0; i < n; ++i) {
    if (!alignments[i]) {
      summary.notes.push_back("no alignment for " + data.corpus[i].id);
      continue;
    }
    std::vector<TriContext> contexts;
    for (const auto &f : alignments[i]->frame_labels) contexts.push_back(f.context);
    rows.emplace_back(data.corpus[i].id, std::move(contexts));
  }
  WriteTree(model.tied_map, inv, config.OutPath(kCiTreeFile));
  WriteModel(model, config.OutPath(kCiModelFile));
  {
    auto os = OpenOutput(config.OutPath(kAlignmentFile));
    WriteAlignments(os, rows, inv);
  }
  const std::string split = config.SplitDir(config.train_split);
  RecordManifest(config, "align",
                 {config.OutPath(kLexiconFile), split + "/text", split + "/segments",
                  split + "/feats.cfea"},
                 summary.outputs);
  return summary;
}

StageSummary CmdStats(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  RequireFile(config.OutPath(kAlignmentFile), "stats");
  std::ifstream is(config.OutPath(kAlignmentFile));
  auto rows = ReadAlignments(is, inv);
  CorpusSplit split = ReadCorpusSplit(config.SplitDir(config.train_split));
  std::map<std::string, const Matrix *> features;
  for (const auto &utt : split.utterances) features[utt.id] = &utt.features;
  StatsTable total(split.dim);
  for (const auto &[id, contexts] : rows) {
    auto it = features.find(id);
    if (it == features.end())
      CHENONE_ERR(kLengthMismatch) << "alignment for unknown utterance " << id;
    total = Merge(total, Accumulate(contexts, *it->second));
  }
  {
    auto os = OpenOutput(config.OutPath(kStatsFile));
    total.Write(os, inv);
  }
  StageSummary summary{"stats", {config.OutPath(kStatsFile)}, {}};
  summary.notes.push_back(std::to_string(total.rows().size()) + " tri-contexts, " +
                          Note("%.0f frames", total.TotalCount()));
  const std::string dir = config.SplitDir(config.train_split);
  RecordManifest(config, "stats", {config.OutPath(kAlignmentFile), dir + "/feats.cfea"},
                 summary.outputs);
  return summary;
}

StageSummary CmdTree(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  StatsTable stats = StatsTable::ReadFile(config.OutPath(kStatsFile), inv);
  std::vector<Question> questions = GenerateQuestions(stats, config.tree.variance_floor);
  TiedStateMap map = GrowTree(stats, questions, config.tree);
  WriteTree(map, inv, config.OutPath(kTreeFile));
  StageSummary summary{"tree", {config.OutPath(kTreeFile)}, {}};
  summary.notes.push_back(std::to_string(map.roots().size()) + " roots, " +
                          std::to_string(map.NumLeaves()) + " leaves, " +
                          std::to_string(questions.size()) + " questions");
  RecordManifest(config, "tree", {config.OutPath(kStatsFile)}, summary.outputs);
  return summary;
}

StageSummary CmdTrain(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  for (const char *f : {kCiTreeFile, kCiModelFile, kTreeFile, kStatsFile})
    RequireFile(config.OutPath(f), "train");
  Lexicon lexicon = LoadStageLexicon(config, inv, "train");
  AcousticModel ci = AcousticModel::ReadFile(
      config.OutPath(kCiModelFile), TiedStateMap::ReadFile(config.OutPath(kCiTreeFile), inv));
  TiedStateMap map = TiedStateMap::ReadFile(config.OutPath(kTreeFile), inv);
  StatsTable stats = StatsTable::ReadFile(config.OutPath(kStatsFile), inv);
  AcousticModel model = Retie(ci, map, stats, config.tree.variance_floor);
  TrainingData data = LoadTrainingData(config, lexicon, model.topology);

  StageSummary summary{"train", {config.OutPath(kModelFile)}, {}};
  EmOptions options;
  options.jobs = config.jobs;
  options.variance_floor = config.tree.variance_floor;
  for (int32_t components : config.mixtures) {
    model = SplitMixtures(model, components);
    for (int32_t it = 0; it < config.iters_per_mixture; ++it) {
      EmResult r = EmIterate(model, data.corpus, data.graphs, options);
      summary.notes.push_back(Note("%.0f components: log-likelihood %.6g", components,
                                   r.log_likelihood));
      model = std::move(r.model);
    }
  }
  WriteModel(model, config.OutPath(kModelFile));
  const std::string split = config.SplitDir(config.train_split);
  RecordManifest(config, "train",
                 {config.OutPath(kCiTreeFile), config.OutPath(kCiModelFile),
                  config.OutPath(kTreeFile), config.OutPath(kStatsFile),
                  config.OutPath(kLexiconFile), split + "/feats.cfea"},
                 summary.outputs);
  return summary;
}

StageSummary CmdDecode(const PipelineConfig &config) {
  UnitInventory inv = LoadInventory(config);
  RequireFile(config.OutPath(kModelFile), "decode");
  Lexicon lexicon = LoadStageLexicon(config, inv, "decode");
  AcousticModel model = AcousticModel::ReadFile(
      config.OutPath(kModelFile), TiedStateMap::ReadFile(config.OutPath(kTreeFile), inv));
  NGramLm lm = LoadArpa(config.LmPath());
  PrefixTree tree = BuildPrefixTree(lexicon, model.tied_map, config.cd);
  CorpusSplit test = ReadCorpusSplit(config.SplitDir(config.test_split));

  const int64_t n = static_cast<int64_t>(test.utterances.size());
  std::vector<std::pair<std::string, std::string>> hyps(n);
  std::vector<char> failed(n, 0);
  ParallelFor(n, config.jobs, [&](int64_t i) {
    const Utterance &utt = test.utterances[i];
    hyps[i].first = utt.id;
    try {
      hyps[i].second = Join(Decode(utt.features, model, tree, lm, config.decode).words, " ");
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoHypothesis) throw;
      failed[i] = 1;
    }
  });
  {
    auto os = OpenOutput(config.OutPath(kHypothesisFile));
    WriteKeyedText(os, hyps);
  }
  StageSummary summary{"decode", {config.OutPath(kHypothesisFile)}, {}};
  for (int64_t i = 0; i < n; ++i)
    if (failed[i]) summary.notes.push_back("no hypothesis for " + hyps[i].first);
  summary.notes.push_back(std::to_string(n) + " utterances decoded");
  const std::string split = config.SplitDir(config.test_split);
  RecordManifest(config, "decode",
                 {config.OutPath(kModelFile), config.OutPath(kTreeFile),
                  config.OutPath(kLexiconFile), config.LmPath(), split + "/feats.cfea",
                  split + "/segments"},
                 summary.outputs);
  return summary;
}

namespace {

ScoreReport Score(const PipelineConfig &config) {
  RequireFile(config.OutPath(kHypothesisFile), "score");
  const std::string test = config.SplitDir(config.test_split);
  const std::string train = config.SplitDir(config.train_split);
  auto refs = ReadKeyedTextFile(test + "/text");
  auto hyps = ReadKeyedTextFile(config.OutPath(kHypothesisFile));
  std::vector<TagSpan> tags;
  if (fs::exists(test + "/tags")) tags = ReadTagsFile(test + "/tags");
  std::map<std::string, int64_t> counts;
  for (const auto &[id, text] : ReadKeyedTextFile(train + "/text"))
    for (const auto &w : SplitWhitespace(text)) ++counts[w];
  std::set<std::string> rare;
  if (!counts.empty()) rare = SelectRareWords(counts, config.rare_threshold, config.rare_mode);
  ScoreReport report = ScoreCorpus(refs, hyps, tags, rare, config.count_spaces);
  auto os = OpenOutput(config.OutPath(kReportFile));
  report.Write(os);
  os.close();
  std::vector<std::string> inputs{config.OutPath(kHypothesisFile), test + "/text",
                                  train + "/text"};
  if (fs::exists(test + "/tags")) inputs.push_back(test + "/tags");
  RecordManifest(config, "score", inputs, {config.OutPath(kReportFile)});
  return report;
}

}  // namespace

StageSummary CmdScore(const PipelineConfig &config) {
  ScoreReport report = Score(config);
  StageSummary summary{"score", {config.OutPath(kReportFile)}, {}};
  summary.notes.push_back(Note("WER %.2f%% over %.0f words", report.wer.Rate(),
                               static_cast<double>(report.wer.reference_length)));
  return summary;
}

std::vector<StageSummary> CmdRun(const PipelineConfig &config) {
  std::vector<StageSummary> out;
  if (!fs::exists(fs::path(config.SplitDir(config.train_split)) / "text"))
    out.push_back(CmdSynth(config));
  out.push_back(CmdLexicon(config));
  out.push_back(CmdAlign(config));
  out.push_back(CmdStats(config));
  out.push_back(CmdTree(config));
  out.push_back(CmdTrain(config));
  out.push_back(CmdDecode(config));
  out.push_back(CmdScore(config));
  return out;
}

std::vector<AblationCell> CmdAblate(const PipelineConfig &config) {
  if (!fs::exists(fs::path(config.SplitDir(config.train_split)) / "text")) CmdSynth(config);
  std::vector<AblationCell> cells;
  std::vector<std::string> reports;
  for (CaseMode case_mode : config.ablate_cases) {
    for (bool cd : {false, true}) {
      for (bool pd : {false, true}) {
        AblationCell cell{cd, pd, case_mode, std::nullopt, {}};
        PipelineConfig c = config;
        c.cd.context_dependent = cd;
        c.cd.position_dependent = pd;
        c.case_mode = case_mode;
        c.corpus = config.CorpusDir();
        c.words = config.WordsPath();
        c.lm = config.LmPath();
        c.out = (fs::path(config.out) / "ablate" /
                 (std::string("cd") + (cd ? "Y" : "N") + "-pd" + (pd ? "Y" : "N") + "-" +
                  CaseModeName(case_mode)))
                    .string();
        try {
          fs::create_directories(c.out);
          CmdLexicon(c);
          CmdAlign(c);
          CmdStats(c);
          CmdTree(c);
          CmdTrain(c);
          CmdDecode(c);
          cell.wer = Score(c).wer.Rate();
          reports.push_back(c.OutPath(kReportFile));
        } catch (const std::exception &e) {
          cell.error = e.what();
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  {
    auto os = OpenOutput(config.OutPath(kAblationFile));
    os << "CD\tPD\tcase\tWER\n";
    for (const auto &cell : cells) {
      os << (cell.context_dependent ? 'Y' : 'N') << '\t'
         << (cell.position_dependent ? 'Y' : 'N') << '\t' << CaseModeName(cell.case_mode)
         << '\t';
      if (cell.wer) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", *cell.wer);
        os << buf << '\n';
      } else {
        std::string msg = cell.error;
        for (char &ch : msg)
          if (ch == '\n' || ch == '\t') ch = ' ';
        os << "failed: " << msg << '\n';
      }
    }
  }
  RecordManifest(config, "ablate", reports, {config.OutPath(kAblationFile)});
  return cells;
}

}  // namespace chenone
