// src/synth.cc

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

#include "chenone/synth.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

namespace fs = std::filesystem;

namespace {

std::mt19937_64 MakeRng(uint64_t seed, uint32_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

std::string RandomWord(std::mt19937_64 &rng, const std::string &alphabet, int32_t min_len,
                       int32_t max_len) {
  std::uniform_int_distribution<int32_t> len(min_len, max_len);
  std::uniform_int_distribution<size_t> pick(0, alphabet.size() - 1);
  std::string w(len(rng), ' ');
  for (char &c : w) c = alphabet[pick(rng)];
  return w;
}

std::vector<double> ZipfWeights(size_t n) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  return w;
}

int32_t BaseOrThrow(const UnitInventory &inv, const std::string &symbol) {
  auto b = inv.FindBase(symbol);
  if (!b) CHENONE_ERR(kUnknownSymbol) << "'" << symbol << "' is not in the inventory";
  return *b;
}

// Maps a unit in its word context to a sound.
class Realizer {
 public:
  Realizer(const SyntheticSpec &spec, const UnitInventory &inv,
           const std::map<UnitId, int32_t> &unit_sound)
      : unit_sound_(unit_sound) {
    for (const auto &[a, b] : spec.wb_swaps) {
      int32_t x = BaseOrThrow(inv, a), y = BaseOrThrow(inv, b);
      wb_partner_[x] = y;
      wb_partner_[y] = x;
    }
    for (const auto &swap : spec.context_swaps) {
      int32_t x = BaseOrThrow(inv, swap.first), y = BaseOrThrow(inv, swap.second);
      std::set<int32_t> left;
      for (const auto &l : swap.left) left.insert(BaseOrThrow(inv, l));
      context_[x] = {y, left};
      context_[y] = {x, left};
    }
  }

  int32_t Sound(UnitId unit, UnitId left) const {
    int32_t base = UnitInventory::BaseOf(unit);
    if (UnitInventory::PositionOf(unit) == Position::kWordBoundary) {
      auto it = wb_partner_.find(base);
      if (it != wb_partner_.end())
        return SoundOf(UnitInventory::MakeUnit(it->second, Position::kInternal));
      return SoundOf(unit);
    }
    auto it = context_.find(base);
    if (it != context_.end() && left != kNoContext &&
        it->second.second.count(UnitInventory::BaseOf(left)))
      return SoundOf(UnitInventory::MakeUnit(it->second.first, Position::kInternal));
    return SoundOf(unit);
  }

 private:
  int32_t SoundOf(UnitId unit) const {
    auto it = unit_sound_.find(unit);
    if (it == unit_sound_.end())
      CHENONE_ERR(kInvalidArgument) << "no sound for unit " << unit;
    return it->second;
  }

  const std::map<UnitId, int32_t> &unit_sound_;
  std::map<int32_t, int32_t> wb_partner_;
  std::map<int32_t, std::pair<int32_t, std::set<int32_t>>> context_;
};

std::vector<std::vector<double>> SampleMeans(std::mt19937_64 &rng, size_t count,
                                             int32_t dim, double separation) {
  double half_width = separation;
  std::vector<std::vector<double>> means;
  int64_t failures = 0;
  while (means.size() < count) {
    std::uniform_real_distribution<double> coord(-half_width, half_width);
    std::vector<double> m(dim);
    for (double &v : m) v = coord(rng);
    bool ok = true;
    for (const auto &other : means) {
      double d2 = 0.0;
      for (int32_t i = 0; i < dim; ++i) d2 += (m[i] - other[i]) * (m[i] - other[i]);
      if (d2 < separation * separation) {
        ok = false;
        break;
      }
    }
    if (ok) {
      means.push_back(std::move(m));
    } else if (++failures % 1000 == 0) {
      half_width *= 1.25;
    }
  }
  return means;
}

SyntheticSplit GenerateSplit(const SyntheticSpec &spec, const SyntheticCorpus &corpus,
                             const Realizer &realizer, int32_t count,
                             const std::string &prefix, std::mt19937_64 &rng) {
  SyntheticSplit split;
  split.corpus.dim = spec.dim;
  std::vector<double> weights = spec.word_weights;
  if (weights.empty()) weights.assign(spec.words.size(), 1.0);
  std::discrete_distribution<size_t> pick_word(weights.begin(), weights.end());
  std::uniform_int_distribution<int32_t> num_words(spec.min_words, spec.max_words);
  std::bernoulli_distribution take_silence(spec.silence_prob);
  std::geometric_distribution<int32_t> extra_frames(1.0 - spec.self_loop_prob);
  std::normal_distribution<double> noise(0.0, 1.0);

  const int32_t width = std::max<int32_t>(4, std::to_string(count).size());
  for (int32_t u = 0; u < count; ++u) {
    std::string id = std::to_string(u);
    id = prefix + std::string(width - id.size(), '0') + id;
    std::vector<std::string> words;
    int32_t n = num_words(rng);
    for (int32_t i = 0; i < n; ++i) words.push_back(spec.words[pick_word(rng)]);

    // (unit, sound) per state.
    std::vector<std::pair<UnitId, int32_t>> states{{UnitInventory::kSilence, 0}};
    for (int32_t i = 0; i < n; ++i) {
      if (i > 0 && take_silence(rng)) states.push_back({UnitInventory::kSilence, 0});
      const Pronunciation &pron = corpus.lexicon.Find(words[i])->front();
      for (size_t k = 0; k < pron.size(); ++k)
        states.push_back({pron[k], realizer.Sound(pron[k], k > 0 ? pron[k - 1] : kNoContext)});
    }
    states.push_back({UnitInventory::kSilence, 0});

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (const auto &[unit, sound] : states) {
      int32_t frames = 1 + extra_frames(rng);
      for (int32_t f = 0; f < frames; ++f) {
        std::vector<double> x = corpus.sound_means[sound];
        for (double &v : x) v += noise(rng);
        rows.push_back(std::move(x));
        labels.push_back(corpus.inventory.UnitName(unit) + ":" + std::to_string(sound));
      }
    }
    for (int32_t i = 0; i < n; ++i)
      if (std::isupper(static_cast<unsigned char>(words[i][0])))
        split.corpus.tags.push_back({id, i, i, TagLabel::kProperNoun});
    split.corpus.utterances.push_back({id, words, Matrix::FromRows(rows)});
    split.truth.emplace_back(id, Join(labels, " "));
  }
  return split;
}

}  // namespace

SyntheticSpec DefaultSpec(uint64_t seed, int32_t num_words) {
  SyntheticSpec spec;
  spec.seed = seed;
  auto rng = MakeRng(seed, 0);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::set<std::string> seen;
  std::bernoulli_distribution capitalize(0.25);
  while (static_cast<int32_t>(spec.words.size()) < num_words) {
    std::string w = RandomWord(rng, alphabet, 3, 6);
    if (capitalize(rng)) w[0] = static_cast<char>(std::toupper(w[0]));
    std::string lower = w;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    if (!seen.insert(lower).second) continue;
    spec.words.push_back(w);
  }
  spec.word_weights = ZipfWeights(spec.words.size());
  spec.context_swaps.push_back({"a", "e", {"d", "t"}});
  return spec;
}

SyntheticSpec AblationSpec(uint64_t seed, int32_t pairs_per_kind) {
  if (pairs_per_kind < 1) CHENONE_ERR(kInvalidArgument) << "pairs_per_kind must be >= 1";
  SyntheticSpec spec;
  spec.seed = seed;
  spec.case_mode = CaseMode::kLowercase;
  spec.num_train = 400;
  spec.num_test = 100;
  spec.max_words = 3;
  spec.wb_swaps = {{"a", "o"}, {"e", "i"}, {"d", "n"}, {"t", "s"}, {"l", "r"}};
  spec.context_swaps.push_back({"a", "e", {"d", "t"}});
  auto rng = MakeRng(seed, 0);
  const std::string alphabet = "adeilnorst";
  std::map<char, char> partner;
  for (const auto &[a, b] : spec.wb_swaps) {
    partner[a[0]] = b[0];
    partner[b[0]] = a[0];
  }
  std::set<std::string> seen;
  auto add_pair = [&](const std::string &x, const std::string &y) {
    if (x == y || seen.count(x) || seen.count(y)) return false;
    seen.insert(x);
    seen.insert(y);
    spec.words.push_back(x);
    spec.words.push_back(y);
    return true;
  };
  // Context pairs: <head><left>{a,e}<tail>, half of them after t or d.
  const std::string other_left = "ilnors";
  for (int32_t made = 0; made < pairs_per_kind;) {
    std::string head = RandomWord(rng, alphabet, 1, 2);
    std::string tail = RandomWord(rng, alphabet, 1, 2);
    std::string left = made % 2 == 0 ? RandomWord(rng, "dt", 1, 1)
                                     : RandomWord(rng, other_left, 1, 1);
    made += add_pair(head + left + "a" + tail, head + left + "e" + tail);
  }
  // Position pairs: a first, last or word-internal letter replaced by its
  // swap partner.
  for (int32_t made = 0; made < pairs_per_kind;) {
    std::string w = RandomWord(rng, alphabet, 3, 5);
    std::string v = w;
    size_t at = made % 3 == 0 ? 0 : made % 3 == 1 ? v.size() - 1 : 1 + made % (v.size() - 2);
    v[at] = partner.at(v[at]);
    made += add_pair(w, v);
  }
  // Fillers so that every letter occurs first, last and inside some word.
  std::set<std::pair<char, int>> seen_at;
  for (const auto &w : spec.words)
    for (size_t i = 0; i < w.size(); ++i)
      seen_at.insert({w[i], i == 0 ? 0 : i + 1 == w.size() ? 2 : 1});
  for (char c : alphabet) {
    for (int pos = 0; pos < 3; ++pos) {
      if (seen_at.count({c, pos})) continue;
      std::string w;
      do {
        std::string a = RandomWord(rng, alphabet, 1, 2), b = RandomWord(rng, alphabet, 1, 2);
        w = pos == 0 ? c + a + b : pos == 2 ? a + b + c : a + c + b;
      } while (seen.count(w));
      seen.insert(w);
      spec.words.push_back(w);
      for (size_t i = 0; i < w.size(); ++i)
        seen_at.insert({w[i], i == 0 ? 0 : i + 1 == w.size() ? 2 : 1});
    }
  }
  return spec;
}

NGramLm EstimateUnigramLm(const Corpus &corpus) {
  std::map<std::string, int64_t> counts;
  int64_t total = 0;
  for (const auto &utt : corpus) {
    for (const auto &w : utt.words) ++counts[w];
    total += static_cast<int64_t>(utt.words.size()) + 1;
  }
  NGramLm lm(1);
  std::vector<std::string> key(1);
  key[0] = kSentenceStart;
  lm.Set(key, -99.0);
  if (total > 0) {
    key[0] = kSentenceEnd;
    lm.Set(key, std::log10(static_cast<double>(corpus.size()) / total));
  }
  for (const auto &[w, c] : counts) {
    key[0] = w;
    lm.Set(key, std::log10(static_cast<double>(c) / total));
  }
  return lm;
}

SyntheticCorpus GenerateCorpus(const SyntheticSpec &spec) {
  if (spec.words.empty()) CHENONE_ERR(kEmptyLexicon) << "synthetic spec has no words";
  if (!spec.word_weights.empty() && spec.word_weights.size() != spec.words.size())
    CHENONE_ERR(kLengthMismatch) << spec.word_weights.size() << " weights for "
                                 << spec.words.size() << " words";
  if (spec.min_words < 1 || spec.max_words < spec.min_words || spec.dim < 1 ||
      spec.num_train < 0 || spec.num_test < 0)
    CHENONE_ERR(kInvalidArgument) << "bad synthetic corpus sizes";
  if (!(spec.self_loop_prob > 0.0 && spec.self_loop_prob < 1.0) ||
      !(spec.silence_prob >= 0.0 && spec.silence_prob <= 1.0))
    CHENONE_ERR(kInvalidArgument) << "probabilities out of range";

  SyntheticCorpus corpus{spec, UnitInventory::Graphemic(spec.case_mode), Lexicon(), {}, {}, {},
                         {}, NGramLm(1)};
  std::vector<std::string> skipped;
  corpus.lexicon = BuildLexicon(spec.words, corpus.inventory, &skipped);
  if (!skipped.empty())
    CHENONE_ERR(kEmptyAfterNormalization) << "word '" << skipped.front()
                                          << "' has no graphemes";
  std::set<UnitId> units;
  for (int32_t w = 0; w < corpus.lexicon.NumWords(); ++w)
    for (UnitId u : corpus.lexicon.Pronunciations(w).front()) units.insert(u);
  for (const auto &[a, b] : spec.wb_swaps)
    for (const auto &s : {a, b})
      units.insert(UnitInventory::MakeUnit(BaseOrThrow(corpus.inventory, s),
                                           Position::kInternal));
  for (const auto &swap : spec.context_swaps)
    for (const auto &s : {swap.first, swap.second})
      units.insert(UnitInventory::MakeUnit(BaseOrThrow(corpus.inventory, s),
                                           Position::kInternal));
  int32_t next_sound = 1;
  for (UnitId u : units) corpus.unit_sound[u] = next_sound++;

  auto rng = MakeRng(spec.seed, 1);
  corpus.sound_means = SampleMeans(rng, next_sound, spec.dim, spec.separation);
  Realizer realizer(spec, corpus.inventory, corpus.unit_sound);
  auto train_rng = MakeRng(spec.seed, 2);
  corpus.train = GenerateSplit(spec, corpus, realizer, spec.num_train, "tr", train_rng);
  auto test_rng = MakeRng(spec.seed, 3);
  corpus.test = GenerateSplit(spec, corpus, realizer, spec.num_test, "te", test_rng);
  corpus.lm = EstimateUnigramLm(corpus.train.corpus.utterances);
  return corpus;
}

void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::string &dir) {
  fs::create_directories(dir);
  const fs::path root(dir);
  auto open = [&](const char *name) {
    std::ofstream os(root / name, std::ios::binary);
    if (!os) CHENONE_ERR(kIo) << "cannot write " << (root / name).string();
    return os;
  };
  {
    auto os = open("words.txt");
    for (const auto &w : corpus.spec.words) os << w << '\n';
  }
  {
    auto os = open("lexicon.txt");
    corpus.lexicon.Write(os, corpus.inventory);
  }
  {
    auto os = open("lm.arpa");
    corpus.lm.Write(os);
  }
  {
    auto os = open("sounds.txt");
    std::vector<std::string> owner(corpus.sound_means.size(), "SIL");
    for (const auto &[unit, sound] : corpus.unit_sound)
      owner[sound] = corpus.inventory.UnitName(unit);
    for (size_t s = 0; s < corpus.sound_means.size(); ++s) {
      os << s << '\t' << owner[s];
      for (double v : corpus.sound_means[s]) os << ' ' << FormatDouble(v);
      os << '\n';
    }
  }
  for (const auto &[name, split] : {std::pair<const char *, const SyntheticSplit *>{
                                        "train", &corpus.train},
                                    {"test", &corpus.test}}) {
    WriteCorpusSplit((root / name).string(), split->corpus);
    std::ofstream os(root / name / "ali.truth", std::ios::binary);
    if (!os) CHENONE_ERR(kIo) << "cannot write alignments under " << dir;
    WriteKeyedText(os, split->truth);
  }
}

}  // namespace chenone
