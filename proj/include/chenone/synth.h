// include/chenone/synth.h

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


#ifndef CHENONE_SYNTH_H_
#define CHENONE_SYNTH_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chenone/arpa-lm.h"
#include "chenone/corpus.h"
#include "chenone/units.h"

namespace chenone {

/// Internal occurrences of `first`/`second` after a left grapheme in `left`
/// are realized as each other's sound.
struct ContextSwap {
  std::string first;
  std::string second;
  std::vector<std::string> left;
};

struct SyntheticSpec {
  std::vector<std::string> words;
  std::vector<double> word_weights;  // empty: uniform
  int32_t num_train = 500;
  int32_t num_test = 100;
  int32_t min_words = 1;
  int32_t max_words = 4;
  int32_t dim = 8;
  double separation = 10.0;  // minimum distance between sound means, in sigma
  double self_loop_prob = 0.5;
  double silence_prob = 0.5;
  CaseMode case_mode = CaseMode::kPreserve;
  /// Grapheme pairs whose word-boundary occurrences take each other's
  /// word-internal sound.
  std::vector<std::pair<std::string, std::string>> wb_swaps;
  std::vector<ContextSwap> context_swaps;
  uint64_t seed = 0;
};

/// `num_words` random pseudo-words with Zipf weights; about a quarter are
/// capitalized. One a/e context swap after t and d.
SyntheticSpec DefaultSpec(uint64_t seed, int32_t num_words = 20);

/// Minimal pairs that only context (a/e after t, d) or position (word-edge
/// swaps over a 10-letter alphabet) can tell apart.
SyntheticSpec AblationSpec(uint64_t seed, int32_t pairs_per_kind = 6);

struct SyntheticSplit {
  CorpusSplit corpus;
  /// Per utterance, the realized `unit:sound` label of every frame.
  std::vector<std::pair<std::string, std::string>> truth;
};

struct SyntheticCorpus {
  SyntheticSpec spec;
  UnitInventory inventory;
  Lexicon lexicon;
  /// Sound 0 is silence; unit_sound maps each modeled unit to its canonical sound.
  std::vector<std::vector<double>> sound_means;
  std::map<UnitId, int32_t> unit_sound;
  SyntheticSplit train;
  SyntheticSplit test;
  NGramLm lm;
};

SyntheticCorpus GenerateCorpus(const SyntheticSpec &spec);

/// Unigram maximum-likelihood LM over the transcripts (with </s>).
NGramLm EstimateUnigramLm(const Corpus &corpus);

/// Writes words.txt, lexicon.txt, lm.arpa, sounds.txt and the train/ and
/// test/ splits (each with ali.truth) under `dir`.
void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::string &dir);

}  // namespace chenone

#endif  // CHENONE_SYNTH_H_
