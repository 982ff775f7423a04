// include/chenone/decoder.h

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


#ifndef CHENONE_DECODER_H_
#define CHENONE_DECODER_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "chenone/acoustic-model.h"
#include "chenone/arpa-lm.h"
#include "chenone/features.h"
#include "chenone/prefix-tree.h"

namespace chenone {

struct DecodeConfig {
  double beam = 200.0;
  int32_t max_active = 10000;
  double lm_weight = 1.0;
  double word_insertion_penalty = 0.0;
  double optional_silence_prob = 0.5;

  void Validate() const;
};

struct DecodeResult {
  std::vector<std::string> words;
  double total = 0.0;
  /// Emission and transition log-probabilities (natural log).
  double acoustic = 0.0;
  /// Unweighted log10 LM probability including the sentence end.
  double lm_log10 = 0.0;
};

/// Natural-log LM contribution of `lm_log10`, as used in `total`.
double WeightedLmScore(double lm_log10, const DecodeConfig &config);

/// One-pass token-passing search. The utterance is silence, one or more
/// words with optional silence between them, then silence. The total is
/// acoustic + lm_weight * ln(10) * lm_log10 + word_insertion_penalty * words.
/// Equal totals are resolved towards the lexicographically smaller word
/// sequence. Words missing from the LM are never hypothesized. Throws
/// kNoHypothesis when pruning leaves no complete path.
DecodeResult Decode(const Matrix &features, const AcousticModel &model,
                    const PrefixTree &tree, const NGramLm &lm,
                    const DecodeConfig &config = {});

}  // namespace chenone

#endif  // CHENONE_DECODER_H_
