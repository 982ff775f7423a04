// include/chenone/corpus.h

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


#ifndef CHENONE_CORPUS_H_
#define CHENONE_CORPUS_H_

#include <string>
#include <utility>
#include <vector>

#include "chenone/acoustic-model.h"
#include "chenone/eval.h"

namespace chenone {

/// A corpus split on disk is a directory holding
///   text        utt_id<TAB>word word ...
///   segments    utt_id<TAB>first_frame<TAB>end_frame (end exclusive)
///   feats.cfea  all utterances' frames, concatenated in segment order
///   tags        utt_id<TAB>start<TAB>end<TAB>label (may be empty)
struct CorpusSplit {
  Corpus utterances;
  std::vector<TagSpan> tags;
  int32_t dim = 0;  // feature width, kept for empty splits
};

void WriteCorpusSplit(const std::string &dir, const CorpusSplit &split);
/// Throws kMissingArtifact, kMalformedLine and kLengthMismatch.
CorpusSplit ReadCorpusSplit(const std::string &dir);

/// Transcripts as `utt_id<TAB>text` rows.
std::vector<std::pair<std::string, std::string>> Transcripts(const Corpus &corpus);

}  // namespace chenone

#endif  // CHENONE_CORPUS_H_
