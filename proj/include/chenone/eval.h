// include/chenone/eval.h

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


#ifndef CHENONE_EVAL_H_
#define CHENONE_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace chenone {

enum class EditType { kMatch, kSubstitution, kDeletion, kInsertion };

struct EditOp {
  EditType type;
  int32_t ref;  // -1 for insertions
  int32_t hyp;  // -1 for deletions

  bool operator==(const EditOp &) const = default;
};

/// Minimum-cost alignment with unit substitution, deletion and insertion
/// costs. The backtrace prefers match/substitution, then deletion, then
/// insertion.
template <typename T>
std::vector<EditOp> AlignSequences(std::span<const T> ref, std::span<const T> hyp);

std::vector<EditOp> AlignWords(std::span<const std::string> ref,
                               std::span<const std::string> hyp);
int32_t EditCost(std::span<const EditOp> ops);

struct ErrorCounts {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t reference_length = 0;

  void Add(std::span<const EditOp> ops);
  void Add(const ErrorCounts &other);
  int64_t Errors() const { return substitutions + deletions + insertions; }
  /// 100 * errors / reference length.
  double Rate() const;
};

using WerReport = ErrorCounts;

/// Throws kEmptyReference when no reference word is aligned.
WerReport ComputeWer(const std::vector<std::vector<EditOp>> &alignments);

enum class TagLabel { kProperNoun, kRareWord };
const char *TagLabelName(TagLabel label);
std::optional<TagLabel> ParseTagLabel(std::string_view name);

struct TagSpan {
  std::string utt_id;
  int32_t start;  // inclusive word index into the reference
  int32_t end;    // inclusive
  TagLabel label;

  bool operator==(const TagSpan &) const = default;
};

struct SegmentPair {
  std::string ref;
  std::string hyp;

  bool operator==(const SegmentPair &) const = default;
};

/// Hypothesis words aligned to each tagged reference span. Matches and
/// substitutions attach to their reference word, insertions to the
/// preceding reference word. Throws kInvalidSpan.
std::vector<SegmentPair> ExtractTaggedSegments(std::span<const std::string> ref,
                                               std::span<const std::string> hyp,
                                               std::span<const EditOp> alignment,
                                               std::span<const TagSpan> tags);

/// Character (code point) errors over segment pairs. Throws kEmptySegments.
ErrorCounts CerCounts(std::span<const SegmentPair> segments, bool count_spaces = true);
double ComputeCer(std::span<const SegmentPair> segments, bool count_spaces = true);

enum class RareWordMode { kType, kToken };

/// Words sorted by ascending training count (ties lexicographic); returns the
/// longest prefix whose cumulative fraction of types (or tokens) stays
/// within `threshold`.
std::set<std::string> SelectRareWords(const std::map<std::string, int64_t> &counts,
                                      double threshold = 0.8,
                                      RareWordMode mode = RareWordMode::kType);

/// `utt_id<TAB>text` lines, in file order. Text may be empty.
std::vector<std::pair<std::string, std::string>> ReadKeyedText(std::istream &is);
std::vector<std::pair<std::string, std::string>> ReadKeyedTextFile(
    const std::string &path);
void WriteKeyedText(std::ostream &os,
                    const std::vector<std::pair<std::string, std::string>> &rows);

/// `utt_id<TAB>start<TAB>end<TAB>label` lines.
std::vector<TagSpan> ReadTags(std::istream &is);
std::vector<TagSpan> ReadTagsFile(const std::string &path);
void WriteTags(std::ostream &os, std::span<const TagSpan> tags);

struct ScoreReport {
  WerReport wer;
  std::optional<ErrorCounts> propernoun_cer;
  std::optional<ErrorCounts> rareword_cer;
  int64_t num_utterances = 0;

  /// key=value lines.
  void Write(std::ostream &os) const;
};

/// Scores hypotheses against references by utterance id. A missing
/// hypothesis counts as empty. Rare-word spans are added for every
/// reference word in `rare_words`.
ScoreReport ScoreCorpus(const std::vector<std::pair<std::string, std::string>> &refs,
                        const std::vector<std::pair<std::string, std::string>> &hyps,
                        std::span<const TagSpan> tags,
                        const std::set<std::string> &rare_words,
                        bool count_spaces = true);

}  // namespace chenone

#endif  // CHENONE_EVAL_H_
