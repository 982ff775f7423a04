// src/eval.cc

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

#include "chenone/eval.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

template <typename T>
std::vector<EditOp> AlignSequences(std::span<const T> ref, std::span<const T> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<int32_t> cost((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> int32_t & { return cost[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int32_t>(i);
  for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int32_t>(j);
  for (size_t i = 1; i <= n; ++i)
    for (size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});

  std::vector<EditOp> ops;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        --i, --j;
        ops.push_back({same ? EditType::kMatch : EditType::kSubstitution,
                       static_cast<int32_t>(i), static_cast<int32_t>(j)});
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      --i;
      ops.push_back({EditType::kDeletion, static_cast<int32_t>(i), -1});
    } else {
      --j;
      ops.push_back({EditType::kInsertion, -1, static_cast<int32_t>(j)});
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

template std::vector<EditOp> AlignSequences<std::string>(std::span<const std::string>,
                                                         std::span<const std::string>);
template std::vector<EditOp> AlignSequences<char32_t>(std::span<const char32_t>,
                                                      std::span<const char32_t>);
template std::vector<EditOp> AlignSequences<int>(std::span<const int>,
                                                 std::span<const int>);

std::vector<EditOp> AlignWords(std::span<const std::string> ref,
                               std::span<const std::string> hyp) {
  return AlignSequences(ref, hyp);
}

int32_t EditCost(std::span<const EditOp> ops) {
  int32_t cost = 0;
  for (const auto &op : ops) cost += op.type != EditType::kMatch;
  return cost;
}

void ErrorCounts::Add(std::span<const EditOp> ops) {
  for (const auto &op : ops) {
    switch (op.type) {
      case EditType::kMatch: ++reference_length; break;
      case EditType::kSubstitution: ++substitutions, ++reference_length; break;
      case EditType::kDeletion: ++deletions, ++reference_length; break;
      case EditType::kInsertion: ++insertions; break;
    }
  }
}

void ErrorCounts::Add(const ErrorCounts &other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  reference_length += other.reference_length;
}

double ErrorCounts::Rate() const {
  return 100.0 * static_cast<double>(Errors()) / static_cast<double>(reference_length);
}

WerReport ComputeWer(const std::vector<std::vector<EditOp>> &alignments) {
  WerReport report;
  for (const auto &ops : alignments) report.Add(ops);
  if (report.reference_length == 0)
    CHENONE_ERR(kEmptyReference) << "no reference words to score";
  return report;
}

const char *TagLabelName(TagLabel label) {
  return label == TagLabel::kProperNoun ? "ProperNoun" : "RareWord";
}

std::optional<TagLabel> ParseTagLabel(std::string_view name) {
  if (name == "ProperNoun") return TagLabel::kProperNoun;
  if (name == "RareWord") return TagLabel::kRareWord;
  return std::nullopt;
}

std::vector<SegmentPair> ExtractTaggedSegments(std::span<const std::string> ref,
                                               std::span<const std::string> hyp,
                                               std::span<const EditOp> alignment,
                                               std::span<const TagSpan> tags) {
  // owner[j]: reference position hypothesis word j attaches to.
  std::vector<int32_t> owner(hyp.size(), -1);
  int32_t last_ref = -1;
  for (const auto &op : alignment) {
    if (op.ref >= static_cast<int32_t>(ref.size()) || op.hyp >= static_cast<int32_t>(hyp.size()))
      CHENONE_ERR(kInvalidArgument) << "alignment does not fit the word sequences";
    if (op.ref >= 0) last_ref = op.ref;
    if (op.hyp >= 0) owner[op.hyp] = op.type == EditType::kInsertion ? last_ref : op.ref;
  }
  std::vector<SegmentPair> pairs;
  for (const auto &tag : tags) {
    if (tag.start < 0 || tag.start > tag.end || tag.end >= static_cast<int32_t>(ref.size()))
      CHENONE_ERR(kInvalidSpan) << tag.utt_id << ": span [" << tag.start << ", "
                                << tag.end << "] over " << ref.size() << " words";
    SegmentPair pair;
    pair.ref = Join(std::vector<std::string>(ref.begin() + tag.start,
                                             ref.begin() + tag.end + 1), " ");
    std::vector<std::string> words;
    for (size_t j = 0; j < hyp.size(); ++j)
      if (owner[j] >= tag.start && owner[j] <= tag.end) words.push_back(hyp[j]);
    pair.hyp = Join(words, " ");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

ErrorCounts CerCounts(std::span<const SegmentPair> segments, bool count_spaces) {
  ErrorCounts counts;
  auto chars = [&](const std::string &text) {
    std::u32string cps = DecodeUtf8(text);
    if (!count_spaces) std::erase(cps, U' ');
    return cps;
  };
  for (const auto &seg : segments) {
    std::u32string r = chars(seg.ref), h = chars(seg.hyp);
    counts.Add(AlignSequences<char32_t>(r, h));
  }
  if (counts.reference_length == 0)
    CHENONE_ERR(kEmptySegments) << "no reference characters in " << segments.size()
                                << " segments";
  return counts;
}

double ComputeCer(std::span<const SegmentPair> segments, bool count_spaces) {
  return CerCounts(segments, count_spaces).Rate();
}

std::set<std::string> SelectRareWords(const std::map<std::string, int64_t> &counts,
                                      double threshold, RareWordMode mode) {
  if (counts.empty()) CHENONE_ERR(kInvalidArgument) << "no training counts";
  std::vector<std::pair<int64_t, std::string>> order;
  double total = 0.0;
  for (const auto &[word, count] : counts) {
    order.emplace_back(count, word);
    total += mode == RareWordMode::kType ? 1.0 : static_cast<double>(count);
  }
  std::sort(order.begin(), order.end());
  std::set<std::string> rare;
  double cumulative = 0.0;
  for (const auto &[count, word] : order) {
    cumulative += mode == RareWordMode::kType ? 1.0 : static_cast<double>(count);
    if (cumulative > threshold * total * (1.0 + 1e-12)) break;
    rare.insert(word);
  }
  return rare;
}

std::vector<std::pair<std::string, std::string>> ReadKeyedText(std::istream &is) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto tab = line.find('\t');
    std::string key(Trim(line.substr(0, tab)));
    if (key.empty())
      CHENONE_ERR(kMalformedLine) << "line " << line_no << ": missing utterance id";
    std::string text = tab == std::string::npos ? "" : std::string(Trim(line.substr(tab + 1)));
    rows.emplace_back(std::move(key), std::move(text));
  }
  return rows;
}

std::vector<std::pair<std::string, std::string>> ReadKeyedTextFile(
    const std::string &path) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open " << path;
  return ReadKeyedText(is);
}

void WriteKeyedText(std::ostream &os,
                    const std::vector<std::pair<std::string, std::string>> &rows) {
  for (const auto &[key, text] : rows) os << key << '\t' << text << '\n';
}

std::vector<TagSpan> ReadTags(std::istream &is) {
  std::vector<TagSpan> tags;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = Split(line, '\t');
    long long start = 0, end = 0;
    std::optional<TagLabel> label;
    if (fields.size() != 4 || fields[0].empty() || !ParseInt(fields[1], &start) ||
        !ParseInt(fields[2], &end) || !(label = ParseTagLabel(Trim(fields[3]))))
      CHENONE_ERR(kMalformedLine) << "tag line " << line_no << ": '" << line << "'";
    tags.push_back({fields[0], static_cast<int32_t>(start), static_cast<int32_t>(end), *label});
  }
  return tags;
}

std::vector<TagSpan> ReadTagsFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open " << path;
  return ReadTags(is);
}

void WriteTags(std::ostream &os, std::span<const TagSpan> tags) {
  for (const auto &t : tags)
    os << t.utt_id << '\t' << t.start << '\t' << t.end << '\t' << TagLabelName(t.label) << '\n';
}

namespace {

std::string Percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

}  // namespace

void ScoreReport::Write(std::ostream &os) const {
  os << "wer=" << Percent(wer.Rate()) << '\n'
     << "wer_exact=" << FormatDouble(wer.Rate()) << '\n'
     << "sub=" << wer.substitutions << '\n'
     << "del=" << wer.deletions << '\n'
     << "ins=" << wer.insertions << '\n'
     << "ref_words=" << wer.reference_length << '\n'
     << "utterances=" << num_utterances << '\n';
  auto cer = [&](const char *key, const std::optional<ErrorCounts> &c) {
    os << key << '=' << (c ? Percent(c->Rate()) : std::string("none")) << '\n';
  };
  cer("propernoun_cer", propernoun_cer);
  cer("rareword_cer", rareword_cer);
}

ScoreReport ScoreCorpus(const std::vector<std::pair<std::string, std::string>> &refs,
                        const std::vector<std::pair<std::string, std::string>> &hyps,
                        std::span<const TagSpan> tags,
                        const std::set<std::string> &rare_words,
                        bool count_spaces) {
  std::unordered_map<std::string, const std::string *> hyp_of;
  for (const auto &[id, text] : hyps) hyp_of[id] = &text;
  std::unordered_map<std::string, std::vector<TagSpan>> tags_of;
  for (const auto &t : tags) tags_of[t.utt_id].push_back(t);

  ScoreReport report;
  std::vector<std::vector<EditOp>> alignments;
  std::vector<SegmentPair> proper, rare;
  for (const auto &[id, ref_text] : refs) {
    auto ref = SplitWhitespace(ref_text);
    auto it = hyp_of.find(id);
    auto hyp = it == hyp_of.end() ? std::vector<std::string>{} : SplitWhitespace(*it->second);
    alignments.push_back(AlignWords(ref, hyp));
    std::vector<TagSpan> spans = tags_of.count(id) ? tags_of[id] : std::vector<TagSpan>{};
    for (int32_t i = 0; i < static_cast<int32_t>(ref.size()); ++i)
      if (rare_words.count(ref[i])) spans.push_back({id, i, i, TagLabel::kRareWord});
    auto pairs = ExtractTaggedSegments(ref, hyp, alignments.back(), spans);
    for (size_t k = 0; k < spans.size(); ++k)
      (spans[k].label == TagLabel::kProperNoun ? proper : rare).push_back(pairs[k]);
  }
  report.num_utterances = static_cast<int64_t>(refs.size());
  report.wer = ComputeWer(alignments);
  if (!proper.empty()) report.propernoun_cer = CerCounts(proper, count_spaces);
  if (!rare.empty()) report.rareword_cer = CerCounts(rare, count_spaces);
  return report;
}

}  // namespace chenone
