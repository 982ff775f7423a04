// src/corpus.cc

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

#include "chenone/corpus.h"

#include <filesystem>
#include <fstream>
#include <map>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

namespace fs = std::filesystem;

namespace {

std::ofstream OpenOut(const fs::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) CHENONE_ERR(kIo) << "cannot write " << path.string();
  return os;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> Transcripts(const Corpus &corpus) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto &utt : corpus) rows.emplace_back(utt.id, Join(utt.words, " "));
  return rows;
}

void WriteCorpusSplit(const std::string &dir, const CorpusSplit &split) {
  fs::create_directories(dir);
  const fs::path root(dir);
  auto text = OpenOut(root / "text");
  WriteKeyedText(text, Transcripts(split.utterances));
  auto segments = OpenOut(root / "segments");
  Matrix all;
  const int32_t dim = split.dim;
  for (const auto &utt : split.utterances) {
    if (utt.features.NumCols() != dim)
      CHENONE_ERR(kDimMismatch) << "utterance " << utt.id << " has dim "
                                << utt.features.NumCols() << ", expected " << dim;
    segments << utt.id << '\t' << all.NumRows() << '\t'
             << all.NumRows() + utt.features.NumRows() << '\n';
    all.Append(utt.features);
  }
  if (all.NumCols() != dim) all = Matrix(0, dim);
  auto tags = OpenOut(root / "tags");
  WriteTags(tags, split.tags);
  WriteFeaturesFile((root / "feats.cfea").string(), all);
}

CorpusSplit ReadCorpusSplit(const std::string &dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) CHENONE_ERR(kMissingArtifact) << "no corpus split at " << dir;
  auto text = ReadKeyedTextFile((root / "text").string());
  auto segments = ReadKeyedTextFile((root / "segments").string());
  Matrix feats = ReadFeaturesFile((root / "feats.cfea").string());
  CorpusSplit split;
  split.dim = feats.NumCols();
  if (fs::exists(root / "tags")) split.tags = ReadTagsFile((root / "tags").string());

  std::map<std::string, std::vector<std::string>> words;
  for (const auto &[id, t] : text) {
    if (!words.emplace(id, SplitWhitespace(t)).second)
      CHENONE_ERR(kMalformedLine) << dir << "/text: duplicate utterance " << id;
  }
  for (const auto &[id, range] : segments) {
    auto fields = SplitWhitespace(range);
    long long begin = 0, end = 0;
    if (fields.size() != 2 || !ParseInt(fields[0], &begin) || !ParseInt(fields[1], &end) ||
        begin < 0 || end < begin || end > feats.NumRows())
      CHENONE_ERR(kMalformedLine) << dir << "/segments: bad range for " << id << ": '"
                                  << range << "'";
    auto it = words.find(id);
    if (it == words.end())
      CHENONE_ERR(kLengthMismatch) << dir << ": utterance " << id << " has no transcript";
    split.utterances.push_back({id, it->second,
                                feats.RowRange(static_cast<int32_t>(begin),
                                               static_cast<int32_t>(end))});
  }
  if (split.utterances.size() != text.size())
    CHENONE_ERR(kLengthMismatch) << dir << ": " << text.size() << " transcripts, "
                                 << split.utterances.size() << " segments";
  return split;
}

}  // namespace chenone
