// src/prefix-tree.cc

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

#include "chenone/prefix-tree.h"

#include <algorithm>
#include <map>

#include "chenone/error.h"

namespace chenone {

int32_t PrefixTree::NumTerminals() const {
  int32_t n = 0;
  for (const auto &node : nodes_)
    if (!node.words.empty()) ++n;
  return n;
}

std::vector<int32_t> PronunciationPdfs(const Pronunciation &pron,
                                       const TiedStateMap &tied_map,
                                       const CdConfig &config) {
  std::vector<int32_t> pdfs;
  for (const TriContext &ctx : ExpandContexts(pron, config))
    pdfs.push_back(tied_map.Tie(ctx));
  return pdfs;
}

PrefixTree BuildPrefixTree(const Lexicon &lexicon, const TiedStateMap &tied_map,
                           const CdConfig &config) {
  if (lexicon.empty()) CHENONE_ERR(kEmptyLexicon) << "prefix tree over an empty lexicon";
  if (config.cross_word_context)
    CHENONE_ERR(kUnsupported) << "cross-word contexts are not supported by the decoder";
  struct Building {
    std::map<int32_t, int32_t> children;
    std::vector<int32_t> words;
  };
  std::vector<Building> building(1);
  std::vector<int32_t> pdf_of{-1};
  PrefixTree tree;
  for (int32_t w = 0; w < lexicon.NumWords(); ++w) {
    tree.words_.push_back(lexicon.Word(w));
    for (const auto &pron : lexicon.Pronunciations(w)) {
      int32_t node = 0;
      for (int32_t pdf : PronunciationPdfs(pron, tied_map, config)) {
        auto [it, inserted] =
            building[node].children.try_emplace(pdf, static_cast<int32_t>(building.size()));
        if (inserted) {
          building.emplace_back();
          pdf_of.push_back(pdf);
        }
        node = it->second;
      }
      auto &words = building[node].words;
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
  }
  tree.nodes_.resize(building.size());
  for (size_t n = 0; n < building.size(); ++n) {
    tree.nodes_[n].pdf = pdf_of[n];
    for (const auto &[pdf, child] : building[n].children)
      tree.nodes_[n].children.push_back(child);
    tree.nodes_[n].words = std::move(building[n].words);
  }
  return tree;
}

}  // namespace chenone
