// include/chenone/prefix-tree.h

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


#ifndef CHENONE_PREFIX_TREE_H_
#define CHENONE_PREFIX_TREE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "chenone/context.h"
#include "chenone/tree.h"
#include "chenone/units.h"

namespace chenone {

struct PrefixTreeNode {
  int32_t pdf = -1;               // -1 at the root
  std::vector<int32_t> children;  // sorted by pdf
  std::vector<int32_t> words;     // word ids ending here
};

/// Lexicon tree over tied-state sequences. Node 0 is the non-emitting root;
/// pronunciations with the same tied-state sequence share one path.
class PrefixTree {
 public:
  int32_t NumNodes() const { return static_cast<int32_t>(nodes_.size()); }
  const PrefixTreeNode &Node(int32_t i) const { return nodes_[i]; }
  int32_t NumWords() const { return static_cast<int32_t>(words_.size()); }
  const std::string &Word(int32_t i) const { return words_[i]; }
  /// Number of root-to-terminal paths.
  int32_t NumTerminals() const;

 private:
  friend PrefixTree BuildPrefixTree(const Lexicon &, const TiedStateMap &,
                                    const CdConfig &);
  std::vector<PrefixTreeNode> nodes_;
  std::vector<std::string> words_;
};

/// Throws kEmptyLexicon, kUnknownCenterUnit and kUnsupported for
/// cross-word contexts.
PrefixTree BuildPrefixTree(const Lexicon &lexicon, const TiedStateMap &tied_map,
                           const CdConfig &config);

/// Tied-state sequence of one pronunciation.
std::vector<int32_t> PronunciationPdfs(const Pronunciation &pron,
                                       const TiedStateMap &tied_map,
                                       const CdConfig &config);

}  // namespace chenone

#endif  // CHENONE_PREFIX_TREE_H_
