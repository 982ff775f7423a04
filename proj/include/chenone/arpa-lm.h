// include/chenone/arpa-lm.h

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


#ifndef CHENONE_ARPA_LM_H_
#define CHENONE_ARPA_LM_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace chenone {

inline constexpr const char *kSentenceStart = "<s>";
inline constexpr const char *kSentenceEnd = "</s>";

/// Backoff n-gram model in log10.
class NGramLm {
 public:
  struct Entry {
    double log10_prob = 0.0;
    double log10_backoff = 0.0;
  };

  explicit NGramLm(int32_t order = 1);

  int32_t order() const { return order_; }
  int64_t NumNGrams(int32_t n) const {
    return static_cast<int64_t>(entries_[n - 1].size());
  }
  /// Unigram words in file order.
  const std::vector<std::string> &vocabulary() const { return vocabulary_; }
  bool Contains(const std::string &word) const;

  /// Adds or replaces an n-gram (1 <= words.size() <= order).
  void Set(std::span<const std::string> words, double log10_prob,
           double log10_backoff = 0.0);
  const Entry *Find(std::span<const std::string> words) const;

  /// log10 P(word | history) with standard backoff. Only the last order-1
  /// history words are used. -inf for a word outside the vocabulary.
  double Log10Prob(std::span<const std::string> history,
                   const std::string &word) const;
  /// Sum over the words and the sentence end, starting from <s>.
  double SentenceLog10Prob(std::span<const std::string> words) const;

  /// Standard ARPA text, n-grams in insertion order.
  void Write(std::ostream &os) const;

 private:
  static std::string Key(std::span<const std::string> words);

  int32_t order_;
  std::vector<std::string> vocabulary_;
  std::vector<std::unordered_map<std::string, Entry>> entries_;
  std::vector<std::vector<std::string>> insertion_order_;
};

/// Throws kMalformedArpa (with the line number) and kOrderMismatch when the
/// n-gram counts in the sections disagree with the header.
NGramLm ReadArpa(std::istream &is);
NGramLm LoadArpa(const std::string &path);

}  // namespace chenone

#endif  // CHENONE_ARPA_LM_H_
