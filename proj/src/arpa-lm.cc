// src/arpa-lm.cc

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

#include "chenone/arpa-lm.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "chenone/error.h"
#include "chenone/text-utils.h"

namespace chenone {

NGramLm::NGramLm(int32_t order) : order_(order) {
  if (order < 1) CHENONE_ERR(kInvalidArgument) << "n-gram order " << order;
  entries_.resize(order);
  insertion_order_.resize(order);
}

std::string NGramLm::Key(std::span<const std::string> words) {
  std::string key;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) key.push_back(' ');
    key += words[i];
  }
  return key;
}

bool NGramLm::Contains(const std::string &word) const {
  return entries_[0].count(word) > 0;
}

void NGramLm::Set(std::span<const std::string> words, double log10_prob,
                  double log10_backoff) {
  if (words.empty() || static_cast<int32_t>(words.size()) > order_)
    CHENONE_ERR(kInvalidArgument) << "cannot add a " << words.size()
                                  << "-gram to an order " << order_ << " model";
  auto &table = entries_[words.size() - 1];
  std::string key = Key(words);
  auto [it, inserted] = table.try_emplace(key, Entry{log10_prob, log10_backoff});
  if (!inserted) {
    it->second = {log10_prob, log10_backoff};
    return;
  }
  insertion_order_[words.size() - 1].push_back(key);
  if (words.size() == 1) vocabulary_.push_back(words[0]);
}

const NGramLm::Entry *NGramLm::Find(std::span<const std::string> words) const {
  if (words.empty() || static_cast<int32_t>(words.size()) > order_) return nullptr;
  const auto &table = entries_[words.size() - 1];
  auto it = table.find(Key(words));
  return it == table.end() ? nullptr : &it->second;
}

double NGramLm::Log10Prob(std::span<const std::string> history,
                          const std::string &word) const {
  if (static_cast<int32_t>(history.size()) > order_ - 1)
    history = history.subspan(history.size() - (order_ - 1));
  double backoff = 0.0;
  std::vector<std::string> ngram(history.begin(), history.end());
  ngram.push_back(word);
  for (size_t skip = 0; skip < ngram.size(); ++skip) {
    std::span<const std::string> suffix(ngram.data() + skip, ngram.size() - skip);
    if (const Entry *e = Find(suffix)) return backoff + e->log10_prob;
    if (suffix.size() > 1) {
      if (const Entry *h = Find(suffix.first(suffix.size() - 1)))
        backoff += h->log10_backoff;
    }
  }
  return -std::numeric_limits<double>::infinity();
}

double NGramLm::SentenceLog10Prob(std::span<const std::string> words) const {
  std::vector<std::string> history{kSentenceStart};
  double total = 0.0;
  for (const auto &w : words) {
    total += Log10Prob(history, w);
    history.push_back(w);
  }
  return total + Log10Prob(history, kSentenceEnd);
}

void NGramLm::Write(std::ostream &os) const {
  os << "\n\\data\\\n";
  for (int32_t n = 1; n <= order_; ++n)
    os << "ngram " << n << '=' << entries_[n - 1].size() << '\n';
  for (int32_t n = 1; n <= order_; ++n) {
    os << "\n\\" << n << "-grams:\n";
    for (const auto &key : insertion_order_[n - 1]) {
      const Entry &e = entries_[n - 1].at(key);
      os << FormatDouble(e.log10_prob) << '\t';
      for (char c : key) os << (c == ' ' ? '\t' : c);
      if (n < order_) os << '\t' << FormatDouble(e.log10_backoff);
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
}

NGramLm ReadArpa(std::istream &is) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  size_t i = 0;
  auto malformed = [&](const char *what) {
    CHENONE_ERR(kMalformedArpa) << "line " << i + 1 << ": " << what << ": '"
                                << lines[i] << "'";
  };

  while (i < lines.size() && Trim(lines[i]) != "\\data\\") ++i;
  if (i == lines.size()) CHENONE_ERR(kMalformedArpa) << "no \\data\\ section";
  ++i;

  std::vector<long long> counts;
  for (; i < lines.size(); ++i) {
    std::string_view t = Trim(lines[i]);
    if (t.empty()) continue;
    if (t.substr(0, 6) != "ngram ") break;
    auto eq = t.find('=');
    long long n = 0, c = 0;
    if (eq == std::string_view::npos || !ParseInt(Trim(t.substr(6, eq - 6)), &n) ||
        !ParseInt(Trim(t.substr(eq + 1)), &c) || c < 0)
      malformed("bad ngram count");
    if (n != static_cast<long long>(counts.size()) + 1) malformed("ngram counts out of order");
    counts.push_back(c);
  }
  if (counts.empty()) CHENONE_ERR(kMalformedArpa) << "no ngram counts";

  NGramLm lm(static_cast<int32_t>(counts.size()));
  std::vector<long long> seen(counts.size(), 0);
  int32_t section = 0;
  bool ended = false;
  for (; i < lines.size(); ++i) {
    std::string_view t = Trim(lines[i]);
    if (t.empty()) continue;
    if (t == "\\end\\") {
      ended = true;
      break;
    }
    if (t.front() == '\\') {
      constexpr std::string_view kSuffix = "-grams:";
      long long n = 0;
      if (t.size() <= kSuffix.size() + 1 || !t.ends_with(kSuffix) ||
          !ParseInt(t.substr(1, t.size() - 1 - kSuffix.size()), &n))
        malformed("bad section header");
      if (n < 1 || n > lm.order())
        CHENONE_ERR(kOrderMismatch) << "line " << i + 1 << ": " << n
                                    << "-grams beyond declared order " << lm.order();
      if (n != section + 1) malformed("sections out of order");
      section = static_cast<int32_t>(n);
      continue;
    }
    if (section == 0) malformed("n-gram outside a section");
    auto fields = SplitWhitespace(t);
    size_t n = static_cast<size_t>(section);
    if (fields.size() != n + 1 && fields.size() != n + 2) malformed("wrong field count");
    double prob = 0.0, backoff = 0.0;
    if (!ParseDouble(fields[0], &prob) || prob > 0.0) malformed("bad log10 probability");
    if (fields.size() == n + 2 && !ParseDouble(fields[n + 1], &backoff))
      malformed("bad backoff");
    std::vector<std::string> words(fields.begin() + 1, fields.begin() + 1 + n);
    if (n > 1)
      for (const auto &w : words)
        if (!lm.Contains(w)) malformed("word missing from the unigrams");
    if (lm.Find(words) != nullptr) malformed("duplicate n-gram");
    lm.Set(words, prob, backoff);
    ++seen[n - 1];
  }
  if (!ended) CHENONE_ERR(kMalformedArpa) << "missing \\end\\";
  for (size_t n = 0; n < counts.size(); ++n)
    if (seen[n] != counts[n])
      CHENONE_ERR(kOrderMismatch) << "header declares " << counts[n] << ' ' << n + 1
                                  << "-grams, found " << seen[n];
  return lm;
}

NGramLm LoadArpa(const std::string &path) {
  std::ifstream is(path);
  if (!is) CHENONE_ERR(kMissingArtifact) << "cannot open LM " << path;
  return ReadArpa(is);
}

}  // namespace chenone
