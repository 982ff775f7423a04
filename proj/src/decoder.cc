// src/decoder.cc

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

#include "chenone/decoder.h"

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>

#include "chenone/error.h"

namespace chenone {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int32_t kStartWord = -1;

enum class StateKind : int8_t { kStartSilence, kWord, kInterSilence, kEndSilence };

struct SearchKey {
  StateKind kind;
  int32_t node;                  // prefix tree node for kWord, else -1
  std::vector<int32_t> history;  // last order-1 words, kStartWord for <s>

  auto operator<=>(const SearchKey &) const = default;
};

struct Token {
  double score = kNegInf;
  double acoustic = 0.0;
  double lm_log10 = 0.0;
  int32_t num_words = 0;
  int32_t link = -1;  // last word link
};

struct WordLink {
  int32_t word;
  int32_t prev;
};

class Search {
 public:
  Search(const Matrix &features, const AcousticModel &model, const PrefixTree &tree,
         const NGramLm &lm, const DecodeConfig &config)
      : features_(features), model_(model), tree_(tree), lm_(lm), config_(config),
        log_self_(model.topology.LogSelfLoop()),
        log_forward_(model.topology.LogForward()),
        log_sil_(std::log(config.optional_silence_prob)),
        log_no_sil_(std::log1p(-config.optional_silence_prob)),
        lm_scale_(config.lm_weight * std::log(10.0)) {}

  DecodeResult Run() {
    const int32_t num_frames = features_.NumRows();
    if (num_frames == 0) CHENONE_ERR(kNoHypothesis) << "empty utterance";
    std::vector<int32_t> start_history;
    if (lm_.order() > 1) start_history.push_back(kStartWord);
    Relax({StateKind::kStartSilence, -1, start_history}, Token{0.0, 0.0, 0.0, 0, -1});
    AddEmissions(0);
    Prune();
    for (int32_t t = 1; t < num_frames; ++t) {
      std::map<SearchKey, Token> prev;
      prev.swap(active_);
      for (const auto &[key, tok] : prev) Expand(key, tok);
      AddEmissions(t);
      Prune();
      if (active_.empty())
        CHENONE_ERR(kNoHypothesis) << "all tokens pruned at frame " << t;
    }

    const Token *best = nullptr;
    for (const auto &[key, tok] : active_) {
      if (key.kind != StateKind::kEndSilence) continue;
      if (best == nullptr || Better(tok, *best)) best = &tok;
    }
    if (best == nullptr || best->score == kNegInf)
      CHENONE_ERR(kNoHypothesis) << "no token reached the end of the utterance";
    DecodeResult result;
    result.total = best->score + log_forward_;
    result.acoustic = best->acoustic + log_forward_;
    result.lm_log10 = best->lm_log10;
    for (int32_t w : WordIds(best->link)) result.words.push_back(tree_.Word(w));
    return result;
  }

 private:
  std::vector<int32_t> WordIds(int32_t link) const {
    std::vector<int32_t> ids;
    for (; link >= 0; link = links_[link].prev) ids.push_back(links_[link].word);
    std::reverse(ids.begin(), ids.end());
    return ids;
  }

  bool WordsLess(int32_t a, int32_t b) const {
    if (a == b) return false;
    std::vector<int32_t> wa = WordIds(a), wb = WordIds(b);
    return std::lexicographical_compare(
        wa.begin(), wa.end(), wb.begin(), wb.end(),
        [this](int32_t x, int32_t y) { return tree_.Word(x) < tree_.Word(y); });
  }

  bool Better(const Token &a, const Token &b) const {
    if (a.score != b.score) return a.score > b.score;
    return WordsLess(a.link, b.link);
  }

  void Relax(const SearchKey &key, const Token &tok) {
    if (tok.score == kNegInf) return;
    auto [it, inserted] = active_.try_emplace(key, tok);
    if (!inserted && Better(tok, it->second)) it->second = tok;
  }

  static Token Plus(Token tok, double transition) {
    tok.score += transition;
    tok.acoustic += transition;
    return tok;
  }

  double LmLog10(const std::vector<int32_t> &history, int32_t word) {
    auto &row = lm_cache_[history];
    if (row.empty()) {
      std::vector<std::string> h;
      for (int32_t w : history) h.push_back(w == kStartWord ? kSentenceStart : tree_.Word(w));
      row.resize(tree_.NumWords() + 1);
      for (int32_t w = 0; w < tree_.NumWords(); ++w) row[w] = lm_.Log10Prob(h, tree_.Word(w));
      row.back() = lm_.Log10Prob(h, kSentenceEnd);
    }
    return row[word < 0 ? tree_.NumWords() : word];
  }

  std::vector<int32_t> Extend(const std::vector<int32_t> &history, int32_t word) const {
    std::vector<int32_t> h = history;
    h.push_back(word);
    size_t keep = static_cast<size_t>(lm_.order() - 1);
    if (h.size() > keep) h.erase(h.begin(), h.end() - keep);
    return h;
  }

  void EnterWords(const std::vector<int32_t> &history, const Token &tok) {
    for (int32_t child : tree_.Node(0).children)
      Relax({StateKind::kWord, child, history}, tok);
  }

  void Expand(const SearchKey &key, const Token &tok) {
    Relax(key, Plus(tok, log_self_));
    Token out = Plus(tok, log_forward_);
    switch (key.kind) {
      case StateKind::kStartSilence:
      case StateKind::kInterSilence:
        EnterWords(key.history, out);
        break;
      case StateKind::kWord: {
        const PrefixTreeNode &node = tree_.Node(key.node);
        for (int32_t child : node.children)
          Relax({StateKind::kWord, child, key.history}, out);
        for (int32_t w : node.words) {
          double lp = LmLog10(key.history, w);
          if (lp == kNegInf) continue;
          Token end = out;
          end.score += lm_scale_ * lp + config_.word_insertion_penalty;
          end.lm_log10 += lp;
          ++end.num_words;
          links_.push_back({w, end.link});
          end.link = static_cast<int32_t>(links_.size()) - 1;
          std::vector<int32_t> history = Extend(key.history, w);
          Relax({StateKind::kInterSilence, -1, history}, Plus(end, log_sil_));
          EnterWords(history, Plus(end, log_no_sil_));
          double lpe = LmLog10(history, -1);
          if (lpe == kNegInf) continue;
          end.score += lm_scale_ * lpe;
          end.lm_log10 += lpe;
          Relax({StateKind::kEndSilence, -1, history}, end);
        }
        break;
      }
      case StateKind::kEndSilence:
        break;
    }
  }

  void AddEmissions(int32_t t) {
    auto x = features_.Row(t);
    std::map<int32_t, double> cache;
    for (auto &[key, tok] : active_) {
      int32_t pdf = key.kind == StateKind::kWord ? tree_.Node(key.node).pdf
                                                 : model_.tied_map.SilenceId();
      auto [it, inserted] = cache.try_emplace(pdf, 0.0);
      if (inserted) it->second = model_.LogLikelihood(pdf, x);
      tok.score += it->second;
      tok.acoustic += it->second;
    }
  }

  void Prune() {
    double best = kNegInf;
    for (const auto &[key, tok] : active_) best = std::max(best, tok.score);
    for (auto it = active_.begin(); it != active_.end();) {
      if (IsPruned(it->second, best)) it = active_.erase(it);
      else ++it;
    }
    if (static_cast<int64_t>(active_.size()) <= config_.max_active) return;
    std::vector<std::pair<double, const SearchKey *>> ranked;
    for (const auto &[key, tok] : active_) ranked.emplace_back(tok.score, &key);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto &a, const auto &b) { return a.first > b.first; });
    std::map<SearchKey, Token> kept;
    for (int32_t i = 0; i < config_.max_active; ++i)
      kept.emplace(*ranked[i].second, active_.at(*ranked[i].second));
    active_.swap(kept);
  }

  bool IsPruned(const Token &tok, double best) const {
    return tok.score == kNegInf || tok.score < best - config_.beam;
  }

  const Matrix &features_;
  const AcousticModel &model_;
  const PrefixTree &tree_;
  const NGramLm &lm_;
  const DecodeConfig &config_;
  const double log_self_, log_forward_, log_sil_, log_no_sil_, lm_scale_;
  std::map<SearchKey, Token> active_;
  std::vector<WordLink> links_;
  std::map<std::vector<int32_t>, std::vector<double>> lm_cache_;
};

}  // namespace

void DecodeConfig::Validate() const {
  if (!(beam > 0.0)) CHENONE_ERR(kInvalidArgument) << "beam must be positive";
  if (max_active < 1) CHENONE_ERR(kInvalidArgument) << "max_active must be >= 1";
  if (!(optional_silence_prob > 0.0 && optional_silence_prob < 1.0))
    CHENONE_ERR(kInvalidArgument) << "optional silence probability must be in (0,1)";
}

double WeightedLmScore(double lm_log10, const DecodeConfig &config) {
  return config.lm_weight * std::log(10.0) * lm_log10;
}

DecodeResult Decode(const Matrix &features, const AcousticModel &model,
                    const PrefixTree &tree, const NGramLm &lm,
                    const DecodeConfig &config) {
  config.Validate();
  if (features.NumCols() != model.dim)
    CHENONE_ERR(kDimMismatch) << "features have dim " << features.NumCols()
                              << ", model " << model.dim;
  return Search(features, model, tree, lm, config).Run();
}

}  // namespace chenone
