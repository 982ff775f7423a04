// include/chenone/acoustic-model.h

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

#ifndef CHENONE_ACOUSTIC_MODEL_H_
#define CHENONE_ACOUSTIC_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chenone/context.h"
#include "chenone/features.h"
#include "chenone/gmm.h"
#include "chenone/stats.h"
#include "chenone/tree.h"

namespace chenone {

struct Utterance {
  std::string id;
  std::vector<std::string> words;
  Matrix features;
};

using Corpus = std::vector<Utterance>;

/// Tied-state GMMs plus the fixed 1-state topology.
struct AcousticModel {
  HmmTopology topology;
  TiedStateMap tied_map;
  std::vector<Gmm> pdfs;  // indexed by tied state id
  int32_t dim = 0;

  int32_t NumPdfs() const { return static_cast<int32_t>(pdfs.size()); }
  double LogLikelihood(int32_t pdf, std::span<const float> x) const {
    return pdfs[pdf].LogLikelihood(x);
  }
  void Validate() const;

  /// Header `CFAM v1 dim=<D> leaves=<pdfs> selfloop=<p>`; per pdf a
  /// `PDF <id> ncomp=<K>` line, a `W` line, then `M`/`V` lines per
  /// component, all at 17 significant digits. The tied-state map is stored
  /// separately as a tree file.
  void Write(std::ostream &os) const;
  static AcousticModel Read(std::istream &is, TiedStateMap tied_map);
  static AcousticModel ReadFile(const std::string &path, TiedStateMap tied_map);
};

struct FrameLabel {
  int32_t pdf;
  TriContext context;
  int32_t node;  // graph node

  bool operator==(const FrameLabel &) const = default;
};

struct AlignmentResult {
  std::vector<FrameLabel> frame_labels;
  double log_likelihood = 0.0;
};

/// Most likely state path through `graph` (emission log densities plus arc
/// log-probs). On equal scores the lower-numbered predecessor state wins.
/// Throws kNoPath and kDimMismatch.
AlignmentResult ViterbiAlign(const UtteranceGraph &graph, const Matrix &features,
                             const AcousticModel &model);

struct FlatStartReport {
  std::vector<std::string> skipped;  // utterances shorter than their graph
};

/// Context-independent single-Gaussian model from a uniform segmentation of
/// each utterance over its canonical state sequence (first pronunciation,
/// no optional silence). Units never seen keep the global mean/variance.
AcousticModel FlatStart(const Corpus &corpus, const Lexicon &lexicon,
                        const CdConfig &config, const HmmTopology &topology,
                        bool share_wb_root = false,
                        FlatStartReport *report = nullptr);

struct EmOptions {
  int32_t jobs = 1;
  double variance_floor = kVarianceFloor;
  double weight_floor = kWeightFloor;
};

struct EmResult {
  AcousticModel model;
  /// Total Viterbi log-likelihood under the model before the update.
  double log_likelihood = 0.0;
  int32_t num_skipped = 0;
  std::vector<AlignmentResult> alignments;  // empty entry for skipped utterances
};

/// One Viterbi-EM iteration: align every utterance, then re-estimate each
/// pdf from its frames (one EM step over mixture components). Pdfs without
/// frames keep their parameters. Utterances without a path are skipped.
EmResult EmIterate(const AcousticModel &model, const Corpus &corpus,
                   const std::vector<UtteranceGraph> &graphs,
                   const EmOptions &options = {});

/// Splits the heaviest component of every pdf (means +/- 0.1 sigma, weight
/// halved) until each pdf has `target_components`.
AcousticModel SplitMixtures(const AcousticModel &model, int32_t target_components);

/// Seeds one single-Gaussian pdf per leaf of `tied_map` from the pooled
/// statistics of the rows that reach it. Leaves without statistics fall back
/// to the nearest ancestor with data, then to the CI model.
AcousticModel Retie(const AcousticModel &ci_model, const TiedStateMap &tied_map,
                    const StatsTable &stats,
                    double variance_floor = kVarianceFloor);

/// Statistics of an aligned utterance keyed by frame context.
StatsTable AccumulateAlignment(const AlignmentResult &alignment,
                               const Matrix &features);

}  // namespace chenone

#endif  // CHENONE_ACOUSTIC_MODEL_H_
