// include/chenone/gmm.h

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

#ifndef CHENONE_GMM_H_
#define CHENONE_GMM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "chenone/stats.h"
#include "chenone/tree.h"

namespace chenone {

inline constexpr double kWeightFloor = 1e-5;

struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> var;

  int32_t Dim() const { return static_cast<int32_t>(mean.size()); }
  double LogDensity(std::span<const float> x) const;
};

struct Gmm {
  std::vector<double> weights;
  std::vector<DiagGaussian> components;

  int32_t NumComponents() const { return static_cast<int32_t>(components.size()); }
  int32_t Dim() const { return components.empty() ? 0 : components[0].Dim(); }

  double LogLikelihood(std::span<const float> x) const;
  /// Posterior over components; returns the total log-likelihood.
  double Posteriors(std::span<const float> x, std::vector<double> *post) const;

  /// Single-component GMM with the ML mean and floored variance of `stats`.
  static Gmm FromStats(const GaussStats &stats, double variance_floor = kVarianceFloor);

  /// Checks weights (sum to 1 within 1e-8), dims and the variance floor.
  void Validate(double variance_floor = kVarianceFloor) const;
};

/// Floors weights at `floor` and renormalizes.
void FloorWeights(std::vector<double> *weights, double floor = kWeightFloor);

}  // namespace chenone

#endif  // CHENONE_GMM_H_
