// src/gmm.cc

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

#include "chenone/gmm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "chenone/error.h"

namespace chenone {

double DiagGaussian::LogDensity(std::span<const float> x) const {
  double acc = 0.0;
  for (size_t d = 0; d < mean.size(); ++d) {
    double diff = x[d] - mean[d];
    acc += std::log(2.0 * std::numbers::pi * var[d]) + diff * diff / var[d];
  }
  return -0.5 * acc;
}

double Gmm::LogLikelihood(std::span<const float> x) const {
  if (components.size() == 1) return std::log(weights[0]) + components[0].LogDensity(x);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> terms(components.size());
  for (size_t k = 0; k < components.size(); ++k) {
    terms[k] = std::log(weights[k]) + components[k].LogDensity(x);
    best = std::max(best, terms[k]);
  }
  if (!std::isfinite(best)) return best;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - best);
  return best + std::log(sum);
}

double Gmm::Posteriors(std::span<const float> x, std::vector<double> *post) const {
  post->resize(components.size());
  double best = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < components.size(); ++k) {
    (*post)[k] = std::log(weights[k]) + components[k].LogDensity(x);
    best = std::max(best, (*post)[k]);
  }
  double sum = 0.0;
  for (double &p : *post) {
    p = std::exp(p - best);
    sum += p;
  }
  for (double &p : *post) p /= sum;
  return best + std::log(sum);
}

Gmm Gmm::FromStats(const GaussStats &stats, double variance_floor) {
  DiagGaussian g;
  g.mean = stats.Mean();
  g.var = stats.Variance();
  for (double &v : g.var) v = std::max(v, variance_floor);
  return Gmm{{1.0}, {std::move(g)}};
}

void Gmm::Validate(double variance_floor) const {
  if (components.empty() || weights.size() != components.size())
    CHENONE_ERR(kInvalidArgument) << "GMM needs >= 1 component and one weight each";
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8)
    CHENONE_ERR(kInvalidArgument) << "GMM weights sum to " << total;
  for (const auto &c : components) {
    if (c.Dim() != Dim() || c.var.size() != c.mean.size())
      CHENONE_ERR(kDimMismatch) << "GMM component dims differ";
    for (double v : c.var)
      if (!(v >= variance_floor * (1 - 1e-12)))
        CHENONE_ERR(kInvalidArgument) << "variance " << v << " below floor";
  }
}

void FloorWeights(std::vector<double> *weights, double floor) {
  for (double &w : *weights) w = std::max(w, floor);
  double total = std::accumulate(weights->begin(), weights->end(), 0.0);
  for (double &w : *weights) w /= total;
}

}  // namespace chenone
