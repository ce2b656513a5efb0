// Copyright 2026 The Glor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GLOR_STATS_BRADLEY_TERRY_H_
#define GLOR_STATS_BRADLEY_TERRY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glor/core/records.h"

namespace glor::stats {

// Pairwise win counts. wins[i][j] is how often models[i] beat models[j].
struct WinMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<uint64_t>> wins;

  static WinMatrix Zero(std::vector<std::string> models);

  std::size_t size() const { return models.size(); }
  // Throws UsageError for an unknown model.
  std::size_t IndexOf(const std::string& model) const;
  void AddWin(const std::string& winner, const std::string& loser, uint64_t count = 1);
  uint64_t Games(std::size_t i, std::size_t j) const { return wins[i][j] + wins[j][i]; }
  uint64_t Total() const;

  // Throws UsageError unless square, diagonal zero and model names unique.
  void Validate() const;

  Json ToJson() const;
  static WinMatrix FromJson(const Json& j);
};

struct BTOptions {
  // Pseudo-wins added to every ordered pair before fitting.
  double alpha = 0.01;
  // Convergence: max over models of |new - old| / old.
  double tol = 1e-10;
  int max_iter = 10000;
};

struct BTResult {
  std::vector<std::string> models;
  // Normalized to geometric mean 1, same order as models.
  std::vector<double> strengths;
  std::vector<std::string> ranking;
  int iterations = 0;
  bool converged = false;
  double alpha = 0.0;
  double log_likelihood = 0.0;
  // Smoothed log-likelihood after each sweep; non-decreasing.
  std::vector<double> log_likelihood_trace;

  Json ToJson() const;
};

// Smoothed log-likelihood sum_{i != j} (w_ij + alpha) * log(p_i / (p_i + p_j)).
double BradleyTerryLogLikelihood(const WinMatrix& m, double alpha,
                                 std::span<const double> strengths);

// Strongly connected components of the "i beat j" graph after smoothing,
// each listed by model name in matrix order.
std::vector<std::vector<std::string>> WinGraphComponents(const WinMatrix& m, double alpha);

// Minorization-maximization fit:
//   p_i <- W_i / sum_{j != i} n_ij / (p_i + p_j)
// with every model updated from the previous sweep's strengths, then
// renormalized. Throws DegenerateError naming the components when the
// smoothed win graph is not strongly connected.
BTResult FitBradleyTerry(const WinMatrix& m, const BTOptions& options = {});

// Descending strength. Strengths whose logs agree to within 1e-9 tie and are
// ordered by name. Invariant under a common positive rescaling.
std::vector<std::string> Rank(std::span<const std::string> models,
                              std::span<const double> strengths);
inline std::vector<std::string> Rank(const BTResult& r) { return Rank(r.models, r.strengths); }

}  // namespace glor::stats

#endif  // GLOR_STATS_BRADLEY_TERRY_H_
