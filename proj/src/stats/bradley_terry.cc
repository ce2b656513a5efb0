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
#include "glor/stats/bradley_terry.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "glor/core/errors.h"

namespace glor::stats {

namespace {

constexpr double kTieLogTolerance = 1e-9;

void NormalizeGeometric(std::vector<double>& p) {
  double mean_log = 0.0;
  for (double v : p) mean_log += std::log(v);
  mean_log /= static_cast<double>(p.size());
  const double scale = std::exp(-mean_log);
  for (double& v : p) v *= scale;
}

}  // namespace

WinMatrix WinMatrix::Zero(std::vector<std::string> models) {
  WinMatrix m;
  const std::size_t k = models.size();
  m.models = std::move(models);
  m.wins.assign(k, std::vector<uint64_t>(k, 0));
  return m;
}

std::size_t WinMatrix::IndexOf(const std::string& model) const {
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (models[i] == model) return i;
  }
  throw UsageError("model '" + model + "' not in win matrix");
}

void WinMatrix::AddWin(const std::string& winner, const std::string& loser, uint64_t count) {
  const std::size_t i = IndexOf(winner);
  const std::size_t j = IndexOf(loser);
  if (i == j) throw UsageError("a model cannot beat itself");
  wins[i][j] += count;
}

uint64_t WinMatrix::Total() const {
  uint64_t total = 0;
  for (const auto& row : wins) total = std::accumulate(row.begin(), row.end(), total);
  return total;
}

void WinMatrix::Validate() const {
  if (wins.size() != models.size()) throw UsageError("win matrix is not square");
  for (std::size_t i = 0; i < wins.size(); ++i) {
    if (wins[i].size() != models.size()) throw UsageError("win matrix is not square");
    if (wins[i][i] != 0) throw UsageError("win matrix diagonal must be zero");
  }
  std::set<std::string> unique(models.begin(), models.end());
  if (unique.size() != models.size()) throw UsageError("duplicate model names");
}

Json WinMatrix::ToJson() const {
  Json j;
  j["models"] = models;
  j["wins"] = wins;
  j["total"] = Total();
  return j;
}

WinMatrix WinMatrix::FromJson(const Json& j) {
  WinMatrix m;
  const Json& models = field::Require(j, "models", 0);
  const Json& wins = field::Require(j, "wins", 0);
  if (!models.is_array() || !wins.is_array()) {
    throw ValidationError(0, "", "models and wins must be arrays");
  }
  for (const auto& name : models) {
    if (!name.is_string()) throw ValidationError(0, "models", "expected strings");
    m.models.push_back(name.get<std::string>());
  }
  for (std::size_t i = 0; i < wins.size(); ++i) {
    if (!wins[i].is_array()) throw ValidationError(0, "wins", "expected rows");
    std::vector<uint64_t> row;
    for (const auto& v : wins[i]) {
      if (!v.is_number_unsigned()) {
        throw ValidationError(0, "wins[" + std::to_string(i) + "]",
                              "expected non-negative integers");
      }
      row.push_back(v.get<uint64_t>());
    }
    m.wins.push_back(std::move(row));
  }
  try {
    m.Validate();
  } catch (const UsageError& e) {
    throw ValidationError(0, "wins", e.what());
  }
  return m;
}

Json BTResult::ToJson() const {
  Json j;
  Json rows = Json::array();
  for (std::size_t i = 0; i < models.size(); ++i) {
    Json row;
    row["model"] = models[i];
    row["strength"] = strengths[i];
    rows.push_back(std::move(row));
  }
  j["strengths"] = std::move(rows);
  j["ranking"] = ranking;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["alpha"] = alpha;
  j["log_likelihood"] = log_likelihood;
  return j;
}

double BradleyTerryLogLikelihood(const WinMatrix& m, double alpha,
                                 std::span<const double> strengths) {
  double ll = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      const double w = static_cast<double>(m.wins[i][j]) + alpha;
      if (w == 0.0) continue;
      ll += w * (std::log(strengths[i]) - std::log(strengths[i] + strengths[j]));
    }
  }
  return ll;
}

std::vector<std::vector<std::string>> WinGraphComponents(const WinMatrix& m, double alpha) {
  const std::size_t k = m.size();
  auto edge = [&](std::size_t i, std::size_t j) {
    return i != j && static_cast<double>(m.wins[i][j]) + alpha > 0.0;
  };
  // reach[i][j]: j reachable from i. k is small (a handful of models).
  std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    reach[i][i] = true;
    for (std::size_t j = 0; j < k; ++j) {
      if (edge(i, j)) reach[i][j] = true;
    }
  }
  for (std::size_t via = 0; via < k; ++via) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!reach[i][via]) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (reach[via][j]) reach[i][j] = true;
      }
    }
  }
  std::vector<std::vector<std::string>> components;
  std::vector<bool> assigned(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    if (assigned[i]) continue;
    std::vector<std::string> component;
    for (std::size_t j = i; j < k; ++j) {
      if (!assigned[j] && reach[i][j] && reach[j][i]) {
        assigned[j] = true;
        component.push_back(m.models[j]);
      }
    }
    components.push_back(std::move(component));
  }
  return components;
}

BTResult FitBradleyTerry(const WinMatrix& m, const BTOptions& options) {
  m.Validate();
  if (m.size() < 2) throw UsageError("Bradley-Terry needs at least two models");
  if (options.alpha < 0.0) throw UsageError("alpha must be >= 0");
  if (options.tol <= 0.0 || options.max_iter < 1) throw UsageError("bad tolerance or iteration cap");

  const auto components = WinGraphComponents(m, options.alpha);
  if (components.size() > 1) {
    std::string msg = "win graph is not strongly connected; components:";
    for (const auto& c : components) {
      msg += " {";
      for (std::size_t i = 0; i < c.size(); ++i) msg += (i ? ", " : "") + c[i];
      msg += "}";
    }
    throw DegenerateError(msg + " (use alpha > 0)");
  }

  const std::size_t k = m.size();
  std::vector<double> total_wins(k, 0.0);
  std::vector<std::vector<double>> games(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      total_wins[i] += static_cast<double>(m.wins[i][j]) + options.alpha;
      games[i][j] = static_cast<double>(m.Games(i, j)) + 2.0 * options.alpha;
    }
  }

  BTResult result;
  result.models = m.models;
  result.alpha = options.alpha;
  std::vector<double> p(k, 1.0);
  std::vector<double> next(k, 0.0);
  double ll = BradleyTerryLogLikelihood(m, options.alpha, p);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t i = 0; i < k; ++i) {
      double denom = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) denom += games[i][j] / (p[i] + p[j]);
      }
      next[i] = total_wins[i] / denom;
    }
    NormalizeGeometric(next);
    double max_change = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      max_change = std::max(max_change, std::abs(next[i] - p[i]) / p[i]);
    }
    p.swap(next);
    const double new_ll = BradleyTerryLogLikelihood(m, options.alpha, p);
    if (new_ll < ll - 1e-9 * std::max(1.0, std::abs(ll))) {
      throw std::logic_error("Bradley-Terry log-likelihood decreased during MM sweep");
    }
    ll = new_ll;
    result.log_likelihood_trace.push_back(ll);
    result.iterations = iter;
    if (max_change < options.tol) {
      result.converged = true;
      break;
    }
  }
  result.strengths = p;
  result.log_likelihood = ll;
  result.ranking = Rank(result.models, result.strengths);
  return result;
}

std::vector<std::string> Rank(std::span<const std::string> models,
                              std::span<const double> strengths) {
  if (models.size() != strengths.size()) throw UsageError("models and strengths differ in length");
  if (models.empty()) return {};
  std::vector<double> logs(strengths.size());
  for (std::size_t i = 0; i < strengths.size(); ++i) {
    if (!(strengths[i] > 0.0)) throw UsageError("strengths must be positive");
    logs[i] = std::log(strengths[i]);
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<long long> bucket(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    bucket[i] = std::llround((logs[i] - top) / kTieLogTolerance);
  }
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bucket[a] != bucket[b]) return bucket[a] > bucket[b];
    return models[a] < models[b];
  });
  std::vector<std::string> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(models[i]);
  return out;
}

}  // namespace glor::stats
