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
#ifndef GLOR_TEXTEVAL_TEXTEVAL_H_
#define GLOR_TEXTEVAL_TEXTEVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/records.h"

namespace glor::texteval {

// Floor applied to a zero n-gram precision before taking its log.
inline constexpr double kBleuEpsilon = 1e-9;

struct BleuResult {
  int max_n = 4;
  std::vector<double> precisions;
  std::vector<uint64_t> matches;
  std::vector<uint64_t> totals;
  double brevity_penalty = 0.0;
  uint64_t hypothesis_length = 0;
  uint64_t reference_length = 0;
  double score = 0.0;

  Json ToJson() const;
};

// Lower-cases, puts spaces around every P*/S* code point, splits on
// whitespace.
std::vector<std::string> BleuTokenize(std::string_view text);

// Corpus BLEU against a single reference per hypothesis. Clipped n-gram
// counts are pooled over the corpus; p_n = matches_n / totals_n, or epsilon
// when matches_n is zero; BP = 1 if c >= r else exp(1 - r/c) (0 when c = 0);
// score = BP * exp(mean log p_n).
BleuResult Bleu(std::span<const std::string> hypotheses,
                std::span<const std::string> references, int max_n = 4);

// Lower-case, drop P*/S* code points, collapse whitespace, trim.
std::string NormalizeAnswer(std::string_view text);

// Fraction of pairs equal after NormalizeAnswer. Empty input gives 0.
double ExactMatch(std::span<const std::string> predictions, std::span<const std::string> golds);

struct LengthStats {
  std::vector<uint64_t> word_counts;
  uint64_t bin_width = 10;
  // bins[k] counts responses with word count in [k*w, (k+1)*w).
  std::vector<uint64_t> bins;
  uint64_t count = 0;
  uint64_t total_words = 0;
  // Unset for an empty input.
  std::optional<double> mean;

  Json ToJson() const;
};

LengthStats ComputeLengthStats(std::span<const std::string> responses, uint64_t bin_width = 10);

// Loads texts for scoring: *.jsonl files take each object's "text" field,
// anything else is one text per line (blank lines kept as empty texts).
std::vector<std::string> LoadTexts(const std::string& path);

}  // namespace glor::texteval

#endif  // GLOR_TEXTEVAL_TEXTEVAL_H_
