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
#include "glor/texteval/texteval.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "glor/core/errors.h"
#include "glor/core/text.h"

namespace glor::texteval {

namespace {

using Ngram = std::vector<std::string_view>;

std::map<Ngram, uint64_t> CountNgrams(const std::vector<std::string>& tokens, std::size_t n) {
  std::map<Ngram, uint64_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    Ngram g;
    g.reserve(n);
    for (std::size_t k = 0; k < n; ++k) g.emplace_back(tokens[i + k]);
    ++counts[std::move(g)];
  }
  return counts;
}

}  // namespace

Json BleuResult::ToJson() const {
  Json j;
  j["score"] = score;
  j["max_n"] = max_n;
  j["precisions"] = precisions;
  j["matches"] = matches;
  j["totals"] = totals;
  j["brevity_penalty"] = brevity_penalty;
  j["hypothesis_length"] = hypothesis_length;
  j["reference_length"] = reference_length;
  return j;
}

std::vector<std::string> BleuTokenize(std::string_view input) {
  std::string spaced;
  spaced.reserve(input.size() + 8);
  for (char32_t c : text::DecodeUtf8(input)) {
    if (text::IsPunctuationOrSymbol(c)) {
      spaced.push_back(' ');
      text::AppendUtf8(c, spaced);
      spaced.push_back(' ');
    } else {
      text::AppendUtf8(text::ToLower(c), spaced);
    }
  }
  return text::SplitWhitespace(spaced);
}

BleuResult Bleu(std::span<const std::string> hypotheses,
                std::span<const std::string> references, int max_n) {
  if (hypotheses.size() != references.size()) {
    throw UsageError("hypothesis and reference counts differ: " +
                     std::to_string(hypotheses.size()) + " vs " +
                     std::to_string(references.size()));
  }
  if (max_n < 1) throw UsageError("max_n must be >= 1");
  BleuResult r;
  r.max_n = max_n;
  r.matches.assign(static_cast<std::size_t>(max_n), 0);
  r.totals.assign(static_cast<std::size_t>(max_n), 0);
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const auto hyp = BleuTokenize(hypotheses[s]);
    const auto ref = BleuTokenize(references[s]);
    r.hypothesis_length += hyp.size();
    r.reference_length += ref.size();
    for (int n = 1; n <= max_n; ++n) {
      const auto hyp_counts = CountNgrams(hyp, static_cast<std::size_t>(n));
      const auto ref_counts = CountNgrams(ref, static_cast<std::size_t>(n));
      for (const auto& [gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) r.matches[n - 1] += std::min(count, it->second);
      }
      if (hyp.size() >= static_cast<std::size_t>(n)) r.totals[n - 1] += hyp.size() - n + 1;
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < max_n; ++n) {
    const double p = r.matches[n] == 0
                         ? kBleuEpsilon
                         : static_cast<double>(r.matches[n]) / static_cast<double>(r.totals[n]);
    r.precisions.push_back(p);
    log_sum += std::log(p);
  }
  if (r.hypothesis_length == 0) {
    r.brevity_penalty = 0.0;
  } else if (r.hypothesis_length >= r.reference_length) {
    r.brevity_penalty = 1.0;
  } else {
    r.brevity_penalty = std::exp(1.0 - static_cast<double>(r.reference_length) /
                                           static_cast<double>(r.hypothesis_length));
  }
  r.score = r.brevity_penalty * std::exp(log_sum / max_n);
  return r;
}

std::string NormalizeAnswer(std::string_view input) {
  std::string cleaned;
  cleaned.reserve(input.size());
  for (char32_t c : text::DecodeUtf8(input)) {
    if (!text::IsPunctuationOrSymbol(c)) text::AppendUtf8(text::ToLower(c), cleaned);
  }
  std::string out;
  for (const auto& token : text::SplitWhitespace(cleaned)) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

double ExactMatch(std::span<const std::string> predictions, std::span<const std::string> golds) {
  if (predictions.size() != golds.size()) throw UsageError("prediction and gold counts differ");
  if (predictions.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    hits += NormalizeAnswer(predictions[i]) == NormalizeAnswer(golds[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

Json LengthStats::ToJson() const {
  Json j;
  j["count"] = count;
  j["total_words"] = total_words;
  j["mean"] = mean ? Json(*mean) : Json(nullptr);
  j["bin_width"] = bin_width;
  Json hist = Json::array();
  for (std::size_t k = 0; k < bins.size(); ++k) {
    Json row;
    row["lo"] = k * bin_width;
    row["hi"] = (k + 1) * bin_width;
    row["count"] = bins[k];
    hist.push_back(std::move(row));
  }
  j["histogram"] = std::move(hist);
  j["word_counts"] = word_counts;
  return j;
}

LengthStats ComputeLengthStats(std::span<const std::string> responses, uint64_t bin_width) {
  if (bin_width == 0) throw UsageError("bin width must be positive");
  LengthStats s;
  s.bin_width = bin_width;
  for (const auto& r : responses) {
    const uint64_t words = text::SplitWhitespace(r).size();
    s.word_counts.push_back(words);
    s.total_words += words;
    const std::size_t bin = static_cast<std::size_t>(words / bin_width);
    if (s.bins.size() <= bin) s.bins.resize(bin + 1, 0);
    ++s.bins[bin];
  }
  s.count = responses.size();
  if (s.count > 0) s.mean = static_cast<double>(s.total_words) / static_cast<double>(s.count);
  return s;
}

std::vector<std::string> LoadTexts(const std::string& path) {
  std::vector<std::string> out;
  if (std::filesystem::path(path).extension() == ".jsonl") {
    JsonLinesReader reader(path);
    while (auto j = reader.Next()) out.push_back(field::String(*j, "text", reader.line()));
    return out;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

}  // namespace glor::texteval
