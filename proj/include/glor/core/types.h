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
#ifndef GLOR_CORE_TYPES_H_
#define GLOR_CORE_TYPES_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace glor {

enum class Lang { kEn, kGa, kBitext };

std::string_view LangName(Lang lang);
// Accepts "en", "ga", "bitext". Throws UsageError otherwise.
Lang ParseLang(std::string_view name);

// One unit of corpus text. A bitext document stores its English and Irish
// sides in `text` separated by a single TAB.
struct Document {
  std::string id;
  std::string source_id;
  Lang lang = Lang::kGa;
  std::string text;
  std::size_t char_count = 0;

  // Fills id and char_count from (source_id, text).
  static Document Make(std::string source_id, Lang lang, std::string text);

  friend bool operator==(const Document&, const Document&) = default;
};

std::string JoinBitext(std::string_view en, std::string_view ga);
// Splits at the first TAB; a missing TAB yields an empty Irish side.
std::pair<std::string_view, std::string_view> SplitBitext(std::string_view text);

struct InstructionRecord {
  std::string instruction;
  std::string context;
  std::string response;
  std::string category;
  Lang lang = Lang::kEn;

  friend bool operator==(const InstructionRecord&, const InstructionRecord&) = default;
};

struct ParallelInstructionRecord {
  InstructionRecord en;
  InstructionRecord ga;
  std::string source_id;

  friend bool operator==(const ParallelInstructionRecord&,
                         const ParallelInstructionRecord&) = default;
};

// A prompt with an English source, kept for preference synthesis input.
struct PromptResponse {
  std::string prompt;
  std::string response;
  std::string source_id;

  friend bool operator==(const PromptResponse&, const PromptResponse&) = default;
};

struct PreferencePair {
  std::string prompt_ga;
  std::string accepted_ga;
  std::string rejected_ga;
  std::string source_id;
  // Which stored response the generating model meant to be better. Always
  // "accepted" for synthesized pairs; kept explicit for the validation arena.
  std::string intended = "accepted";

  friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

// Seed text that instruction generation and the arena draw from.
struct SeedText {
  std::string id;
  std::string pool;
  std::string text;

  friend bool operator==(const SeedText&, const SeedText&) = default;
};

struct QAPair {
  std::string seed_ref;
  std::string model;
  std::string question_ga;
  std::string answer_ga;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

}  // namespace glor

#endif  // GLOR_CORE_TYPES_H_
