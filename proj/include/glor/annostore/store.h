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
#ifndef GLOR_ANNOSTORE_STORE_H_
#define GLOR_ANNOSTORE_STORE_H_

#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "glor/arena/arena.h"
#include "glor/core/records.h"
#include "glor/stats/agreement.h"
#include "glor/stats/bradley_terry.h"

namespace glor::annostore {

// "native", "learner" or "llm-judge:<model>". Throws UsageError otherwise.
void ValidateRole(std::string_view role);

struct Annotation {
  std::string comparison_key;
  std::string annotator_id;
  std::string role;
  stats::Choice choice = stats::Choice::kA;
  std::string resolved_choice;
  std::string timestamp;  // UTC, ISO 8601

  Json ToJson() const;
};

struct Progress {
  uint64_t answered = 0;
  uint64_t skipped = 0;
  uint64_t total = 0;

  Json ToJson() const;
};

struct SubmitResult {
  Annotation annotation;
  bool duplicate = false;  // idempotent repeat, nothing appended
};

struct ExportFilter {
  std::string role;  // empty: any. "llm-judge" matches every llm-judge:<model>.
  std::optional<arena::Mode> mode;
};

struct ExportResult {
  std::vector<Annotation> annotations;
  stats::WinMatrix matrix;

  Json ToJson() const;
};

// Annotation state over a fixed comparison set, persisted as an append-only
// JSON-lines ledger. Every mutation is appended and fsync'd before the call
// returns; construction replays the ledger. Safe for concurrent use.
class Store {
 public:
  using Clock = std::function<std::string()>;

  // Throws ValidationError when the ledger references unknown comparisons.
  Store(std::vector<arena::Comparison> comparisons, std::string ledger_path, uint64_t seed,
        Clock clock = {});
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // Idempotent for the same role; ConflictError for a different one.
  void Register(const std::string& annotator, const std::string& role);
  bool IsRegistered(const std::string& annotator) const;

  // First comparison in the annotator's order that is neither answered nor
  // skipped; nullopt when done. NotFoundError for unknown annotators.
  std::optional<arena::Comparison> Next(const std::string& annotator) const;

  // NotFoundError for an unknown annotator or key, ConflictError when a
  // different choice was already recorded.
  SubmitResult Submit(const std::string& annotator, const std::string& key, stats::Choice choice);

  // Excluded from exports. NotFoundError as for Submit; ConflictError when
  // already answered.
  void Skip(const std::string& annotator, const std::string& key);

  Progress ProgressFor(const std::string& annotator) const;

  // Annotations in ledger order and the resolved wins between the models of
  // the comparisons that pass the mode filter.
  ExportResult Export(const ExportFilter& filter = {}) const;

  // Presentation order for an annotator: a seeded permutation of all keys.
  std::vector<std::string> OrderFor(const std::string& annotator) const;

  std::size_t size() const { return comparisons_.size(); }
  const std::string& ledger_path() const { return ledger_path_; }

 private:
  struct AnnotatorState {
    std::string role;
    std::vector<std::size_t> order;
    std::map<std::string, std::size_t> answered;  // key -> index into annotations_
    std::map<std::string, bool> skipped;
  };

  void Replay();
  void Append(const Json& entry);
  void ApplyRegister(const std::string& annotator, const std::string& role);
  const arena::Comparison& Find(const std::string& key) const;
  AnnotatorState& StateFor(const std::string& annotator);
  const AnnotatorState& StateFor(const std::string& annotator) const;

  std::vector<arena::Comparison> comparisons_;
  std::map<std::string, std::size_t> by_key_;
  std::string ledger_path_;
  uint64_t seed_;
  Clock clock_;

  mutable std::shared_mutex mu_;
  std::FILE* ledger_ = nullptr;
  std::map<std::string, AnnotatorState> annotators_;
  std::vector<Annotation> annotations_;
};

// Current UTC time, e.g. "2026-01-31T12:00:00Z".
std::string UtcNow();

}  // namespace glor::annostore

#endif  // GLOR_ANNOSTORE_STORE_H_
