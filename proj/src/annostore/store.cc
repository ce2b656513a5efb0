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

#include "glor/annostore/store.h"

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "glor/core/errors.h"
#include "glor/core/random.h"

namespace glor::annostore {
namespace {

using arena::Comparison;
using stats::Choice;

bool RoleMatches(std::string_view filter, std::string_view role) {
  if (filter.empty() || filter == role) return true;
  return filter == "llm-judge" && role.starts_with("llm-judge:");
}

}  // namespace

void ValidateRole(std::string_view role) {
  if (role == "native" || role == "learner") return;
  if (role.starts_with("llm-judge:") && role.size() > 10) return;
  throw UsageError("role must be native, learner or llm-judge:<model>, got '" +
                   std::string(role) + "'");
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json Annotation::ToJson() const {
  Json j;
  j["comparison_key"] = comparison_key;
  j["annotator_id"] = annotator_id;
  j["role"] = role;
  j["choice"] = stats::ChoiceName(choice);
  j["resolved_choice"] = resolved_choice;
  j["timestamp"] = timestamp;
  return j;
}

Json Progress::ToJson() const {
  return Json{{"answered", answered}, {"skipped", skipped}, {"total", total}};
}

Json ExportResult::ToJson() const {
  Json j;
  j["total"] = annotations.size();
  j["annotations"] = Json::array();
  for (const Annotation& a : annotations) j["annotations"].push_back(a.ToJson());
  j["win_matrix"] = matrix.ToJson();
  return j;
}

Store::Store(std::vector<Comparison> comparisons, std::string ledger_path, uint64_t seed,
             Clock clock)
    : comparisons_(std::move(comparisons)),
      ledger_path_(std::move(ledger_path)),
      seed_(seed),
      clock_(clock ? std::move(clock) : Clock(UtcNow)) {
  for (std::size_t i = 0; i < comparisons_.size(); ++i) {
    if (!by_key_.emplace(comparisons_[i].key, i).second) {
      throw UsageError("duplicate comparison key " + comparisons_[i].key);
    }
  }
  Replay();
  ledger_ = std::fopen(ledger_path_.c_str(), "ab");
  if (!ledger_) {
    throw IoError("cannot open ledger " + ledger_path_ + ": " + std::strerror(errno));
  }
}

Store::~Store() {
  if (ledger_) std::fclose(ledger_);
}

void Store::Replay() {
  std::ifstream in(ledger_path_, std::ios::binary);
  if (!in) return;  // fresh ledger
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  in.close();

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string line = data.substr(pos, terminated ? nl - pos : std::string::npos);
    ++line_no;
    Json entry = Json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.is_object()) {
      if (!terminated) {
        // Torn final write: it was never acknowledged, so drop it.
        std::cerr << "warning: discarding incomplete ledger tail at line " << line_no << "\n";
        if (::truncate(ledger_path_.c_str(), static_cast<off_t>(pos)) != 0) {
          throw IoError("cannot truncate ledger " + ledger_path_);
        }
        break;
      }
      if (line.find_first_not_of(" \t\r") == std::string::npos) {
        pos = nl + 1;
        continue;
      }
      throw ValidationError(line_no, "", "malformed ledger entry");
    }
    if (!terminated) {
      std::ofstream fix(ledger_path_, std::ios::binary | std::ios::app);
      fix << '\n';
    }

    const std::string type = field::String(entry, "type", line_no, true);
    const std::string annotator = field::String(entry, "annotator", line_no, true);
    if (type == "register") {
      ApplyRegister(annotator, field::String(entry, "role", line_no, true));
    } else if (type == "annotation" || type == "skip") {
      const std::string key = field::String(entry, "key", line_no, true);
      if (!by_key_.count(key)) {
        throw ValidationError(line_no, "key", "ledger references unknown comparison " + key);
      }
      if (!annotators_.count(annotator)) {
        throw ValidationError(line_no, "annotator", "unregistered annotator " + annotator);
      }
      AnnotatorState& st = annotators_.at(annotator);
      if (type == "skip") {
        st.skipped[key] = true;
      } else {
        const Comparison& c = Find(key);
        Annotation a;
        a.comparison_key = key;
        a.annotator_id = annotator;
        a.role = st.role;
        try {
          a.choice = stats::ParseChoice(field::String(entry, "choice", line_no, true));
        } catch (const UsageError& e) {
          throw ValidationError(line_no, "choice", e.what());
        }
        a.resolved_choice = c.Resolve(a.choice);
        a.timestamp = field::OptionalString(entry, "timestamp", line_no);
        if (st.answered.count(key)) {
          throw ValidationError(line_no, "key", "second annotation for " + key);
        }
        st.answered[key] = annotations_.size();
        st.skipped.erase(key);
        annotations_.push_back(std::move(a));
      }
    } else {
      throw ValidationError(line_no, "type", "unknown ledger entry type '" + type + "'");
    }
    if (!terminated) break;
    pos = nl + 1;
  }
}

void Store::Append(const Json& entry) {
  const std::string line = entry.dump() + "\n";
  if (std::fwrite(line.data(), 1, line.size(), ledger_) != line.size() ||
      std::fflush(ledger_) != 0 || ::fsync(::fileno(ledger_)) != 0) {
    throw IoError("ledger append failed: " + std::string(std::strerror(errno)));
  }
}

void Store::ApplyRegister(const std::string& annotator, const std::string& role) {
  ValidateRole(role);
  auto it = annotators_.find(annotator);
  if (it != annotators_.end()) {
    if (it->second.role != role) {
      throw ConflictError("annotator " + annotator + " is registered as " + it->second.role);
    }
    return;
  }
  AnnotatorState st;
  st.role = role;
  st.order.resize(comparisons_.size());
  for (std::size_t i = 0; i < st.order.size(); ++i) st.order[i] = i;
  Rng rng(DeriveSeed(seed_, "annotator:" + annotator));
  rng.Shuffle(std::span<std::size_t>(st.order));
  annotators_.emplace(annotator, std::move(st));
}

const Comparison& Store::Find(const std::string& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) throw NotFoundError("unknown comparison key " + key);
  return comparisons_[it->second];
}

Store::AnnotatorState& Store::StateFor(const std::string& annotator) {
  auto it = annotators_.find(annotator);
  if (it == annotators_.end()) throw NotFoundError("unknown annotator " + annotator);
  return it->second;
}

const Store::AnnotatorState& Store::StateFor(const std::string& annotator) const {
  auto it = annotators_.find(annotator);
  if (it == annotators_.end()) throw NotFoundError("unknown annotator " + annotator);
  return it->second;
}

void Store::Register(const std::string& annotator, const std::string& role) {
  if (annotator.empty()) throw UsageError("annotator id must be non-empty");
  std::unique_lock lock(mu_);
  auto it = annotators_.find(annotator);
  const bool known = it != annotators_.end();
  ApplyRegister(annotator, role);
  if (!known) {
    try {
      Append(Json{{"type", "register"}, {"annotator", annotator}, {"role", role}});
    } catch (...) {
      annotators_.erase(annotator);
      throw;
    }
  }
}

bool Store::IsRegistered(const std::string& annotator) const {
  std::shared_lock lock(mu_);
  return annotators_.count(annotator) > 0;
}

std::optional<Comparison> Store::Next(const std::string& annotator) const {
  std::shared_lock lock(mu_);
  const AnnotatorState& st = StateFor(annotator);
  for (std::size_t idx : st.order) {
    const std::string& key = comparisons_[idx].key;
    if (!st.answered.count(key) && !st.skipped.count(key)) return comparisons_[idx];
  }
  return std::nullopt;
}

SubmitResult Store::Submit(const std::string& annotator, const std::string& key,
                           Choice choice) {
  std::unique_lock lock(mu_);
  AnnotatorState& st = StateFor(annotator);
  const Comparison& c = Find(key);
  if (auto it = st.answered.find(key); it != st.answered.end()) {
    const Annotation& prior = annotations_[it->second];
    if (prior.choice != choice) {
      throw ConflictError("annotator " + annotator + " already chose " +
                          std::string(stats::ChoiceName(prior.choice)) + " for " + key);
    }
    return {prior, true};
  }
  Annotation a;
  a.comparison_key = key;
  a.annotator_id = annotator;
  a.role = st.role;
  a.choice = choice;
  a.resolved_choice = c.Resolve(choice);
  a.timestamp = clock_();
  Json entry;
  entry["type"] = "annotation";
  entry["annotator"] = annotator;
  entry["key"] = key;
  entry["choice"] = stats::ChoiceName(choice);
  entry["resolved_choice"] = a.resolved_choice;
  entry["timestamp"] = a.timestamp;
  Append(entry);
  st.answered[key] = annotations_.size();
  st.skipped.erase(key);
  annotations_.push_back(a);
  return {std::move(a), false};
}

void Store::Skip(const std::string& annotator, const std::string& key) {
  std::unique_lock lock(mu_);
  AnnotatorState& st = StateFor(annotator);
  Find(key);
  if (st.answered.count(key)) throw ConflictError(key + " is already answered");
  if (st.skipped.count(key)) return;
  Append(Json{{"type", "skip"}, {"annotator", annotator}, {"key", key}, {"timestamp", clock_()}});
  st.skipped[key] = true;
}

Progress Store::ProgressFor(const std::string& annotator) const {
  std::shared_lock lock(mu_);
  const AnnotatorState& st = StateFor(annotator);
  return {st.answered.size(), st.skipped.size(), comparisons_.size()};
}

ExportResult Store::Export(const ExportFilter& filter) const {
  std::shared_lock lock(mu_);
  std::set<std::string> models;
  for (const Comparison& c : comparisons_) {
    if (filter.mode && c.mode != *filter.mode) continue;
    models.insert(c.model_a);
    models.insert(c.model_b);
  }
  ExportResult out;
  out.matrix = stats::WinMatrix::Zero({models.begin(), models.end()});
  for (const Annotation& a : annotations_) {
    if (!RoleMatches(filter.role, a.role)) continue;
    const Comparison& c = Find(a.comparison_key);
    if (filter.mode && c.mode != *filter.mode) continue;
    const std::string& loser = a.resolved_choice == c.model_a ? c.model_b : c.model_a;
    out.matrix.AddWin(a.resolved_choice, loser);
    out.annotations.push_back(a);
  }
  return out;
}

std::vector<std::string> Store::OrderFor(const std::string& annotator) const {
  std::shared_lock lock(mu_);
  const AnnotatorState& st = StateFor(annotator);
  std::vector<std::string> keys;
  keys.reserve(st.order.size());
  for (std::size_t idx : st.order) keys.push_back(comparisons_[idx].key);
  return keys;
}

}  // namespace glor::annostore
