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
#ifndef GLOR_TOOLS_CLI_SUPPORT_H_
#define GLOR_TOOLS_CLI_SUPPORT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/records.h"
#include "glor/core/types.h"

namespace glor::cli {

enum class LogLevel { kError, kWarn, kInfo, kDebug };
LogLevel ParseLogLevel(std::string_view name);
void SetLogLevel(LogLevel level);
void Log(LogLevel level, const std::string& message);

// Everything needed to reproduce a run: the command, its effective options,
// the global seed, content keys of every input file and the toolkit version.
// No timestamps or host data, so equal runs give equal records.
class RunRecord {
 public:
  explicit RunRecord(std::vector<std::string> command);

  void SetOption(const std::string& name, Json value);
  void SetSeed(uint64_t seed);
  // Files are keyed by content; directories by their sorted file listing.
  void AddInput(const std::string& path);

  Json ToJson() const;
  // Written atomically.
  void WriteTo(const std::string& path) const;

 private:
  std::vector<std::string> command_;
  Json options_ = Json::object();
  Json inputs_ = Json::object();
  uint64_t seed_ = 0;
};

// Content key of a file or a directory tree.
std::string PathKey(const std::string& path);

// "<file>.run.json" for file outputs, "<dir>/run.json" for directories.
std::string RunRecordPathFor(const std::string& output, bool is_directory);

// SeedText records from .jsonl, or one seed per non-empty line otherwise
// (id "<stem>:<line>"). A missing pool defaults to the file stem.
std::vector<SeedText> LoadSeeds(const std::string& path);

// One number per non-empty line.
std::vector<double> LoadNumbers(const std::string& path);

// One label per non-empty line, trimmed.
std::vector<std::string> LoadLabels(const std::string& path);

std::vector<std::string> SplitCommaList(const std::vector<std::string>& values);

}  // namespace glor::cli

#endif  // GLOR_TOOLS_CLI_SUPPORT_H_
