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

#include "cli_support.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/version.h"

namespace glor::cli {
namespace {

namespace fs = std::filesystem;

std::atomic<LogLevel> g_level{LogLevel::kWarn};

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

LogLevel ParseLogLevel(std::string_view name) {
  if (name == "error") return LogLevel::kError;
  if (name == "warn") return LogLevel::kWarn;
  if (name == "info") return LogLevel::kInfo;
  if (name == "debug") return LogLevel::kDebug;
  throw UsageError("unknown log level '" + std::string(name) + "'");
}

void SetLogLevel(LogLevel level) { g_level = level; }

void Log(LogLevel level, const std::string& message) {
  static constexpr const char* kNames[] = {"error", "warn", "info", "debug"};
  if (level > g_level.load()) return;
  std::cerr << kNames[static_cast<int>(level)] << ": " << message << "\n";
}

RunRecord::RunRecord(std::vector<std::string> command) : command_(std::move(command)) {}

void RunRecord::SetOption(const std::string& name, Json value) {
  options_[name] = std::move(value);
}

void RunRecord::SetSeed(uint64_t seed) { seed_ = seed; }

void RunRecord::AddInput(const std::string& path) { inputs_[path] = PathKey(path); }

Json RunRecord::ToJson() const {
  Json j;
  j["toolkit"] = "glor";
  j["version"] = kVersion;
  j["command"] = command_;
  j["seed"] = seed_;
  j["options"] = options_;
  j["inputs"] = inputs_;
  j["record_key"] = StableKey({"run", j.dump()});
  return j;
}

void RunRecord::WriteTo(const std::string& path) const { WriteJsonFile(path, ToJson()); }

std::string PathKey(const std::string& path) {
  if (!fs::is_directory(path)) return FileContentKey(path);
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), path).generic_string());
  }
  std::sort(files.begin(), files.end());
  KeyHasher h;
  h.Add("dir");
  for (const std::string& f : files) {
    h.Add(f);
    h.Add(FileContentKey((fs::path(path) / f).string()));
  }
  return ToHex64(h.Finish());
}

std::string RunRecordPathFor(const std::string& output, bool is_directory) {
  return is_directory ? (fs::path(output) / "run.json").string() : output + ".run.json";
}

std::vector<SeedText> LoadSeeds(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  std::vector<SeedText> out;
  if (fs::path(path).extension() == ".jsonl") {
    out = ReadRecords<SeedText>(path);
  } else {
    const auto lines = ReadLines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string text = Trim(lines[i]);
      if (text.empty()) continue;
      out.push_back({stem + ":" + std::to_string(i + 1), stem, std::move(text)});
    }
  }
  for (SeedText& s : out) {
    if (s.pool.empty()) s.pool = stem;
  }
  return out;
}

std::vector<double> LoadNumbers(const std::string& path) {
  std::vector<double> out;
  const auto lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string t = Trim(lines[i]);
    if (t.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw ValidationError(i + 1, "value", "not a number: '" + t + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> LoadLabels(const std::string& path) {
  std::vector<std::string> out;
  for (const std::string& line : ReadLines(path)) {
    std::string t = Trim(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> SplitCommaList(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const std::string& v : values) {
    std::size_t start = 0;
    while (start <= v.size()) {
      const std::size_t comma = v.find(',', start);
      const std::string part = Trim(v.substr(start, comma == std::string::npos ? std::string::npos
                                                                               : comma - start));
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

}  // namespace glor::cli
