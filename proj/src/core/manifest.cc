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
#include "glor/core/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "glor/core/errors.h"

namespace glor {

namespace fs = std::filesystem;

SourceManifest SourceManifest::FromCounts(std::vector<ManifestEntry> entries) {
  SourceManifest m;
  m.entries = std::move(entries);
  for (const auto& e : m.entries) m.total_chars += e.char_count;
  for (auto& e : m.entries) {
    e.proportion_num = e.char_count;
    e.proportion_den = m.total_chars == 0 ? 1 : m.total_chars;
  }
  return m;
}

const ManifestEntry& SourceManifest::Find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.source.name == name) return e;
  }
  throw UsageError("unknown source '" + name + "'");
}

Json SourceManifest::ToJson() const {
  Json j;
  j["total_chars"] = total_chars;
  Json list = Json::array();
  for (const auto& e : entries) {
    Json row;
    row["name"] = e.source.name;
    row["path"] = e.source.path;
    row["lang"] = LangName(e.source.lang);
    row["documents"] = e.documents;
    row["char_count"] = e.char_count;
    row["proportion"] = e.proportion();
    list.push_back(std::move(row));
  }
  j["sources"] = std::move(list);
  return j;
}

std::vector<ManifestSource> LoadManifestConfig(const std::string& path) {
  const Json j = ReadJsonFile(path);
  const Json& sources = field::Require(j, "sources", 0);
  if (!sources.is_array() || sources.empty()) {
    throw ValidationError(0, "sources", "expected a non-empty array");
  }
  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestSource> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string prefix = "sources[" + std::to_string(i) + "]";
    ManifestSource s;
    s.name = field::String(sources[i], "name", 0, true, prefix);
    fs::path p = field::String(sources[i], "path", 0, true, prefix);
    s.path = (p.is_absolute() ? p : base / p).lexically_normal().string();
    const std::string lang = field::String(sources[i], "lang", 0, true, prefix);
    try {
      s.lang = ParseLang(lang);
    } catch (const UsageError& e) {
      throw ValidationError(0, prefix + ".lang", e.what());
    }
    if (!names.insert(s.name).second) {
      throw ValidationError(0, prefix + ".name", "duplicate source name '" + s.name + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

void ForEachDocument(const ManifestSource& source,
                     const std::function<void(Document&&)>& fn) {
  if (fs::path(source.path).extension() == ".jsonl") {
    JsonLinesReader reader(source.path);
    while (auto j = reader.Next()) {
      std::string text;
      if (source.lang == Lang::kBitext) {
        text = JoinBitext(field::String(*j, "en", reader.line(), true),
                          field::String(*j, "ga", reader.line(), true));
      } else {
        text = field::String(*j, "text", reader.line());
      }
      if (text.empty()) continue;
      fn(Document::Make(source.name, source.lang, std::move(text)));
    }
    return;
  }
  std::ifstream in(source.path, std::ios::binary);
  if (!in) throw IoError("cannot open " + source.path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (source.lang == Lang::kBitext && line.find('\t') == std::string::npos) {
      throw ValidationError(number, "", source.path + ": bitext line lacks a TAB");
    }
    fn(Document::Make(source.name, source.lang, std::move(line)));
  }
  if (in.bad()) throw IoError("read failure on " + source.path);
}

SourceManifest IngestManifest(const std::string& path) {
  std::vector<ManifestEntry> entries;
  for (auto& source : LoadManifestConfig(path)) {
    ManifestEntry e;
    e.source = std::move(source);
    ForEachDocument(e.source, [&e](Document&& d) {
      e.char_count += d.char_count;
      ++e.documents;
    });
    entries.push_back(std::move(e));
  }
  return SourceManifest::FromCounts(std::move(entries));
}

}  // namespace glor
