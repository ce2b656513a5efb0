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
#ifndef GLOR_CORE_MANIFEST_H_
#define GLOR_CORE_MANIFEST_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glor/core/records.h"
#include "glor/core/types.h"

namespace glor {

// One corpus source as configured: a name, a file and a language tag.
//
// Source file formats, chosen by extension:
//   *.jsonl  one object per line: {"text": ...} for en/ga sources,
//            {"en": ..., "ga": ...} for bitext sources
//   other    one document per non-blank line; bitext lines are "en<TAB>ga"
struct ManifestSource {
  std::string name;
  std::string path;
  Lang lang = Lang::kGa;
};

struct ManifestEntry {
  ManifestSource source;
  uint64_t char_count = 0;
  uint64_t documents = 0;
  // Exact share of the total as char_count / total.
  uint64_t proportion_num = 0;
  uint64_t proportion_den = 1;

  double proportion() const {
    return static_cast<double>(proportion_num) / static_cast<double>(proportion_den);
  }
};

struct SourceManifest {
  std::vector<ManifestEntry> entries;
  uint64_t total_chars = 0;

  // Proportions are always derived from the counts, never supplied.
  static SourceManifest FromCounts(std::vector<ManifestEntry> entries);

  const ManifestEntry& Find(const std::string& name) const;
  Json ToJson() const;
};

// Reads {"sources": [{"name", "path", "lang"}, ...]}. Relative paths resolve
// against the manifest's directory. Names must be unique.
std::vector<ManifestSource> LoadManifestConfig(const std::string& path);

// Streams a source's documents in file order.
void ForEachDocument(const ManifestSource& source,
                     const std::function<void(Document&&)>& fn);

// Loads the config and counts characters in every source.
SourceManifest IngestManifest(const std::string& path);

}  // namespace glor

#endif  // GLOR_CORE_MANIFEST_H_
