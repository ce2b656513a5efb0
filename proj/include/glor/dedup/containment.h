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
#ifndef GLOR_DEDUP_CONTAINMENT_H_
#define GLOR_DEDUP_CONTAINMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/manifest.h"
#include "glor/core/records.h"

// Corpus overlap measurement with word shingles:
//
//   containment(A, B) = |L(A) ∩ L(B)| / |L(A)|
//
// where L(X) is the set of distinct hashed width-token windows of X's
// normalized token stream. Directional: measure the smaller source inside
// the larger one.
namespace glor::dedup {

inline constexpr int kDefaultWidth = 5;

// Lower-cases, deletes every P*/S* code point, then splits on whitespace.
std::vector<std::string> Normalize(std::string_view text);

// Distinct window hashes, kept sorted ascending.
struct ShingleSet {
  std::string owner;
  int width = kDefaultWidth;
  std::vector<uint64_t> hashes;

  std::size_t size() const { return hashes.size(); }
  bool empty() const { return hashes.empty(); }
};

// Hash of one window: StableKey64 over its tokens.
uint64_t WindowHash(std::span<const std::string> window);

// Throws UsageError when width < 1. Fewer tokens than width gives an empty set.
ShingleSet Shingle(std::span<const std::string> tokens, int width,
                   std::string owner = {});

// Accumulates the shingles of many documents into one set. Windows never
// span two documents.
class ShingleAccumulator {
 public:
  ShingleAccumulator(std::string owner, int width);

  void AddTokens(std::span<const std::string> tokens);
  void AddText(std::string_view text) { AddTokens(Normalize(text)); }
  // Merges precomputed window hashes (e.g. from a worker thread).
  void AddHashes(std::span<const uint64_t> hashes);
  ShingleSet Finish();

 private:
  void Compact();

  std::string owner_;
  int width_;
  std::vector<uint64_t> pending_;
  std::size_t compacted_size_ = 0;
};

struct ContainmentReport {
  std::string a;
  std::string b;
  uint64_t a_size = 0;
  uint64_t intersection = 0;
  double containment = 0.0;
  // Set when L(A) is empty; containment is then reported as 0.
  bool empty_a = false;

  Json ToJson() const;
};

// Throws UsageError on mismatched widths.
ContainmentReport Containment(const ShingleSet& a, const ShingleSet& b);

// Binary shingle file: "GLSH", u32 version, u32 width, u64 owner length,
// owner bytes, u64 count, count sorted u64 hashes. Little-endian throughout.
void WriteShingleFile(const std::string& path, const ShingleSet& set);
ShingleSet ReadShingleFile(const std::string& path);

// Shingles every document of a source. workers > 1 shingles batches of
// documents concurrently; the merged set does not depend on worker count.
ShingleSet ShingleSource(const ManifestSource& source, int width, int workers = 1);

// Writes <out_dir>/<name>.shingles for every manifest source plus
// <out_dir>/index.json. Returns the source names in manifest order.
std::vector<std::string> ShingleManifest(const std::string& manifest_path, int width,
                                         const std::string& out_dir, int workers = 1);

// Every ordered pair (A, B), A != B, of the given sources (all indexed sources
// when empty), in index order. Loads at most two shingle sets at a time.
// Throws UsageError on an unknown source.
std::vector<ContainmentReport> ContainmentMatrix(const std::string& shingle_dir,
                                                 std::span<const std::string> sources = {});

}  // namespace glor::dedup

#endif  // GLOR_DEDUP_CONTAINMENT_H_
