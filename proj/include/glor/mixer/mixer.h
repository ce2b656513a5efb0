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
#ifndef GLOR_MIXER_MIXER_H_
#define GLOR_MIXER_MIXER_H_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/manifest.h"
#include "glor/core/records.h"
#include "glor/core/types.h"
#include "glor/mixer/tokenizer.h"

// Pre-training stream assembly: segment and tag documents, put bitext first,
// shuffle, pack into fixed-size token blocks and split the blocks.
namespace glor::mixer {

inline constexpr std::string_view kDefaultSeparator = "<|endoftext|>";

enum class Split { kTrain = 0, kValidation = 1, kTest = 2 };
std::string_view SplitName(Split split);

struct MixPlan {
  uint64_t seed = 0;
  std::size_t block_size = 2048;
  std::array<int, 3> split_ratio = {94, 3, 3};
  std::string separator = std::string(kDefaultSeparator);
  bool bitext_first = true;
  TokenizerSpec tokenizer;
  int workers = 1;

  // Throws UsageError on a non-positive block size or split ratios that are
  // not positive and summing to 100.
  void Validate() const;

  // Missing keys keep their defaults. Relative vocabulary paths resolve
  // against base_dir.
  static MixPlan FromJson(const Json& j, const std::string& base_dir = {});
  static MixPlan Load(const std::string& path);
  Json ToJson() const;
};

struct TokenBlock {
  std::vector<uint32_t> tokens;
  Split split = Split::kTrain;
};

// Renders a document for the stream: bitext as "[en] <en>\n[ga] <ga>",
// followed by exactly one separator. Returns nullopt when the text already
// contains the separator literal.
std::optional<std::string> SegmentDocument(const Document& doc, std::string_view separator);

struct SegmentResult {
  std::vector<std::string> texts;
  std::vector<std::string> rejected_ids;
};

SegmentResult Segment(std::span<const Document> docs, std::string_view separator);

// Reads every manifest source and orders the documents: bitext first in its
// own seeded shuffle, then all monolingual documents in one seeded shuffle.
// With bitext_first = false everything is shuffled together.
std::vector<Document> MixAndShuffle(std::span<const ManifestSource> sources,
                                    const MixPlan& plan);
// Ordering step of MixAndShuffle on documents already in memory.
std::vector<Document> MixAndShuffle(std::vector<Document> docs, const MixPlan& plan);

struct PackStats {
  uint64_t input_documents = 0;
  uint64_t rejected_documents = 0;  // contained the separator literal
  uint64_t skipped_documents = 0;   // tokenizer failure
  uint64_t packed_documents = 0;    // separator landed inside an emitted block
  uint64_t total_tokens = 0;
  uint64_t emitted_tokens = 0;
  uint64_t dropped_tokens = 0;
  uint64_t blocks = 0;
  uint64_t separators_emitted = 0;
  std::vector<std::string> problem_ids;

  Json ToJson() const;
};

// Streams documents into fixed-size blocks. Each complete block goes to the
// sink; the trailing partial block is dropped by Finish().
class Packer {
 public:
  using Sink = std::function<void(std::span<const uint32_t>)>;

  Packer(const MixPlan& plan, const Tokenizer& tokenizer, Sink sink);

  void Add(const Document& doc);
  // Tokenizes a batch concurrently (plan.workers) and packs it in order.
  void AddBatch(std::span<const Document> docs);
  PackStats Finish();

 private:
  void PackTokens(std::vector<uint32_t> tokens);
  std::optional<std::vector<uint32_t>> Tokenize(const Document& doc);

  const MixPlan& plan_;
  const Tokenizer& tokenizer_;
  Sink sink_;
  std::vector<uint32_t> buffer_;
  // Absolute stream position just past each packed document.
  std::deque<uint64_t> doc_ends_;
  PackStats stats_;
};

// Convenience wrapper collecting every block in memory.
std::vector<TokenBlock> Pack(std::span<const Document> docs, const MixPlan& plan,
                             const Tokenizer& tokenizer, PackStats* stats = nullptr);

struct SplitStats {
  std::array<uint64_t, 3> counts = {0, 0, 0};
  bool too_few_blocks = false;  // fewer than 34 blocks

  double fraction(Split s) const;
  Json ToJson() const;
};

// Seeded block-level assignment: a permutation of block indices is cut into
// round(n*val/100) validation, round(n*test/100) test, the rest train.
std::vector<Split> AssignSplits(std::size_t block_count, const MixPlan& plan,
                                SplitStats* stats = nullptr);
void ApplySplits(std::span<TokenBlock> blocks, const MixPlan& plan, SplitStats* stats = nullptr);

struct MixSummary {
  PackStats pack;
  SplitStats split;
  SourceManifest manifest;
};

// Full pipeline: writes <out_dir>/{train,validation,test}.bin (fixed records
// of block_size little-endian u32 ids, in stream order) and stats.json.
MixSummary RunMix(const std::string& manifest_path, const MixPlan& plan,
                  const std::string& out_dir);

// Reads a block file written by RunMix.
std::vector<std::vector<uint32_t>> ReadBlockFile(const std::string& path,
                                                 std::size_t block_size);

}  // namespace glor::mixer

#endif  // GLOR_MIXER_MIXER_H_
