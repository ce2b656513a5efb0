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
#include "glor/mixer/mixer.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "glor/core/errors.h"
#include "glor/core/random.h"

namespace glor::mixer {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kBatch = 256;
constexpr std::size_t kMinBlocksForRatios = 34;

void WriteU32Le(std::ostream& out, std::span<const uint32_t> tokens) {
  std::vector<char> buf(tokens.size() * 4);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (int b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>(tokens[i] >> (8 * b));
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

bool ReadU32Le(std::istream& in, std::vector<uint32_t>& tokens) {
  std::vector<unsigned char> buf(tokens.size() * 4);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() == 0) return false;
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError("truncated block file");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    tokens[i] = static_cast<uint32_t>(buf[4 * i]) | static_cast<uint32_t>(buf[4 * i + 1]) << 8 |
                static_cast<uint32_t>(buf[4 * i + 2]) << 16 |
                static_cast<uint32_t>(buf[4 * i + 3]) << 24;
  }
  return true;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "train";
}

void MixPlan::Validate() const {
  if (block_size == 0) throw UsageError("block_size must be positive");
  int sum = 0;
  for (int r : split_ratio) {
    if (r <= 0) throw UsageError("split ratios must be positive");
    sum += r;
  }
  if (sum != 100) throw UsageError("split ratios must sum to 100, got " + std::to_string(sum));
  if (separator.empty()) throw UsageError("separator must be non-empty");
  if (workers < 1) throw UsageError("workers must be >= 1");
}

MixPlan MixPlan::FromJson(const Json& j, const std::string& base_dir) {
  MixPlan plan;
  if (j.contains("seed")) plan.seed = static_cast<uint64_t>(field::Integer(j, "seed", 0));
  if (j.contains("block_size")) {
    const int64_t size = field::Integer(j, "block_size", 0);
    if (size <= 0) throw ValidationError(0, "block_size", "must be positive");
    plan.block_size = static_cast<std::size_t>(size);
  }
  if (j.contains("split")) {
    const Json& s = j["split"];
    if (!s.is_array() || s.size() != 3) throw ValidationError(0, "split", "expected 3 integers");
    for (int i = 0; i < 3; ++i) {
      if (!s[i].is_number_integer()) throw ValidationError(0, "split", "expected 3 integers");
      plan.split_ratio[i] = s[i].get<int>();
    }
  }
  if (j.contains("separator")) plan.separator = field::String(j, "separator", 0, true);
  if (j.contains("bitext_first")) plan.bitext_first = field::Bool(j, "bitext_first", 0);
  if (j.contains("workers")) plan.workers = static_cast<int>(field::Integer(j, "workers", 0));
  if (j.contains("tokenizer")) {
    const Json& t = j["tokenizer"];
    plan.tokenizer.kind = field::String(t, "kind", 0, true, "tokenizer");
    if (t.contains("vocab")) {
      fs::path p = field::String(t, "vocab", 0, true, "tokenizer");
      if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
      plan.tokenizer.vocab_path = p.string();
    }
  }
  try {
    plan.Validate();
  } catch (const UsageError& e) {
    throw ValidationError(0, "", e.what());
  }
  return plan;
}

MixPlan MixPlan::Load(const std::string& path) {
  return FromJson(ReadJsonFile(path), fs::path(path).parent_path().string());
}

Json MixPlan::ToJson() const {
  Json j;
  j["seed"] = seed;
  j["block_size"] = block_size;
  j["split"] = split_ratio;
  j["separator"] = separator;
  j["bitext_first"] = bitext_first;
  Json t;
  t["kind"] = tokenizer.kind;
  if (!tokenizer.vocab_path.empty()) t["vocab"] = tokenizer.vocab_path;
  j["tokenizer"] = std::move(t);
  return j;
}

std::optional<std::string> SegmentDocument(const Document& doc, std::string_view separator) {
  if (doc.text.find(separator) != std::string::npos) return std::nullopt;
  std::string out;
  if (doc.lang == Lang::kBitext) {
    const auto [en, ga] = SplitBitext(doc.text);
    out.reserve(doc.text.size() + separator.size() + 12);
    out.append("[en] ").append(en).append("\n[ga] ").append(ga);
  } else {
    out.reserve(doc.text.size() + separator.size());
    out.append(doc.text);
  }
  out.append(separator);
  return out;
}

SegmentResult Segment(std::span<const Document> docs, std::string_view separator) {
  SegmentResult result;
  for (const Document& doc : docs) {
    if (auto text = SegmentDocument(doc, separator)) {
      result.texts.push_back(std::move(*text));
    } else {
      result.rejected_ids.push_back(doc.id);
    }
  }
  return result;
}

std::vector<Document> MixAndShuffle(std::vector<Document> docs, const MixPlan& plan) {
  if (!plan.bitext_first) {
    Rng rng(DeriveSeed(plan.seed, "all"));
    rng.Shuffle(std::span<Document>(docs));
    return docs;
  }
  std::vector<Document> bitext;
  std::vector<Document> mono;
  for (auto& d : docs) (d.lang == Lang::kBitext ? bitext : mono).push_back(std::move(d));
  Rng bitext_rng(DeriveSeed(plan.seed, "bitext"));
  bitext_rng.Shuffle(std::span<Document>(bitext));
  Rng mono_rng(DeriveSeed(plan.seed, "monolingual"));
  mono_rng.Shuffle(std::span<Document>(mono));
  bitext.reserve(bitext.size() + mono.size());
  for (auto& d : mono) bitext.push_back(std::move(d));
  return bitext;
}

std::vector<Document> MixAndShuffle(std::span<const ManifestSource> sources,
                                    const MixPlan& plan) {
  std::vector<Document> docs;
  for (const auto& source : sources) {
    ForEachDocument(source, [&docs](Document&& d) { docs.push_back(std::move(d)); });
  }
  return MixAndShuffle(std::move(docs), plan);
}

Json PackStats::ToJson() const {
  Json j;
  j["input_documents"] = input_documents;
  j["rejected_documents"] = rejected_documents;
  j["skipped_documents"] = skipped_documents;
  j["packed_documents"] = packed_documents;
  j["total_tokens"] = total_tokens;
  j["emitted_tokens"] = emitted_tokens;
  j["dropped_tokens"] = dropped_tokens;
  j["blocks"] = blocks;
  j["separators_emitted"] = separators_emitted;
  j["problem_ids"] = problem_ids;
  return j;
}

Packer::Packer(const MixPlan& plan, const Tokenizer& tokenizer, Sink sink)
    : plan_(plan), tokenizer_(tokenizer), sink_(std::move(sink)) {
  plan_.Validate();
  buffer_.reserve(plan_.block_size * 2);
}

std::optional<std::vector<uint32_t>> Packer::Tokenize(const Document& doc) {
  auto text = SegmentDocument(doc, plan_.separator);
  if (!text) return std::nullopt;
  return tokenizer_.Encode(*text);
}

void Packer::PackTokens(std::vector<uint32_t> tokens) {
  stats_.total_tokens += tokens.size();
  doc_ends_.push_back(stats_.total_tokens);
  buffer_.insert(buffer_.end(), tokens.begin(), tokens.end());
  std::size_t offset = 0;
  while (buffer_.size() - offset >= plan_.block_size) {
    std::span<const uint32_t> block(buffer_.data() + offset, plan_.block_size);
    for (uint32_t t : block) {
      if (t == tokenizer_.separator_id()) ++stats_.separators_emitted;
    }
    sink_(block);
    ++stats_.blocks;
    stats_.emitted_tokens += plan_.block_size;
    while (!doc_ends_.empty() && doc_ends_.front() <= stats_.emitted_tokens) {
      ++stats_.packed_documents;
      doc_ends_.pop_front();
    }
    offset += plan_.block_size;
  }
  buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset));
}

void Packer::Add(const Document& doc) { AddBatch(std::span<const Document>(&doc, 1)); }

void Packer::AddBatch(std::span<const Document> docs) {
  using Encoded = std::pair<int, std::vector<uint32_t>>;  // 0 ok, 1 rejected, 2 failed
  auto encode = [this](const Document& doc) -> Encoded {
    try {
      auto tokens = Tokenize(doc);
      if (!tokens) return {1, {}};
      return {0, std::move(*tokens)};
    } catch (const std::exception& e) {
      std::cerr << "glor: skipping document " << doc.id << ": " << e.what() << '\n';
      return {2, {}};
    }
  };
  std::vector<Encoded> encoded(docs.size());
  if (plan_.workers <= 1 || docs.size() < 2) {
    for (std::size_t i = 0; i < docs.size(); ++i) encoded[i] = encode(docs[i]);
  } else {
    const std::size_t workers = static_cast<std::size_t>(plan_.workers);
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < docs.size(); i += workers) encoded[i] = encode(docs[i]);
      }));
    }
    for (auto& f : futures) f.get();
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ++stats_.input_documents;
    if (encoded[i].first == 1) {
      ++stats_.rejected_documents;
      stats_.problem_ids.push_back(docs[i].id);
    } else if (encoded[i].first == 2) {
      ++stats_.skipped_documents;
      stats_.problem_ids.push_back(docs[i].id);
    } else {
      PackTokens(std::move(encoded[i].second));
    }
  }
}

PackStats Packer::Finish() {
  stats_.dropped_tokens = buffer_.size();
  buffer_.clear();
  return stats_;
}

std::vector<TokenBlock> Pack(std::span<const Document> docs, const MixPlan& plan,
                             const Tokenizer& tokenizer, PackStats* stats) {
  std::vector<TokenBlock> blocks;
  Packer packer(plan, tokenizer, [&blocks](std::span<const uint32_t> block) {
    blocks.push_back(TokenBlock{{block.begin(), block.end()}, Split::kTrain});
  });
  for (std::size_t i = 0; i < docs.size(); i += kBatch) {
    packer.AddBatch(docs.subspan(i, std::min(kBatch, docs.size() - i)));
  }
  PackStats s = packer.Finish();
  if (stats) *stats = std::move(s);
  return blocks;
}

double SplitStats::fraction(Split s) const {
  const uint64_t total = counts[0] + counts[1] + counts[2];
  if (total == 0) return 0.0;
  return static_cast<double>(counts[static_cast<int>(s)]) / static_cast<double>(total);
}

Json SplitStats::ToJson() const {
  Json j;
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    Json row;
    row["blocks"] = counts[static_cast<int>(s)];
    row["fraction"] = fraction(s);
    j[std::string(SplitName(s))] = std::move(row);
  }
  j["too_few_blocks"] = too_few_blocks;
  return j;
}

std::vector<Split> AssignSplits(std::size_t block_count, const MixPlan& plan,
                                SplitStats* stats) {
  plan.Validate();
  auto rounded = [block_count](int pct) {
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(block_count) * pct / 100.0));
  };
  std::size_t n_val = rounded(plan.split_ratio[1]);
  std::size_t n_test = rounded(plan.split_ratio[2]);
  if (n_val + n_test > block_count) {
    n_val = std::min(n_val, block_count);
    n_test = block_count - n_val;
  }
  std::vector<std::size_t> order(block_count);
  for (std::size_t i = 0; i < block_count; ++i) order[i] = i;
  Rng rng(DeriveSeed(plan.seed, "split"));
  rng.Shuffle(std::span<std::size_t>(order));
  std::vector<Split> splits(block_count, Split::kTrain);
  for (std::size_t k = 0; k < n_val; ++k) splits[order[k]] = Split::kValidation;
  for (std::size_t k = n_val; k < n_val + n_test; ++k) splits[order[k]] = Split::kTest;
  SplitStats s;
  for (Split sp : splits) ++s.counts[static_cast<int>(sp)];
  s.too_few_blocks = block_count < kMinBlocksForRatios;
  if (s.too_few_blocks) {
    std::cerr << "glor: warning: only " << block_count
              << " blocks; split ratios cannot be realized meaningfully\n";
  }
  if (stats) *stats = s;
  return splits;
}

void ApplySplits(std::span<TokenBlock> blocks, const MixPlan& plan, SplitStats* stats) {
  const auto splits = AssignSplits(blocks.size(), plan, stats);
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].split = splits[i];
}

MixSummary RunMix(const std::string& manifest_path, const MixPlan& plan,
                  const std::string& out_dir) {
  plan.Validate();
  fs::create_directories(out_dir);
  const auto sources = LoadManifestConfig(manifest_path);
  std::vector<Document> docs = MixAndShuffle(sources, plan);

  std::vector<ManifestEntry> entries;
  for (const auto& s : sources) entries.push_back(ManifestEntry{s, 0, 0, 0, 1});
  for (const auto& d : docs) {
    for (auto& e : entries) {
      if (e.source.name == d.source_id) {
        e.char_count += d.char_count;
        ++e.documents;
        break;
      }
    }
  }

  MixSummary summary;
  summary.manifest = SourceManifest::FromCounts(std::move(entries));

  const auto tokenizer = MakeTokenizer(plan.tokenizer, plan.separator);
  const fs::path tmp_path = fs::path(out_dir) / "blocks.tmp";
  {
    std::ofstream tmp(tmp_path, std::ios::binary | std::ios::trunc);
    if (!tmp) throw IoError("cannot open " + tmp_path.string());
    Packer packer(plan, *tokenizer,
                  [&tmp](std::span<const uint32_t> block) { WriteU32Le(tmp, block); });
    std::span<const Document> all(docs);
    for (std::size_t i = 0; i < all.size(); i += kBatch) {
      packer.AddBatch(all.subspan(i, std::min(kBatch, all.size() - i)));
    }
    summary.pack = packer.Finish();
    tmp.flush();
    if (!tmp) throw IoError("write failure on " + tmp_path.string());
  }
  docs.clear();

  const auto splits = AssignSplits(summary.pack.blocks, plan, &summary.split);
  {
    std::ifstream in(tmp_path, std::ios::binary);
    std::array<std::ofstream, 3> outs;
    for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
      const fs::path p = fs::path(out_dir) / (std::string(SplitName(s)) + ".bin");
      outs[static_cast<int>(s)].open(p, std::ios::binary | std::ios::trunc);
      if (!outs[static_cast<int>(s)]) throw IoError("cannot open " + p.string());
    }
    std::vector<uint32_t> block(plan.block_size);
    for (Split s : splits) {
      if (!ReadU32Le(in, block)) throw IoError("block file shorter than expected");
      WriteU32Le(outs[static_cast<int>(s)], block);
    }
    for (auto& o : outs) {
      o.flush();
      if (!o) throw IoError("write failure in " + out_dir);
    }
  }
  fs::remove(tmp_path);

  Json stats;
  stats["plan"] = plan.ToJson();
  stats["tokenizer"] = std::string(tokenizer->name());
  stats["pack"] = summary.pack.ToJson();
  stats["split"] = summary.split.ToJson();
  stats["sources"] = summary.manifest.ToJson();
  WriteJsonFile((fs::path(out_dir) / "stats.json").string(), stats);
  return summary;
}

std::vector<std::vector<uint32_t>> ReadBlockFile(const std::string& path,
                                                 std::size_t block_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<uint32_t>> blocks;
  std::vector<uint32_t> block(block_size);
  while (ReadU32Le(in, block)) blocks.push_back(block);
  return blocks;
}

}  // namespace glor::mixer
