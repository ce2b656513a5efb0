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
#include "glor/dedup/containment.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/text.h"

namespace glor::dedup {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'G', 'L', 'S', 'H'};
constexpr uint32_t kVersion = 1;
constexpr std::size_t kBatchDocs = 512;

void SortUnique(std::vector<uint64_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<uint64_t> WindowHashes(std::span<const std::string> tokens, int width) {
  std::vector<uint64_t> out;
  const auto w = static_cast<std::size_t>(width);
  if (tokens.size() < w) return out;
  out.reserve(tokens.size() - w + 1);
  for (std::size_t i = 0; i + w <= tokens.size(); ++i) {
    out.push_back(WindowHash(tokens.subspan(i, w)));
  }
  return out;
}

void CheckWidth(int width) {
  if (width < 1) throw UsageError("shingle width must be >= 1, got " + std::to_string(width));
}

template <typename T>
void PutLe(std::ostream& out, T value) {
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>(static_cast<uint64_t>(value) >> (8 * i));
  }
  out.write(buf, sizeof(T));
}

template <typename T>
T GetLe(std::istream& in, const std::string& path) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) {
    throw IoError(path + ": truncated shingle file");
  }
  uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string ShingleFileName(const std::string& name) { return name + ".shingles"; }

}  // namespace

std::vector<std::string> Normalize(std::string_view input) {
  std::string cleaned;
  cleaned.reserve(input.size());
  for (char32_t c : text::DecodeUtf8(input)) {
    if (text::IsPunctuationOrSymbol(c)) continue;
    text::AppendUtf8(text::ToLower(c), cleaned);
  }
  return text::SplitWhitespace(cleaned);
}

uint64_t WindowHash(std::span<const std::string> window) {
  KeyHasher h;
  for (const auto& token : window) h.Add(token);
  return h.Finish();
}

ShingleSet Shingle(std::span<const std::string> tokens, int width, std::string owner) {
  CheckWidth(width);
  ShingleSet set;
  set.owner = std::move(owner);
  set.width = width;
  set.hashes = WindowHashes(tokens, width);
  SortUnique(set.hashes);
  return set;
}

ShingleAccumulator::ShingleAccumulator(std::string owner, int width)
    : owner_(std::move(owner)), width_(width) {
  CheckWidth(width);
}

void ShingleAccumulator::AddTokens(std::span<const std::string> tokens) {
  const auto hashes = WindowHashes(tokens, width_);
  AddHashes(hashes);
}

void ShingleAccumulator::AddHashes(std::span<const uint64_t> hashes) {
  pending_.insert(pending_.end(), hashes.begin(), hashes.end());
  if (pending_.size() > 2 * compacted_size_ + (1u << 20)) Compact();
}

void ShingleAccumulator::Compact() {
  SortUnique(pending_);
  compacted_size_ = pending_.size();
}

ShingleSet ShingleAccumulator::Finish() {
  Compact();
  ShingleSet set;
  set.owner = owner_;
  set.width = width_;
  set.hashes = std::move(pending_);
  pending_.clear();
  compacted_size_ = 0;
  return set;
}

Json ContainmentReport::ToJson() const {
  Json j;
  j["a"] = a;
  j["b"] = b;
  j["a_size"] = a_size;
  j["intersection"] = intersection;
  j["containment"] = containment;
  j["empty_a"] = empty_a;
  return j;
}

ContainmentReport Containment(const ShingleSet& a, const ShingleSet& b) {
  if (a.width != b.width) {
    throw UsageError("shingle widths differ: " + std::to_string(a.width) + " vs " +
                     std::to_string(b.width));
  }
  ContainmentReport r;
  r.a = a.owner;
  r.b = b.owner;
  r.a_size = a.hashes.size();
  auto ia = a.hashes.begin();
  auto ib = b.hashes.begin();
  while (ia != a.hashes.end() && ib != b.hashes.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++r.intersection;
      ++ia;
      ++ib;
    }
  }
  r.empty_a = r.a_size == 0;
  r.containment = r.empty_a ? 0.0
                            : static_cast<double>(r.intersection) / static_cast<double>(r.a_size);
  return r;
}

void WriteShingleFile(const std::string& path, const ShingleSet& set) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(kMagic, 4);
    PutLe<uint32_t>(out, kVersion);
    PutLe<uint32_t>(out, static_cast<uint32_t>(set.width));
    PutLe<uint64_t>(out, set.owner.size());
    out.write(set.owner.data(), static_cast<std::streamsize>(set.owner.size()));
    PutLe<uint64_t>(out, set.hashes.size());
    for (uint64_t h : set.hashes) PutLe<uint64_t>(out, h);
    out.flush();
    if (!out) throw IoError("write failure on " + tmp);
  }
  fs::rename(tmp, path);
}

ShingleSet ReadShingleFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || !std::equal(magic, magic + 4, kMagic)) {
    throw IoError(path + ": not a shingle file");
  }
  if (GetLe<uint32_t>(in, path) != kVersion) throw IoError(path + ": unsupported version");
  ShingleSet set;
  set.width = static_cast<int>(GetLe<uint32_t>(in, path));
  const auto owner_len = GetLe<uint64_t>(in, path);
  set.owner.resize(owner_len);
  in.read(set.owner.data(), static_cast<std::streamsize>(owner_len));
  const auto count = GetLe<uint64_t>(in, path);
  set.hashes.reserve(count);
  for (uint64_t i = 0; i < count; ++i) set.hashes.push_back(GetLe<uint64_t>(in, path));
  if (!std::is_sorted(set.hashes.begin(), set.hashes.end())) {
    throw IoError(path + ": hashes not sorted");
  }
  return set;
}

ShingleSet ShingleSource(const ManifestSource& source, int width, int workers) {
  ShingleAccumulator acc(source.name, width);
  if (workers <= 1) {
    ForEachDocument(source, [&acc](Document&& d) { acc.AddText(d.text); });
    return acc.Finish();
  }
  std::vector<std::string> batch;
  std::vector<std::future<std::vector<uint64_t>>> inflight;
  auto drain = [&](std::size_t keep) {
    while (inflight.size() > keep) {
      acc.AddHashes(inflight.front().get());
      inflight.erase(inflight.begin());
    }
  };
  auto launch = [&] {
    inflight.push_back(std::async(std::launch::async, [docs = std::move(batch), width] {
      std::vector<uint64_t> out;
      for (const auto& text : docs) {
        auto h = WindowHashes(Normalize(text), width);
        out.insert(out.end(), h.begin(), h.end());
      }
      return out;
    }));
    batch.clear();
    drain(static_cast<std::size_t>(workers));
  };
  ForEachDocument(source, [&](Document&& d) {
    batch.push_back(std::move(d.text));
    if (batch.size() >= kBatchDocs) launch();
  });
  if (!batch.empty()) launch();
  drain(0);
  return acc.Finish();
}

std::vector<std::string> ShingleManifest(const std::string& manifest_path, int width,
                                         const std::string& out_dir, int workers) {
  CheckWidth(width);
  fs::create_directories(out_dir);
  Json index;
  index["width"] = width;
  Json list = Json::array();
  std::vector<std::string> names;
  for (const auto& source : LoadManifestConfig(manifest_path)) {
    ShingleSet set = ShingleSource(source, width, workers);
    const std::string file = ShingleFileName(source.name);
    WriteShingleFile((fs::path(out_dir) / file).string(), set);
    Json row;
    row["name"] = source.name;
    row["file"] = file;
    row["count"] = set.size();
    list.push_back(std::move(row));
    names.push_back(source.name);
  }
  index["sources"] = std::move(list);
  WriteJsonFile((fs::path(out_dir) / "index.json").string(), index);
  return names;
}

std::vector<ContainmentReport> ContainmentMatrix(const std::string& shingle_dir,
                                                 std::span<const std::string> sources) {
  const Json index = ReadJsonFile((fs::path(shingle_dir) / "index.json").string());
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& row : field::Require(index, "sources", 0)) {
    files.emplace_back(field::String(row, "name", 0, true), field::String(row, "file", 0, true));
  }
  std::vector<std::pair<std::string, std::string>> selected;
  if (sources.empty()) {
    selected = files;
  } else {
    for (const auto& name : sources) {
      auto it = std::find_if(files.begin(), files.end(),
                             [&name](const auto& f) { return f.first == name; });
      if (it == files.end()) throw UsageError("unknown source id '" + name + "'");
      selected.push_back(*it);
    }
  }
  std::vector<ContainmentReport> reports;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const ShingleSet a = ReadShingleFile((fs::path(shingle_dir) / selected[i].second).string());
    for (std::size_t j = 0; j < selected.size(); ++j) {
      if (i == j) continue;
      const ShingleSet b = ReadShingleFile((fs::path(shingle_dir) / selected[j].second).string());
      reports.push_back(Containment(a, b));
    }
  }
  return reports;
}

}  // namespace glor::dedup
