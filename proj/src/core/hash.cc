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
#include "glor/core/hash.h"

#include <charconv>
#include <fstream>
#include <vector>

#include "glor/core/errors.h"

namespace glor {

namespace {
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;
}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void KeyHasher::BeginPart(uint64_t size) {
  for (int i = 0; i < 8; ++i) {
    state_ ^= static_cast<unsigned char>(size >> (8 * i));
    state_ *= kFnvPrime;
  }
}

void KeyHasher::Update(const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    state_ ^= static_cast<unsigned char>(data[i]);
    state_ *= kFnvPrime;
  }
}

KeyHasher& KeyHasher::Add(std::string_view part) {
  BeginPart(part.size());
  Update(part.data(), part.size());
  return *this;
}

uint64_t KeyHasher::Finish() const { return SplitMix64(state_); }

uint64_t StableKey64(std::span<const std::string_view> parts) {
  if (parts.empty()) throw UsageError("stable key needs at least one part");
  KeyHasher h;
  for (std::string_view p : parts) h.Add(p);
  return h.Finish();
}

uint64_t StableKey64(std::initializer_list<std::string_view> parts) {
  return StableKey64(std::span<const std::string_view>(parts.begin(), parts.size()));
}

std::string StableKey(std::span<const std::string_view> parts) {
  return ToHex64(StableKey64(parts));
}

std::string StableKey(std::initializer_list<std::string_view> parts) {
  return ToHex64(StableKey64(parts));
}

std::string ToHex64(uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

uint64_t FromHex64(std::string_view hex) {
  uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (hex.size() != 16 || ec != std::errc() || ptr != hex.data() + hex.size()) {
    throw UsageError("not a 16-digit hex key: " + std::string(hex));
  }
  return value;
}

std::string FileContentKey(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path);
  KeyHasher h;
  h.BeginPart(static_cast<uint64_t>(in.tellg()));
  in.seekg(0);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.Update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return ToHex64(h.Finish());
}

}  // namespace glor
