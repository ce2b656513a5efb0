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
#ifndef GLOR_CORE_HASH_H_
#define GLOR_CORE_HASH_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace glor {

// Pinned 64-bit key function. Do not change: persisted keys, caches and
// shingle files depend on it.
//
//   state = FNV-1a-64 over, for each part in order:
//             8-byte little-endian byte length of the part, then its bytes
//   key   = SplitMix64 finalizer applied to state
//
// The length prefix makes ["a","b"] and ["ab"] hash differently.
class KeyHasher {
 public:
  KeyHasher& Add(std::string_view part);

  // Streaming form of Add: announce the part's total size, then feed bytes.
  void BeginPart(uint64_t size);
  void Update(const char* data, std::size_t n);

  uint64_t Finish() const;

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

uint64_t SplitMix64(uint64_t x);

// Throws UsageError on an empty list.
uint64_t StableKey64(std::span<const std::string_view> parts);
uint64_t StableKey64(std::initializer_list<std::string_view> parts);

// 16 lowercase hex digits.
std::string StableKey(std::span<const std::string_view> parts);
std::string StableKey(std::initializer_list<std::string_view> parts);

std::string ToHex64(uint64_t value);
uint64_t FromHex64(std::string_view hex);

// Key of a file's full byte content, for run records.
std::string FileContentKey(const std::string& path);

}  // namespace glor

#endif  // GLOR_CORE_HASH_H_
