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
#ifndef GLOR_MIXER_TOKENIZER_H_
#define GLOR_MIXER_TOKENIZER_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glor/core/records.h"

namespace glor::mixer {

// Maps text to 32-bit token ids. Occurrences of the separator literal always
// encode to separator_id(). Encode is const and safe to call concurrently.
class Tokenizer {
 public:
  explicit Tokenizer(std::string separator) : separator_(std::move(separator)) {}
  virtual ~Tokenizer() = default;

  // Throws std::runtime_error when the text cannot be encoded.
  std::vector<uint32_t> Encode(std::string_view text) const;

  const std::string& separator() const { return separator_; }
  virtual uint32_t separator_id() const = 0;
  virtual std::string_view name() const = 0;

 protected:
  virtual void EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const = 0;

 private:
  std::string separator_;
};

// Whitespace-delimited words; id = 1 + (StableKey64(word) mod (2^32 - 1)).
// Stateless, so ids do not depend on document order.
class WhitespaceTokenizer : public Tokenizer {
 public:
  using Tokenizer::Tokenizer;
  uint32_t separator_id() const override { return 0; }
  std::string_view name() const override { return "whitespace"; }

 protected:
  void EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const override;
};

// One token per UTF-8 byte, id = byte + 1.
class ByteTokenizer : public Tokenizer {
 public:
  using Tokenizer::Tokenizer;
  uint32_t separator_id() const override { return 0; }
  std::string_view name() const override { return "byte"; }

 protected:
  void EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const override;
};

// Whitespace words looked up in an external {"token": id} vocabulary. The
// separator must be in the vocabulary; unknown words map to "<unk>" when the
// vocabulary has it and fail otherwise.
class VocabTokenizer : public Tokenizer {
 public:
  VocabTokenizer(std::string separator, std::unordered_map<std::string, uint32_t> vocab);
  static VocabTokenizer Load(const std::string& path, std::string separator);

  uint32_t separator_id() const override { return separator_id_; }
  std::string_view name() const override { return "vocab"; }

 protected:
  void EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const override;

 private:
  std::unordered_map<std::string, uint32_t> vocab_;
  uint32_t separator_id_ = 0;
  bool has_unk_ = false;
  uint32_t unk_id_ = 0;
};

struct TokenizerSpec {
  std::string kind = "whitespace";  // whitespace | byte | vocab
  std::string vocab_path;
};

std::unique_ptr<Tokenizer> MakeTokenizer(const TokenizerSpec& spec, std::string separator);

}  // namespace glor::mixer

#endif  // GLOR_MIXER_TOKENIZER_H_
