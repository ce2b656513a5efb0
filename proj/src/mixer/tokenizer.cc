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
#include "glor/mixer/tokenizer.h"

#include <stdexcept>

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/text.h"

namespace glor::mixer {

std::vector<uint32_t> Tokenizer::Encode(std::string_view text) const {
  std::vector<uint32_t> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t hit = text.find(separator_, start);
    if (hit == std::string_view::npos) {
      EncodePiece(text.substr(start), out);
      return out;
    }
    EncodePiece(text.substr(start, hit - start), out);
    out.push_back(separator_id());
    start = hit + separator_.size();
  }
}

void WhitespaceTokenizer::EncodePiece(std::string_view piece,
                                      std::vector<uint32_t>& out) const {
  for (const auto& word : text::SplitWhitespace(piece)) {
    out.push_back(1 + static_cast<uint32_t>(StableKey64({word}) % 0xFFFFFFFFULL));
  }
}

void ByteTokenizer::EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const {
  for (char c : piece) out.push_back(static_cast<uint32_t>(static_cast<unsigned char>(c)) + 1);
}

VocabTokenizer::VocabTokenizer(std::string separator,
                               std::unordered_map<std::string, uint32_t> vocab)
    : Tokenizer(std::move(separator)), vocab_(std::move(vocab)) {
  auto sep = vocab_.find(this->separator());
  if (sep == vocab_.end()) {
    throw UsageError("vocabulary lacks the separator token " + this->separator());
  }
  separator_id_ = sep->second;
  for (const auto& [token, id] : vocab_) {
    if (id == separator_id_ && token != this->separator()) {
      throw UsageError("vocabulary token '" + token + "' shares the separator id");
    }
  }
  if (auto unk = vocab_.find("<unk>"); unk != vocab_.end()) {
    has_unk_ = true;
    unk_id_ = unk->second;
  }
}

VocabTokenizer VocabTokenizer::Load(const std::string& path, std::string separator) {
  const Json j = ReadJsonFile(path);
  if (!j.is_object()) throw ValidationError(0, "", path + ": vocabulary must be an object");
  std::unordered_map<std::string, uint32_t> vocab;
  for (const auto& [token, id] : j.items()) {
    if (!id.is_number_unsigned() || id.get<uint64_t>() > 0xFFFFFFFFULL) {
      throw ValidationError(0, token, path + ": id must be a 32-bit unsigned integer");
    }
    vocab.emplace(token, id.get<uint32_t>());
  }
  return VocabTokenizer(std::move(separator), std::move(vocab));
}

void VocabTokenizer::EncodePiece(std::string_view piece, std::vector<uint32_t>& out) const {
  for (const auto& word : text::SplitWhitespace(piece)) {
    auto it = vocab_.find(word);
    if (it != vocab_.end()) {
      out.push_back(it->second);
    } else if (has_unk_) {
      out.push_back(unk_id_);
    } else {
      throw std::runtime_error("out-of-vocabulary token '" + word + "'");
    }
  }
}

std::unique_ptr<Tokenizer> MakeTokenizer(const TokenizerSpec& spec, std::string separator) {
  if (separator.empty()) throw UsageError("separator must be non-empty");
  if (spec.kind == "whitespace") return std::make_unique<WhitespaceTokenizer>(std::move(separator));
  if (spec.kind == "byte") return std::make_unique<ByteTokenizer>(std::move(separator));
  if (spec.kind == "vocab") {
    if (spec.vocab_path.empty()) throw UsageError("vocab tokenizer needs a vocabulary path");
    return std::make_unique<VocabTokenizer>(VocabTokenizer::Load(spec.vocab_path, std::move(separator)));
  }
  throw UsageError("unknown tokenizer '" + spec.kind + "'");
}

}  // namespace glor::mixer
