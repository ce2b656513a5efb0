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
#ifndef GLOR_CORE_TEXT_H_
#define GLOR_CORE_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 and Unicode property helpers backed by ICU's character database.
// Ill-formed UTF-8 sequences decode as U+FFFD.
namespace glor::text {

std::u32string DecodeUtf8(std::string_view s);
void AppendUtf8(char32_t c, std::string& out);
std::string EncodeUtf8(std::u32string_view s);

// Number of Unicode scalar values.
std::size_t ScalarCount(std::string_view s);

bool IsValidUtf8(std::string_view s);

// General category P* or S*.
bool IsPunctuationOrSymbol(char32_t c);
bool IsWhitespace(char32_t c);
char32_t ToLower(char32_t c);

// Maximal runs of non-whitespace.
std::vector<std::string> SplitWhitespace(std::string_view s);

}  // namespace glor::text

#endif  // GLOR_CORE_TEXT_H_
