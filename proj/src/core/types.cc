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
#include "glor/core/types.h"

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/text.h"

namespace glor {

std::string_view LangName(Lang lang) {
  switch (lang) {
    case Lang::kEn:
      return "en";
    case Lang::kGa:
      return "ga";
    case Lang::kBitext:
      return "bitext";
  }
  return "ga";
}

Lang ParseLang(std::string_view name) {
  if (name == "en") return Lang::kEn;
  if (name == "ga") return Lang::kGa;
  if (name == "bitext") return Lang::kBitext;
  throw UsageError("unknown language tag '" + std::string(name) +
                   "' (expected en, ga or bitext)");
}

Document Document::Make(std::string source_id, Lang lang, std::string text) {
  Document doc;
  doc.id = StableKey({source_id, text});
  doc.char_count = text::ScalarCount(text);
  doc.source_id = std::move(source_id);
  doc.lang = lang;
  doc.text = std::move(text);
  return doc;
}

std::string JoinBitext(std::string_view en, std::string_view ga) {
  std::string out;
  out.reserve(en.size() + ga.size() + 1);
  out.append(en);
  out.push_back('\t');
  out.append(ga);
  return out;
}

std::pair<std::string_view, std::string_view> SplitBitext(std::string_view text) {
  const auto tab = text.find('\t');
  if (tab == std::string_view::npos) return {text, std::string_view()};
  return {text.substr(0, tab), text.substr(tab + 1)};
}

}  // namespace glor
