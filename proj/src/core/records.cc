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
#include "glor/core/records.h"

#include <cstdio>
#include <filesystem>

#include "glor/core/hash.h"
#include "glor/core/text.h"

namespace glor {

std::string DumpCanonical(const Json& j) {
  try {
    return j.dump(-1, ' ', false, Json::error_handler_t::strict);
  } catch (const Json::type_error& e) {
    throw ValidationError(0, "", std::string("cannot serialize: ") + e.what());
  }
}

JsonLinesReader::JsonLinesReader(const std::string& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path);
}

std::optional<Json> JsonLinesReader::Next() {
  std::string buf;
  while (std::getline(in_, buf)) {
    ++line_;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    if (buf.find_first_not_of(" \t") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(buf);
    } catch (const Json::parse_error& e) {
      throw ValidationError(line_, "", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError(line_, "", "record is not an object");
    return j;
  }
  if (in_.bad()) throw IoError("read failure on " + path_);
  return std::nullopt;
}

JsonLinesWriter::JsonLinesWriter(const std::string& path, bool append)
    : path_(path),
      out_(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc)) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
}

JsonLinesWriter::~JsonLinesWriter() {
  if (out_.is_open()) out_.flush();
}

void JsonLinesWriter::Write(const Json& j) {
  out_ << DumpCanonical(j) << '\n';
  if (!out_) throw IoError("write failure on " + path_);
  ++count_;
}

void JsonLinesWriter::Close() {
  out_.flush();
  if (!out_) throw IoError("write failure on " + path_);
  out_.close();
}

namespace field {

namespace {
std::string Path(std::string_view prefix, std::string_view name) {
  if (prefix.empty()) return std::string(name);
  return std::string(prefix) + "." + std::string(name);
}
}  // namespace

const Json& Require(const Json& obj, std::string_view name, std::size_t line,
                    std::string_view prefix) {
  if (!obj.is_object()) throw ValidationError(line, std::string(prefix), "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ValidationError(line, Path(prefix, name), "missing");
  return *it;
}

std::string String(const Json& obj, std::string_view name, std::size_t line,
                   bool non_empty, std::string_view prefix) {
  const Json& v = Require(obj, name, line, prefix);
  if (!v.is_string()) throw ValidationError(line, Path(prefix, name), "expected a string");
  std::string s = v.get<std::string>();
  if (non_empty && s.empty()) throw ValidationError(line, Path(prefix, name), "must be non-empty");
  return s;
}

std::string OptionalString(const Json& obj, std::string_view name,
                           std::size_t line, std::string_view prefix) {
  if (!obj.contains(name)) return {};
  return String(obj, name, line, false, prefix);
}

int64_t Integer(const Json& obj, std::string_view name, std::size_t line,
                std::string_view prefix) {
  const Json& v = Require(obj, name, line, prefix);
  if (!v.is_number_integer()) throw ValidationError(line, Path(prefix, name), "expected an integer");
  return v.get<int64_t>();
}

double Number(const Json& obj, std::string_view name, std::size_t line,
              std::string_view prefix) {
  const Json& v = Require(obj, name, line, prefix);
  if (!v.is_number()) throw ValidationError(line, Path(prefix, name), "expected a number");
  return v.get<double>();
}

bool Bool(const Json& obj, std::string_view name, std::size_t line,
          std::string_view prefix) {
  const Json& v = Require(obj, name, line, prefix);
  if (!v.is_boolean()) throw ValidationError(line, Path(prefix, name), "expected a boolean");
  return v.get<bool>();
}

}  // namespace field

namespace {

Lang LangField(const Json& j, std::string_view name, std::size_t line,
               std::string_view prefix = "") {
  const std::string tag = field::String(j, name, line, true, prefix);
  try {
    return ParseLang(tag);
  } catch (const UsageError& e) {
    throw ValidationError(line, prefix.empty() ? std::string(name)
                                               : std::string(prefix) + "." + std::string(name),
                          e.what());
  }
}

Json InstructionToJson(const InstructionRecord& r) {
  Json j;
  j["instruction"] = r.instruction;
  j["context"] = r.context;
  j["response"] = r.response;
  j["category"] = r.category;
  j["lang"] = LangName(r.lang);
  return j;
}

InstructionRecord InstructionFromJson(const Json& j, std::size_t line,
                                      std::string_view prefix) {
  InstructionRecord r;
  r.instruction = field::String(j, "instruction", line, true, prefix);
  r.context = field::OptionalString(j, "context", line, prefix);
  r.response = field::String(j, "response", line, true, prefix);
  r.category = field::OptionalString(j, "category", line, prefix);
  r.lang = j.contains("lang") ? LangField(j, "lang", line, prefix) : Lang::kEn;
  if (r.lang == Lang::kBitext) {
    throw ValidationError(line, std::string(prefix.empty() ? "" : std::string(prefix) + ".") + "lang",
                          "instruction records are en or ga");
  }
  return r;
}

}  // namespace

Json RecordSchema<Document>::ToJson(const Document& d) {
  Json j;
  j["id"] = d.id;
  j["source_id"] = d.source_id;
  j["lang"] = LangName(d.lang);
  j["text"] = d.text;
  j["char_count"] = d.char_count;
  return j;
}

Document RecordSchema<Document>::FromJson(const Json& j, std::size_t line) {
  Document d;
  d.id = field::String(j, "id", line, true);
  d.source_id = field::String(j, "source_id", line, true);
  d.lang = LangField(j, "lang", line);
  d.text = field::String(j, "text", line);
  const int64_t count = field::Integer(j, "char_count", line);
  if (count < 0) throw ValidationError(line, "char_count", "must be non-negative");
  d.char_count = static_cast<std::size_t>(count);
  if (d.char_count != text::ScalarCount(d.text)) {
    throw ValidationError(line, "char_count", "does not match the text's scalar count");
  }
  if (d.id != StableKey({d.source_id, d.text})) {
    throw ValidationError(line, "id", "does not match stable_key(source_id, text)");
  }
  return d;
}

Json RecordSchema<InstructionRecord>::ToJson(const InstructionRecord& r) {
  return InstructionToJson(r);
}

InstructionRecord RecordSchema<InstructionRecord>::FromJson(const Json& j,
                                                            std::size_t line) {
  return InstructionFromJson(j, line, "");
}

Json RecordSchema<ParallelInstructionRecord>::ToJson(const ParallelInstructionRecord& r) {
  Json j;
  j["source_id"] = r.source_id;
  j["en"] = InstructionToJson(r.en);
  j["ga"] = InstructionToJson(r.ga);
  return j;
}

ParallelInstructionRecord RecordSchema<ParallelInstructionRecord>::FromJson(
    const Json& j, std::size_t line) {
  ParallelInstructionRecord r;
  r.source_id = field::String(j, "source_id", line, true);
  r.en = InstructionFromJson(field::Require(j, "en", line), line, "en");
  r.ga = InstructionFromJson(field::Require(j, "ga", line), line, "ga");
  if (r.en.lang != Lang::kEn) throw ValidationError(line, "en.lang", "must be en");
  if (r.ga.lang != Lang::kGa) throw ValidationError(line, "ga.lang", "must be ga");
  if (r.en.category != r.ga.category) {
    throw ValidationError(line, "ga.category", "must equal en.category");
  }
  return r;
}

Json RecordSchema<PromptResponse>::ToJson(const PromptResponse& r) {
  Json j;
  j["source_id"] = r.source_id;
  j["prompt"] = r.prompt;
  j["response"] = r.response;
  return j;
}

PromptResponse RecordSchema<PromptResponse>::FromJson(const Json& j, std::size_t line) {
  PromptResponse r;
  r.source_id = field::String(j, "source_id", line, true);
  r.prompt = field::String(j, "prompt", line, true);
  r.response = field::String(j, "response", line, true);
  return r;
}

Json RecordSchema<PreferencePair>::ToJson(const PreferencePair& p) {
  Json j;
  j["source_id"] = p.source_id;
  j["prompt_ga"] = p.prompt_ga;
  j["accepted_ga"] = p.accepted_ga;
  j["rejected_ga"] = p.rejected_ga;
  j["intended"] = p.intended;
  return j;
}

PreferencePair RecordSchema<PreferencePair>::FromJson(const Json& j, std::size_t line) {
  PreferencePair p;
  p.source_id = field::String(j, "source_id", line, true);
  p.prompt_ga = field::String(j, "prompt_ga", line, true);
  p.accepted_ga = field::String(j, "accepted_ga", line, true);
  p.rejected_ga = field::String(j, "rejected_ga", line, true);
  if (j.contains("intended")) p.intended = field::String(j, "intended", line, true);
  if (p.intended != "accepted" && p.intended != "rejected") {
    throw ValidationError(line, "intended", "must be 'accepted' or 'rejected'");
  }
  if (p.accepted_ga == p.rejected_ga) {
    throw ValidationError(line, "rejected_ga", "identical to accepted_ga");
  }
  return p;
}

Json RecordSchema<SeedText>::ToJson(const SeedText& s) {
  Json j;
  j["id"] = s.id;
  j["pool"] = s.pool;
  j["text"] = s.text;
  return j;
}

SeedText RecordSchema<SeedText>::FromJson(const Json& j, std::size_t line) {
  SeedText s;
  s.id = field::String(j, "id", line, true);
  s.pool = field::OptionalString(j, "pool", line);
  s.text = field::String(j, "text", line, true);
  return s;
}

Json RecordSchema<QAPair>::ToJson(const QAPair& q) {
  Json j;
  j["seed_ref"] = q.seed_ref;
  j["model"] = q.model;
  j["question_ga"] = q.question_ga;
  j["answer_ga"] = q.answer_ga;
  return j;
}

QAPair RecordSchema<QAPair>::FromJson(const Json& j, std::size_t line) {
  QAPair q;
  q.seed_ref = field::String(j, "seed_ref", line, true);
  q.model = field::String(j, "model", line, true);
  q.question_ga = field::String(j, "question_ga", line, true);
  q.answer_ga = field::String(j, "answer_ga", line, true);
  return q;
}

void WriteJsonFile(const std::string& path, const Json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << j.dump(2, ' ', false, Json::error_handler_t::strict) << '\n';
    out.flush();
    if (!out) throw IoError("write failure on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(0, "", path + ": malformed JSON: " + e.what());
  }
}

}  // namespace glor
