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
#ifndef GLOR_CORE_RECORDS_H_
#define GLOR_CORE_RECORDS_H_

#include <cstddef>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glor/core/errors.h"
#include "glor/core/types.h"
#include "json.hpp"

// Line-delimited record files: UTF-8, LF endings, one JSON object per line,
// keys in the canonical order the schema writes them.
namespace glor {

using Json = nlohmann::ordered_json;

// Compact single-line form, non-ASCII left as UTF-8. Throws ValidationError
// on invalid UTF-8 in any string.
std::string DumpCanonical(const Json& j);

class JsonLinesReader {
 public:
  explicit JsonLinesReader(const std::string& path);

  // Next non-blank line. Throws ValidationError on malformed JSON or a
  // non-object line; the reader stays usable afterwards.
  std::optional<Json> Next();

  // 1-based number of the line last returned (or failed).
  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

class JsonLinesWriter {
 public:
  explicit JsonLinesWriter(const std::string& path, bool append = false);
  ~JsonLinesWriter();

  JsonLinesWriter(const JsonLinesWriter&) = delete;
  JsonLinesWriter& operator=(const JsonLinesWriter&) = delete;

  void Write(const Json& j);
  // Flushes and throws IoError if any write failed.
  void Close();
  std::size_t count() const { return count_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t count_ = 0;
};

// Helpers for schema validation; errors name the line and dotted field path.
namespace field {

const Json& Require(const Json& obj, std::string_view name, std::size_t line,
                    std::string_view prefix = "");
std::string String(const Json& obj, std::string_view name, std::size_t line,
                   bool non_empty = false, std::string_view prefix = "");
std::string OptionalString(const Json& obj, std::string_view name,
                           std::size_t line, std::string_view prefix = "");
int64_t Integer(const Json& obj, std::string_view name, std::size_t line,
                std::string_view prefix = "");
double Number(const Json& obj, std::string_view name, std::size_t line,
              std::string_view prefix = "");
bool Bool(const Json& obj, std::string_view name, std::size_t line,
          std::string_view prefix = "");

}  // namespace field

template <typename T>
struct RecordSchema;

#define GLOR_DECLARE_SCHEMA(Type)                              \
  template <>                                                  \
  struct RecordSchema<Type> {                                  \
    static Json ToJson(const Type& value);                     \
    static Type FromJson(const Json& j, std::size_t line = 0); \
  }

GLOR_DECLARE_SCHEMA(Document);
GLOR_DECLARE_SCHEMA(InstructionRecord);
GLOR_DECLARE_SCHEMA(ParallelInstructionRecord);
GLOR_DECLARE_SCHEMA(PromptResponse);
GLOR_DECLARE_SCHEMA(PreferencePair);
GLOR_DECLARE_SCHEMA(SeedText);
GLOR_DECLARE_SCHEMA(QAPair);

enum class OnInvalid { kThrow, kSkip };

// Streams typed records. With OnInvalid::kSkip, malformed or invalid lines are
// collected in errors() and skipped.
template <typename T>
class RecordReader {
 public:
  explicit RecordReader(const std::string& path,
                        OnInvalid policy = OnInvalid::kThrow)
      : reader_(path), policy_(policy) {}

  std::optional<T> Next() {
    for (;;) {
      try {
        std::optional<Json> j = reader_.Next();
        if (!j) return std::nullopt;
        return RecordSchema<T>::FromJson(*j, reader_.line());
      } catch (const ValidationError& e) {
        if (policy_ == OnInvalid::kThrow) throw;
        errors_.push_back(e.what());
      }
    }
  }

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  JsonLinesReader reader_;
  OnInvalid policy_;
  std::vector<std::string> errors_;
};

template <typename T>
std::vector<T> ReadRecords(const std::string& path) {
  RecordReader<T> reader(path);
  std::vector<T> out;
  while (auto r = reader.Next()) out.push_back(std::move(*r));
  return out;
}

template <typename T>
class RecordWriter {
 public:
  explicit RecordWriter(const std::string& path, bool append = false)
      : writer_(path, append) {}

  void Write(const T& value) { writer_.Write(RecordSchema<T>::ToJson(value)); }
  void Close() { writer_.Close(); }
  std::size_t count() const { return writer_.count(); }

 private:
  JsonLinesWriter writer_;
};

template <typename T>
std::size_t WriteRecords(const std::string& path, std::span<const T> records) {
  RecordWriter<T> writer(path);
  for (const T& r : records) writer.Write(r);
  writer.Close();
  return writer.count();
}

template <typename T>
std::size_t WriteRecords(const std::string& path, const std::vector<T>& records) {
  return WriteRecords(path, std::span<const T>(records));
}

// Writes a whole JSON document (pretty-printed, trailing newline) atomically
// via a temporary file and rename.
void WriteJsonFile(const std::string& path, const Json& j);
Json ReadJsonFile(const std::string& path);

}  // namespace glor

#endif  // GLOR_CORE_RECORDS_H_
