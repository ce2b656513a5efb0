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
#include "glor/synth/provider.h"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "httplib.h"

#include "glor/core/errors.h"
#include "glor/core/hash.h"
#include "glor/core/text.h"

namespace glor::synth {

namespace {

std::string FormatTemperature(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

Json ParseBody(const std::string& body) {
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw ProviderError(0, false, std::string("unparseable provider response: ") + e.what());
  }
}

uint64_t UsageField(const Json& obj, const char* name) {
  if (!obj.is_object()) return 0;
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_number_unsigned()) return 0;
  return it->get<uint64_t>();
}

uint64_t WordCount(std::string_view s) { return text::SplitWhitespace(s).size(); }

std::string FirstWords(std::string_view s, std::size_t n) {
  std::string out;
  std::size_t taken = 0;
  for (const auto& w : text::SplitWhitespace(s)) {
    if (taken++ == n) break;
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::string Fence(const Json& j) { return "```json\n" + j.dump(2, ' ', false) + "\n```"; }

std::string Garble(std::string_view s) {
  auto words = text::SplitWhitespace(s);
  std::string out = "[droch-aistriúchán]";
  for (auto it = words.rbegin(); it != words.rend(); ++it) out += " " + *it;
  return out;
}

}  // namespace

std::string_view ProviderName(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAI:
      return "openai";
    case ProviderKind::kAnthropic:
      return "anthropic";
    case ProviderKind::kGoogle:
      return "google";
    case ProviderKind::kMock:
      return "mock";
  }
  return "mock";
}

ProviderKind ParseProvider(std::string_view name) {
  if (name == "openai" || name == "openai-style") return ProviderKind::kOpenAI;
  if (name == "anthropic" || name == "anthropic-style") return ProviderKind::kAnthropic;
  if (name == "google" || name == "google-style") return ProviderKind::kGoogle;
  if (name == "mock") return ProviderKind::kMock;
  throw UsageError("unknown provider '" + std::string(name) + "'");
}

std::string_view DefaultKeyEnv(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAI:
      return "OPENAI_API_KEY";
    case ProviderKind::kAnthropic:
      return "ANTHROPIC_API_KEY";
    case ProviderKind::kGoogle:
      return "GEMINI_API_KEY";
    case ProviderKind::kMock:
      return "";
  }
  return "";
}

std::string_view DefaultBaseUrl(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAI:
      return "https://api.openai.com";
    case ProviderKind::kAnthropic:
      return "https://api.anthropic.com";
    case ProviderKind::kGoogle:
      return "https://generativelanguage.googleapis.com";
    case ProviderKind::kMock:
      return "";
  }
  return "";
}

void GenRequest::Validate() const {
  if (model.empty()) throw UsageError("request model must be non-empty");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw UsageError("temperature must be in [0, 2]");
  }
  if (max_tokens < 1) throw UsageError("max_tokens must be positive");
}

std::string GenRequest::CacheKey() const {
  const std::string temp = FormatTemperature(temperature);
  return StableKey({ProviderName(provider), model, system, user, temp, template_version});
}

HttpCall OpenAIAdapter::Build(const GenRequest& req, const std::string& api_key) const {
  Json body;
  body["model"] = req.model;
  Json messages = Json::array();
  if (!req.system.empty()) messages.push_back({{"role", "system"}, {"content", req.system}});
  messages.push_back({{"role", "user"}, {"content", req.user}});
  body["messages"] = std::move(messages);
  body["temperature"] = req.temperature;
  body["max_completion_tokens"] = req.max_tokens;
  return HttpCall{"/v1/chat/completions",
                  {{"Authorization", "Bearer " + api_key}},
                  body.dump()};
}

Completion OpenAIAdapter::Parse(const std::string& body) const {
  const Json j = ParseBody(body);
  Completion c;
  try {
    c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception&) {
    throw ProviderError(0, false, "openai response lacks choices[0].message.content");
  }
  c.usage.input_tokens = UsageField(j.value("usage", Json::object()), "prompt_tokens");
  c.usage.output_tokens = UsageField(j.value("usage", Json::object()), "completion_tokens");
  return c;
}

HttpCall AnthropicAdapter::Build(const GenRequest& req, const std::string& api_key) const {
  Json body;
  body["model"] = req.model;
  if (!req.system.empty()) body["system"] = req.system;
  body["messages"] = Json::array({{{"role", "user"}, {"content", req.user}}});
  body["max_tokens"] = req.max_tokens;
  body["temperature"] = req.temperature;
  return HttpCall{"/v1/messages",
                  {{"x-api-key", api_key}, {"anthropic-version", "2023-06-01"}},
                  body.dump()};
}

Completion AnthropicAdapter::Parse(const std::string& body) const {
  const Json j = ParseBody(body);
  Completion c;
  const auto content = j.find("content");
  if (content == j.end() || !content->is_array()) {
    throw ProviderError(0, false, "anthropic response lacks content[]");
  }
  for (const auto& block : *content) {
    if (block.value("type", "") == "text") c.text += block.value("text", "");
  }
  c.usage.input_tokens = UsageField(j.value("usage", Json::object()), "input_tokens");
  c.usage.output_tokens = UsageField(j.value("usage", Json::object()), "output_tokens");
  return c;
}

HttpCall GoogleAdapter::Build(const GenRequest& req, const std::string& api_key) const {
  Json body;
  if (!req.system.empty()) {
    body["systemInstruction"] = {{"parts", Json::array({{{"text", req.system}}})}};
  }
  body["contents"] =
      Json::array({{{"role", "user"}, {"parts", Json::array({{{"text", req.user}}})}}});
  body["generationConfig"] = {{"temperature", req.temperature},
                              {"maxOutputTokens", req.max_tokens}};
  return HttpCall{"/v1beta/models/" + req.model + ":generateContent",
                  {{"x-goog-api-key", api_key}},
                  body.dump()};
}

Completion GoogleAdapter::Parse(const std::string& body) const {
  const Json j = ParseBody(body);
  Completion c;
  try {
    for (const auto& part : j.at("candidates").at(0).at("content").at("parts")) {
      c.text += part.value("text", "");
    }
  } catch (const Json::exception&) {
    throw ProviderError(0, false, "google response lacks candidates[0].content.parts");
  }
  const Json usage = j.value("usageMetadata", Json::object());
  c.usage.input_tokens = UsageField(usage, "promptTokenCount");
  c.usage.output_tokens = UsageField(usage, "candidatesTokenCount");
  return c;
}

std::unique_ptr<WireAdapter> MakeAdapter(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAI:
      return std::make_unique<OpenAIAdapter>();
    case ProviderKind::kAnthropic:
      return std::make_unique<AnthropicAdapter>();
    case ProviderKind::kGoogle:
      return std::make_unique<GoogleAdapter>();
    case ProviderKind::kMock:
      break;
  }
  throw UsageError("the mock provider has no wire adapter");
}

std::string EnvironmentCredential(const std::string& env_name) {
  const char* value = std::getenv(env_name.c_str());
  return value ? std::string(value) : std::string();
}

HttpChatProvider::HttpChatProvider(ProviderKind kind, std::string base_url,
                                   CredentialSource credentials, int timeout_seconds)
    : kind_(kind),
      base_url_(std::move(base_url)),
      credentials_(std::move(credentials)),
      timeout_seconds_(timeout_seconds),
      adapter_(MakeAdapter(kind)) {}

Completion HttpChatProvider::Send(const GenRequest& req) {
  const std::string env_name =
      req.key_ref.empty() ? std::string(DefaultKeyEnv(kind_)) : req.key_ref;
  const std::string key = credentials_(env_name);
  if (key.empty()) {
    throw AuthError(std::string(ProviderName(kind_)) + ": credential variable " + env_name +
                    " is not set");
  }
  const HttpCall call = adapter_->Build(req, key);
  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_seconds_);
  client.set_read_timeout(timeout_seconds_);
  httplib::Headers headers;
  for (const auto& [name, value] : call.headers) headers.emplace(name, value);
  auto res = client.Post(call.path, headers, call.body, "application/json");
  if (!res) {
    throw ProviderError(0, true, std::string(ProviderName(kind_)) + ": transport error: " +
                                     httplib::to_string(res.error()));
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    throw AuthError(std::string(ProviderName(kind_)) + ": authentication rejected (HTTP " +
                    std::to_string(status) + ")");
  }
  if (status == 429 || status >= 500) {
    throw ProviderError(status, true,
                        std::string(ProviderName(kind_)) + ": HTTP " + std::to_string(status));
  }
  if (status != 200) {
    throw ProviderError(status, false,
                        std::string(ProviderName(kind_)) + ": HTTP " + std::to_string(status));
  }
  return adapter_->Parse(res->body);
}

MockProvider::MockProvider()
    : responder_([](const GenRequest& req, int) { return Canned(req); }) {}

MockProvider::MockProvider(Responder responder) : responder_(std::move(responder)) {}

Completion MockProvider::Send(const GenRequest& req) {
  const int index = calls_.fetch_add(1);
  return responder_(req, index);
}

Completion MockProvider::Canned(const GenRequest& req) {
  const Json payload = ExtractFencedJson(req.user);
  Json answer;
  if (payload.is_object() && payload.contains("seed_text")) {
    const std::string seed = payload["seed_text"].get<std::string>();
    // Vary phrasing by model without ever echoing the model name.
    const uint64_t variant = StableKey64({req.model}) % 3;
    static constexpr const char* kLeads[] = {"Cad atá i gceist le", "Mínigh", "Déan cur síos ar"};
    answer["question"] = std::string(kLeads[variant]) + " \"" + FirstWords(seed, 6) + "\"?";
    answer["answer"] = "De réir an téacs: " + FirstWords(seed, 12 + variant * 4) + ".";
  } else if (payload.is_object() && payload.contains("instruction")) {
    for (const char* key : {"instruction", "context", "response"}) {
      const std::string v = payload.value(key, "");
      answer[key] = v.empty() ? std::string() : "[ga] " + v;
    }
  } else if (payload.is_object() && payload.contains("prompt")) {
    const std::string prompt = payload.value("prompt", "");
    const std::string response = payload.value("response", "");
    answer["prompt"] = "[ga] " + prompt;
    answer["response_1"] = "[ga] " + response;
    answer["response_2"] = Garble(response);
  } else {
    answer["text"] = "[ga] " + FirstWords(req.user, 20);
  }
  Completion c;
  c.text = Fence(answer);
  c.usage.input_tokens = WordCount(req.system) + WordCount(req.user);
  c.usage.output_tokens = WordCount(c.text);
  return c;
}

Json ExtractFencedJson(std::string_view text) {
  std::vector<std::size_t> fences;
  for (std::size_t at = text.find("```"); at != std::string_view::npos;
       at = text.find("```", at + 3)) {
    fences.push_back(at);
  }
  for (std::size_t k = fences.size() / 2; k-- > 0;) {
    const std::size_t open = fences[2 * k];
    const std::size_t close = fences[2 * k + 1];
    const std::size_t body = text.find('\n', open);
    if (body == std::string_view::npos || body > close) continue;
    const Json j = Json::parse(text.substr(body + 1, close - body - 1), nullptr, false);
    if (!j.is_discarded()) return j;
  }
  // No usable fence: accept a bare object.
  const auto first = text.find('{');
  const auto last = text.rfind('}');
  if (first != std::string_view::npos && last != std::string_view::npos && last > first) {
    const Json j = Json::parse(text.substr(first, last - first + 1), nullptr, false);
    if (!j.is_discarded()) return j;
  }
  return Json();
}

}  // namespace glor::synth
