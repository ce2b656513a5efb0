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
#ifndef GLOR_SYNTH_PROVIDER_H_
#define GLOR_SYNTH_PROVIDER_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glor/core/records.h"

namespace glor::synth {

enum class ProviderKind { kOpenAI, kAnthropic, kGoogle, kMock };

std::string_view ProviderName(ProviderKind kind);
// Accepts openai, anthropic, google, mock (and the "-style" spellings).
ProviderKind ParseProvider(std::string_view name);

// Environment variable holding the provider's API key by default.
std::string_view DefaultKeyEnv(ProviderKind kind);
std::string_view DefaultBaseUrl(ProviderKind kind);

struct GenRequest {
  ProviderKind provider = ProviderKind::kMock;
  std::string model;
  std::string system;
  std::string user;
  double temperature = 0.0;
  int max_tokens = 2048;
  // Name of the environment variable with the credential; empty means the
  // provider default. Never the credential itself.
  std::string key_ref;
  // Hash of the prompt template files the request was rendered from.
  std::string template_version;

  // Throws UsageError on an empty model or temperature outside [0, 2].
  void Validate() const;
  // stable_key(provider, model, system, user, temperature, template_version).
  std::string CacheKey() const;
};

struct Usage {
  uint64_t input_tokens = 0;
  uint64_t output_tokens = 0;
};

struct Completion {
  std::string text;
  Usage usage;
  bool from_cache = false;
  int attempts = 0;
};

// A single failed provider call. transient() failures are retried.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(int status, bool transient, const std::string& msg)
      : std::runtime_error(msg), status_(status), transient_(transient) {}

  int status() const { return status_; }
  bool transient() const { return transient_; }

 private:
  int status_;
  bool transient_;
};

// Credential missing or rejected. Fatal for the provider.
class AuthError : public ProviderError {
 public:
  explicit AuthError(const std::string& msg) : ProviderError(401, false, msg) {}
};

// One attempt at a chat completion; no retries, caching or rate limiting.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual Completion Send(const GenRequest& req) = 0;
};

// Provider-specific request and response shapes.
struct HttpCall {
  std::string path;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
};

class WireAdapter {
 public:
  virtual ~WireAdapter() = default;
  virtual HttpCall Build(const GenRequest& req, const std::string& api_key) const = 0;
  // Throws ProviderError (non-transient) on an unexpected body.
  virtual Completion Parse(const std::string& body) const = 0;
};

// POST /v1/chat/completions
class OpenAIAdapter : public WireAdapter {
 public:
  HttpCall Build(const GenRequest& req, const std::string& api_key) const override;
  Completion Parse(const std::string& body) const override;
};

// POST /v1/messages
class AnthropicAdapter : public WireAdapter {
 public:
  HttpCall Build(const GenRequest& req, const std::string& api_key) const override;
  Completion Parse(const std::string& body) const override;
};

// POST /v1beta/models/{model}:generateContent
class GoogleAdapter : public WireAdapter {
 public:
  HttpCall Build(const GenRequest& req, const std::string& api_key) const override;
  Completion Parse(const std::string& body) const override;
};

std::unique_ptr<WireAdapter> MakeAdapter(ProviderKind kind);

// Resolves an environment variable name to a credential.
using CredentialSource = std::function<std::string(const std::string& env_name)>;
std::string EnvironmentCredential(const std::string& env_name);

// Plain HTTP(S) chat provider over one wire adapter.
class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(ProviderKind kind, std::string base_url,
                   CredentialSource credentials = EnvironmentCredential,
                   int timeout_seconds = 120);

  Completion Send(const GenRequest& req) override;

 private:
  ProviderKind kind_;
  std::string base_url_;
  CredentialSource credentials_;
  int timeout_seconds_;
  std::unique_ptr<WireAdapter> adapter_;
};

// Offline provider with deterministic canned responses. The default responder
// reads the last fenced json block of the user prompt and answers the job it
// describes (instruction generation, translation, preference synthesis).
class MockProvider : public ChatProvider {
 public:
  // call_index counts every Send on this provider, starting at 0.
  using Responder = std::function<Completion(const GenRequest&, int call_index)>;

  MockProvider();
  explicit MockProvider(Responder responder);

  Completion Send(const GenRequest& req) override;
  int calls() const { return calls_.load(); }

  static Completion Canned(const GenRequest& req);

 private:
  Responder responder_;
  std::atomic<int> calls_{0};
};

// Last ```json fenced block (or bare fenced block) in text, parsed.
// Returns a null Json when there is none or it fails to parse.
Json ExtractFencedJson(std::string_view text);

}  // namespace glor::synth

#endif  // GLOR_SYNTH_PROVIDER_H_
