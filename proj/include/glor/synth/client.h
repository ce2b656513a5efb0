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
#ifndef GLOR_SYNTH_CLIENT_H_
#define GLOR_SYNTH_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "glor/core/records.h"
#include "glor/synth/provider.h"

namespace glor::synth {

// Content-addressed response cache: <dir>/<key[0..1]>/<key>.json, written
// via temp file and rename so readers never see partial entries.
class ResponseCache {
 public:
  explicit ResponseCache(std::string dir);

  std::optional<Completion> Get(const std::string& key) const;
  void Put(const std::string& key, const GenRequest& req, const Completion& completion);

  const std::string& dir() const { return dir_; }

 private:
  std::string PathFor(const std::string& key) const;

  std::string dir_;
  std::mutex write_mu_;
};

struct Price {
  // Currency units per million tokens.
  double input_per_mtok = 0.0;
  double output_per_mtok = 0.0;
};

// {"model": {"input_per_mtok": x, "output_per_mtok": y}, ...}
class PriceTable {
 public:
  PriceTable() = default;
  explicit PriceTable(std::map<std::string, Price> prices) : prices_(std::move(prices)) {}
  static PriceTable Load(const std::string& path);

  // Unknown models cost zero.
  Price Lookup(const std::string& model) const;

 private:
  std::map<std::string, Price> prices_;
};

struct CostLedgerEntry {
  std::string request_key;
  std::string model;
  uint64_t input_tokens = 0;
  uint64_t output_tokens = 0;
  double input_price = 0.0;   // per token
  double output_price = 0.0;  // per token
  double total = 0.0;         // input * input_price + output * output_price

  Json ToJson() const;
};

// Thread-safe; optionally mirrored to a JSON-lines file.
class CostLedger {
 public:
  explicit CostLedger(PriceTable prices = {}, std::string path = {});

  CostLedgerEntry Record(const std::string& request_key, const std::string& model,
                         const Usage& usage);
  std::vector<CostLedgerEntry> entries() const;
  double Total() const;

 private:
  PriceTable prices_;
  std::string path_;
  mutable std::mutex mu_;
  std::vector<CostLedgerEntry> entries_;
};

// Token bucket. A rate of 0 disables limiting.
class RateLimiter {
 public:
  RateLimiter(double per_second, double burst);
  void Acquire();

 private:
  double rate_;
  double burst_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{30000};
  // Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Retries exhausted or a permanent provider error.
class RequestFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClientStats {
  uint64_t requests = 0;
  uint64_t cache_hits = 0;
  uint64_t network_calls = 0;
  uint64_t retries = 0;
  uint64_t failures = 0;

  Json ToJson() const;
};

// The neutral chat-completion entry point: cache lookup, rate limiting,
// bounded exponential backoff on transient errors, cost accounting.
// Safe for concurrent use.
class CompletionClient {
 public:
  CompletionClient(std::map<ProviderKind, std::shared_ptr<ChatProvider>> providers,
                   std::shared_ptr<ResponseCache> cache = nullptr,
                   std::shared_ptr<CostLedger> ledger = nullptr, RetryPolicy retry = {},
                   double requests_per_second = 0.0);

  // Throws AuthError when the provider's credential fails (and for every later
  // request to that provider), RequestFailed when attempts run out or the
  // error is permanent.
  Completion Complete(const GenRequest& req);

  ClientStats stats() const;

 private:
  ChatProvider& ProviderFor(ProviderKind kind);

  std::map<ProviderKind, std::shared_ptr<ChatProvider>> providers_;
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<CostLedger> ledger_;
  RetryPolicy retry_;
  std::map<ProviderKind, std::unique_ptr<RateLimiter>> limiters_;
  mutable std::mutex mu_;
  std::set<ProviderKind> dead_providers_;
  ClientStats stats_;
};

}  // namespace glor::synth

#endif  // GLOR_SYNTH_CLIENT_H_
