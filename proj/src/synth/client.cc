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
#include "glor/synth/client.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <thread>

#include "glor/core/errors.h"

namespace glor::synth {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(std::string dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

std::string ResponseCache::PathFor(const std::string& key) const {
  return (fs::path(dir_) / key.substr(0, 2) / (key + ".json")).string();
}

std::optional<Completion> ResponseCache::Get(const std::string& key) const {
  const std::string path = PathFor(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  Completion c;
  c.text = j.value("text", "");
  c.usage.input_tokens = j.value("input_tokens", uint64_t{0});
  c.usage.output_tokens = j.value("output_tokens", uint64_t{0});
  c.from_cache = true;
  return c;
}

void ResponseCache::Put(const std::string& key, const GenRequest& req,
                        const Completion& completion) {
  // Request metadata only; the credential never reaches the cache.
  Json j;
  j["key"] = key;
  j["provider"] = ProviderName(req.provider);
  j["model"] = req.model;
  j["temperature"] = req.temperature;
  j["template_version"] = req.template_version;
  j["text"] = completion.text;
  j["input_tokens"] = completion.usage.input_tokens;
  j["output_tokens"] = completion.usage.output_tokens;
  std::lock_guard<std::mutex> lock(write_mu_);
  const fs::path path = PathFor(key);
  fs::create_directories(path.parent_path());
  WriteJsonFile(path.string(), j);
}

PriceTable PriceTable::Load(const std::string& path) {
  const Json j = ReadJsonFile(path);
  std::map<std::string, Price> prices;
  for (const auto& [model, row] : j.items()) {
    Price p;
    p.input_per_mtok = field::Number(row, "input_per_mtok", 0, model);
    p.output_per_mtok = field::Number(row, "output_per_mtok", 0, model);
    prices.emplace(model, p);
  }
  return PriceTable(std::move(prices));
}

Price PriceTable::Lookup(const std::string& model) const {
  auto it = prices_.find(model);
  return it == prices_.end() ? Price{} : it->second;
}

Json CostLedgerEntry::ToJson() const {
  Json j;
  j["request_key"] = request_key;
  j["model"] = model;
  j["input_tokens"] = input_tokens;
  j["output_tokens"] = output_tokens;
  j["input_price"] = input_price;
  j["output_price"] = output_price;
  j["total"] = total;
  return j;
}

CostLedger::CostLedger(PriceTable prices, std::string path)
    : prices_(std::move(prices)), path_(std::move(path)) {}

CostLedgerEntry CostLedger::Record(const std::string& request_key, const std::string& model,
                                   const Usage& usage) {
  const Price price = prices_.Lookup(model);
  CostLedgerEntry e;
  e.request_key = request_key;
  e.model = model;
  e.input_tokens = usage.input_tokens;
  e.output_tokens = usage.output_tokens;
  e.input_price = price.input_per_mtok / 1e6;
  e.output_price = price.output_per_mtok / 1e6;
  e.total = static_cast<double>(e.input_tokens) * e.input_price +
            static_cast<double>(e.output_tokens) * e.output_price;
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back(e);
  if (!path_.empty()) {
    JsonLinesWriter out(path_, /*append=*/true);
    out.Write(e.ToJson());
    out.Close();
  }
  return e;
}

std::vector<CostLedgerEntry> CostLedger::entries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

double CostLedger::Total() const {
  std::lock_guard<std::mutex> lock(mu_);
  double total = 0.0;
  for (const auto& e : entries_) total += e.total;
  return total;
}

RateLimiter::RateLimiter(double per_second, double burst)
    : rate_(per_second),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::Acquire() {
  if (rate_ <= 0.0) return;
  for (;;) {
    std::chrono::duration<double> wait{0.0};
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      tokens_ = std::min(burst_,
                         tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
      last_ = now;
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

Json ClientStats::ToJson() const {
  Json j;
  j["requests"] = requests;
  j["cache_hits"] = cache_hits;
  j["network_calls"] = network_calls;
  j["retries"] = retries;
  j["failures"] = failures;
  return j;
}

CompletionClient::CompletionClient(std::map<ProviderKind, std::shared_ptr<ChatProvider>> providers,
                                   std::shared_ptr<ResponseCache> cache,
                                   std::shared_ptr<CostLedger> ledger, RetryPolicy retry,
                                   double requests_per_second)
    : providers_(std::move(providers)),
      cache_(std::move(cache)),
      ledger_(std::move(ledger)),
      retry_(std::move(retry)) {
  if (retry_.max_attempts < 1) throw UsageError("max_attempts must be >= 1");
  if (!retry_.sleep) {
    retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  for (const auto& [kind, provider] : providers_) {
    limiters_[kind] = std::make_unique<RateLimiter>(requests_per_second, requests_per_second);
  }
}

ChatProvider& CompletionClient::ProviderFor(ProviderKind kind) {
  auto it = providers_.find(kind);
  if (it == providers_.end() || !it->second) {
    throw UsageError("no provider configured for " + std::string(ProviderName(kind)));
  }
  return *it->second;
}

Completion CompletionClient::Complete(const GenRequest& req) {
  req.Validate();
  const std::string key = req.CacheKey();
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.requests;
  }
  if (cache_) {
    if (auto hit = cache_->Get(key)) {
      std::lock_guard<std::mutex> lock(mu_);
      ++stats_.cache_hits;
      return *hit;
    }
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (dead_providers_.count(req.provider)) {
      ++stats_.failures;
      throw AuthError(std::string(ProviderName(req.provider)) +
                      ": disabled after an authentication failure");
    }
  }
  ChatProvider& provider = ProviderFor(req.provider);
  std::chrono::milliseconds delay = retry_.base_delay;
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    limiters_.at(req.provider)->Acquire();
    try {
      {
        std::lock_guard<std::mutex> lock(mu_);
        ++stats_.network_calls;
      }
      Completion c = provider.Send(req);
      c.attempts = attempt;
      c.from_cache = false;
      if (ledger_) ledger_->Record(key, req.model, c.usage);
      if (cache_) cache_->Put(key, req, c);
      return c;
    } catch (const AuthError&) {
      std::lock_guard<std::mutex> lock(mu_);
      dead_providers_.insert(req.provider);
      ++stats_.failures;
      throw;
    } catch (const ProviderError& e) {
      last_error = e.what();
      if (!e.transient()) break;
      if (attempt == retry_.max_attempts) break;
      {
        std::lock_guard<std::mutex> lock(mu_);
        ++stats_.retries;
      }
      retry_.sleep(delay);
      delay = std::min(retry_.max_delay,
                       std::chrono::milliseconds(static_cast<int64_t>(
                           static_cast<double>(delay.count()) * retry_.multiplier)));
    }
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.failures;
  }
  throw RequestFailed("request " + key + " failed: " + last_error);
}

ClientStats CompletionClient::stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  return stats_;
}

}  // namespace glor::synth
