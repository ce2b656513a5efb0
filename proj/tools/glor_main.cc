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

// glor: command-line entry point. Subcommands follow the pipeline stages:
// ingest, dedup, mix, synth, arena, serve, stats, eval.

#include <signal.h>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cli_support.h"
#include "glor/annostore/server.h"
#include "glor/annostore/store.h"
#include "glor/arena/arena.h"
#include "glor/core/errors.h"
#include "glor/core/manifest.h"
#include "glor/core/version.h"
#include "glor/dedup/containment.h"
#include "glor/mixer/mixer.h"
#include "glor/stats/agreement.h"
#include "glor/stats/bradley_terry.h"
#include "glor/stats/mann_whitney.h"
#include "glor/synth/client.h"
#include "glor/synth/jobs.h"
#include "glor/texteval/texteval.h"

namespace glor::cli {
namespace {

namespace fs = std::filesystem;

// Options whose values are input paths; their content keys go into the
// run-record.
const std::set<std::string> kInputFlags = {
    "--manifest", "--plan", "--in",   "--a",    "--b",          "--x",
    "--y",        "--hyp",  "--ref",  "--pred", "--gold",       "--seeds",
    "--prices",   "--prompts", "--generations", "--comparisons"};

struct Globals {
  uint64_t seed = 0;
  std::string log_level = "warn";
  CLI::Option* seed_option = nullptr;

  bool seed_given() const { return seed_option && seed_option->count() > 0; }
};

struct Command {
  CLI::App* app;
  std::vector<std::string> path;
  std::function<void(RunRecord&)> run;
};

void Print(const Json& j) { std::cout << j.dump(2) << "\n"; }

void EnsureParent(const std::string& file) {
  const fs::path parent = fs::path(file).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void RecordOptions(const CLI::App* sub, RunRecord& record) {
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name.empty()) continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      const std::string def = opt->get_default_str();
      if (!def.empty()) values.push_back(def);
    }
    record.SetOption(name, values.size() == 1 ? Json(values[0]) : Json(values));
    if (kInputFlags.count(name)) {
      for (const std::string& p : SplitCommaList(opt->results())) {
        if (fs::exists(p)) record.AddInput(p);
      }
    }
  }
}

void AddManifestSources(const std::string& manifest, RunRecord& record) {
  for (const ManifestSource& s : LoadManifestConfig(manifest)) record.AddInput(s.path);
}

// Writes the result and its run-record when --out was given; otherwise prints
// the result with the run-record embedded.
void Emit(const Json& result, const std::string& out, RunRecord& record) {
  if (out.empty()) {
    Json j = result;
    j["run"] = record.ToJson();
    Print(j);
    return;
  }
  EnsureParent(out);
  WriteJsonFile(out, result);
  record.WriteTo(RunRecordPathFor(out, false));
  Print(result);
}

// --- synth -----------------------------------------------------------------

struct SynthOptions {
  std::vector<std::string> models;
  std::string in;
  std::vector<std::string> seeds;
  std::string out;
  std::string cache;
  std::string prices;
  std::string costs;
  std::string prompts;
  std::string key_ref;
  std::string base_url;
  int n = 0;
  int workers = 4;
  double rps = 0.0;
  double temperature = -1.0;
  int max_tokens = 2048;
  int max_attempts = 4;
  int timeout = 120;
};

void AddSynthOptions(CLI::App* sub, SynthOptions& o, bool multi_model) {
  if (multi_model) {
    sub->add_option("--model", o.models,
                    "provider:model (openai, anthropic, google, mock); repeat or comma-separate")
        ->required();
  } else {
    sub->add_option("--model", o.models, "provider:model (openai, anthropic, google, mock)")
        ->required()
        ->expected(1);
  }
  sub->add_option("--out", o.out, "Output JSON-lines file")->required();
  sub->add_option("--cache", o.cache, "Response cache directory (default: <out dir>/cache)");
  sub->add_option("--prices", o.prices, "Price table JSON")->check(CLI::ExistingFile);
  sub->add_option("--costs", o.costs, "Cost ledger JSON-lines (default: <out>.costs.jsonl)");
  sub->add_option("--prompts", o.prompts, "Prompt template directory")
      ->check(CLI::ExistingDirectory);
  sub->add_option("--key-env", o.key_ref, "Environment variable holding the API key");
  sub->add_option("--base-url", o.base_url, "Override the provider endpoint");
  sub->add_option("--workers", o.workers, "Concurrent requests")->capture_default_str();
  sub->add_option("--rps", o.rps, "Requests per second per provider (0: unlimited)")
      ->capture_default_str();
  sub->add_option("--temperature", o.temperature, "Sampling temperature in [0, 2]")
      ->check(CLI::Range(0.0, 2.0));
  sub->add_option("--max-tokens", o.max_tokens)->capture_default_str();
  sub->add_option("--max-attempts", o.max_attempts)->capture_default_str();
  sub->add_option("--timeout", o.timeout, "HTTP timeout in seconds")->capture_default_str();
}

struct SynthContext {
  std::unique_ptr<synth::CompletionClient> client;
  synth::JobConfig config;
  std::vector<synth::ModelRef> models;
  std::shared_ptr<synth::CostLedger> ledger;
};

SynthContext MakeSynthContext(const SynthOptions& o, synth::JobKind kind) {
  SynthContext ctx;
  for (const std::string& m : SplitCommaList(o.models)) ctx.models.push_back(synth::ModelRef::Parse(m));
  if (ctx.models.empty()) throw UsageError("no model given");

  std::map<synth::ProviderKind, std::shared_ptr<synth::ChatProvider>> providers;
  for (const synth::ModelRef& m : ctx.models) {
    if (providers.count(m.provider)) continue;
    if (m.provider == synth::ProviderKind::kMock) {
      providers[m.provider] = std::make_shared<synth::MockProvider>();
    } else {
      const std::string url = o.base_url.empty() ? std::string(synth::DefaultBaseUrl(m.provider)) : o.base_url;
      providers[m.provider] = std::make_shared<synth::HttpChatProvider>(
          m.provider, url, synth::EnvironmentCredential, o.timeout);
    }
  }
  const std::string out_dir = fs::path(o.out).parent_path().string();
  const std::string cache_dir =
      o.cache.empty() ? (fs::path(out_dir.empty() ? "." : out_dir) / "cache").string() : o.cache;
  auto cache = std::make_shared<synth::ResponseCache>(cache_dir);
  ctx.ledger = std::make_shared<synth::CostLedger>(
      o.prices.empty() ? synth::PriceTable() : synth::PriceTable::Load(o.prices),
      o.costs.empty() ? o.out + ".costs.jsonl" : o.costs);
  synth::RetryPolicy retry;
  retry.max_attempts = o.max_attempts;
  ctx.client = std::make_unique<synth::CompletionClient>(std::move(providers), cache, ctx.ledger,
                                                         retry, o.rps);

  ctx.config.model = ctx.models.front();
  if (o.temperature >= 0) ctx.config.temperature = o.temperature;
  ctx.config.max_tokens = o.max_tokens;
  ctx.config.key_ref = o.key_ref;
  ctx.config.workers = o.workers;
  if (!o.prompts.empty()) ctx.config.prompt = synth::PromptTemplate::Load(o.prompts, kind);
  return ctx;
}

void WriteLog(const std::string& path, const std::vector<std::string>& lines) {
  JsonLinesWriter w(path);
  for (const std::string& l : lines) w.Write(Json{{"message", l}});
  w.Close();
}

Json FinishSynth(const SynthOptions& o, const SynthContext& ctx, const synth::JobReport& report,
                 RunRecord& record) {
  Json summary;
  summary["report"] = report.ToJson();
  summary["client"] = ctx.client->stats().ToJson();
  summary["cost_total"] = ctx.ledger->Total();
  WriteJsonFile(o.out + ".report.json", summary);
  record.WriteTo(RunRecordPathFor(o.out, false));
  if (report.shortfall() > 0) {
    Log(LogLevel::kWarn, "shortfall of " + std::to_string(report.shortfall()) + " of " +
                             std::to_string(report.input) + " records; see " + o.out +
                             ".report.json");
  }
  return summary;
}

// Groups seeds by pool in first-seen order; exactly two pools are required.
std::pair<std::vector<SeedText>, std::vector<SeedText>> TwoPools(
    const std::vector<std::string>& files) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<SeedText>> pools;
  for (const std::string& f : SplitCommaList(files)) {
    for (SeedText& s : LoadSeeds(f)) {
      if (!pools.count(s.pool)) order.push_back(s.pool);
      pools[s.pool].push_back(std::move(s));
    }
  }
  if (order.size() != 2) {
    throw UsageError("expected seeds from exactly two pools, found " +
                     std::to_string(order.size()));
  }
  return {std::move(pools[order[0]]), std::move(pools[order[1]])};
}

void Usage(const std::string& message) { throw UsageError(message); }

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"glor: bilingual Irish-English corpus, synthesis and evaluation toolkit", "glor"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  g.seed_option = app.add_option("--seed", g.seed, "Seed for every stochastic stage")
                      ->capture_default_str();
  app.add_option("--log-level", g.log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}))
      ->capture_default_str();

  std::vector<Command> commands;
  auto add = [&](CLI::App* sub, std::vector<std::string> path, std::function<void(RunRecord&)> run) {
    commands.push_back({sub, std::move(path), std::move(run)});
  };

  // ingest
  std::string ingest_manifest, ingest_out;
  {
    auto* sub = app.add_subcommand("ingest", "Count characters per manifest source");
    sub->add_option("--manifest", ingest_manifest, "Manifest config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", ingest_out, "Output manifest with counts and proportions")
        ->required();
    add(sub, {"ingest"}, [&](RunRecord& record) {
      AddManifestSources(ingest_manifest, record);
      const SourceManifest m = IngestManifest(ingest_manifest);
      EnsureParent(ingest_out);
      WriteJsonFile(ingest_out, m.ToJson());
      record.WriteTo(RunRecordPathFor(ingest_out, false));
      Print(m.ToJson());
    });
  }

  // dedup
  std::string dd_manifest, dd_out, dm_in, dm_out;
  std::vector<std::string> dm_sources;
  int dd_width = 5, dd_workers = 1;
  {
    auto* dedup = app.add_subcommand("dedup", "N-gram containment between sources");
    dedup->require_subcommand(1);
    auto* sh = dedup->add_subcommand("shingle", "Write one shingle set per source");
    sh->add_option("--manifest", dd_manifest)->required()->check(CLI::ExistingFile);
    sh->add_option("--width", dd_width, "Shingle width in tokens")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sh->add_option("--out", dd_out, "Output directory")->required();
    sh->add_option("--workers", dd_workers)->capture_default_str()->check(CLI::PositiveNumber);
    add(sh, {"dedup", "shingle"}, [&](RunRecord& record) {
      AddManifestSources(dd_manifest, record);
      const auto names = dedup::ShingleManifest(dd_manifest, dd_width, dd_out, dd_workers);
      record.WriteTo(RunRecordPathFor(dd_out, true));
      Print(Json{{"width", dd_width}, {"sources", names}, {"out", dd_out}});
    });

    auto* mx = dedup->add_subcommand("matrix", "Containment for every ordered source pair");
    mx->add_option("--in", dm_in, "Shingle directory")->required()->check(CLI::ExistingDirectory);
    mx->add_option("--out", dm_out, "Report JSON")->required();
    mx->add_option("--sources", dm_sources, "Restrict to these sources");
    add(mx, {"dedup", "matrix"}, [&](RunRecord& record) {
      const auto reports = dedup::ContainmentMatrix(dm_in, SplitCommaList(dm_sources));
      Json j;
      j["pairs"] = Json::array();
      for (const auto& r : reports) j["pairs"].push_back(r.ToJson());
      Emit(j, dm_out, record);
    });
  }

  // mix
  std::string mix_manifest, mix_plan, mix_out;
  int mix_workers = 0;
  {
    auto* sub = app.add_subcommand("mix", "Segment, shuffle, pack and split the corpus");
    sub->add_option("--manifest", mix_manifest)->required()->check(CLI::ExistingFile);
    sub->add_option("--plan", mix_plan, "Mix plan JSON (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", mix_out, "Output directory")->required();
    sub->add_option("--workers", mix_workers, "Tokenizer threads (overrides the plan)");
    add(sub, {"mix"}, [&](RunRecord& record) {
      mixer::MixPlan plan = mix_plan.empty() ? mixer::MixPlan() : mixer::MixPlan::Load(mix_plan);
      if (g.seed_given() || mix_plan.empty()) plan.seed = g.seed;
      if (mix_workers > 0) plan.workers = mix_workers;
      record.SetSeed(plan.seed);
      record.SetOption("plan", plan.ToJson());
      AddManifestSources(mix_manifest, record);
      if (!plan.tokenizer.vocab_path.empty()) record.AddInput(plan.tokenizer.vocab_path);
      const mixer::MixSummary s = mixer::RunMix(mix_manifest, plan, mix_out);
      record.WriteTo(RunRecordPathFor(mix_out, true));
      Print(Json{{"pack", s.pack.ToJson()}, {"split", s.split.ToJson()}});
    });
  }

  // synth
  SynthOptions gen, tr, pref;
  {
    auto* synth = app.add_subcommand("synth", "LLM-driven dataset synthesis");
    synth->require_subcommand(1);

    auto* g_sub = synth->add_subcommand("gen", "Question-answer pairs from seed texts");
    AddSynthOptions(g_sub, gen, true);
    g_sub->add_option("--seeds", gen.seeds, "Seed files (two pools)")->required();
    g_sub->add_option("--n", gen.n, "Pairs per model (even)")->required();
    add(g_sub, {"synth", "gen"}, [&](RunRecord& record) {
      auto ctx = MakeSynthContext(gen, synth::JobKind::kGenerate);
      auto [a, b] = TwoPools(gen.seeds);
      auto result = synth::GenerateInstructionPairs(*ctx.client, ctx.config, ctx.models, a, b,
                                                    gen.n, g.seed);
      EnsureParent(gen.out);
      WriteRecords(gen.out, result.pairs);
      WriteLog(gen.out + ".drops.jsonl", result.report.log);
      Print(FinishSynth(gen, ctx, result.report, record));
    });

    auto* t_sub = synth->add_subcommand("translate", "Translate instruction records into Irish");
    AddSynthOptions(t_sub, tr, false);
    t_sub->add_option("--in", tr.in, "InstructionRecord JSON-lines")
        ->required()
        ->check(CLI::ExistingFile);
    add(t_sub, {"synth", "translate"}, [&](RunRecord& record) {
      auto ctx = MakeSynthContext(tr, synth::JobKind::kTranslate);
      const auto input = synth::ReadSourcedInstructions(tr.in);
      auto result = synth::TranslateInstructionDataset(*ctx.client, ctx.config, input);
      EnsureParent(tr.out);
      WriteRecords(tr.out, result.records);
      JsonLinesWriter retry(tr.out + ".retry.jsonl");
      for (const auto& r : result.retries) retry.Write(synth::SourcedInstructionToJson(r));
      retry.Close();
      Print(FinishSynth(tr, ctx, result.report, record));
    });

    auto* p_sub = synth->add_subcommand("pref", "Accepted/rejected Irish preference pairs");
    AddSynthOptions(p_sub, pref, false);
    p_sub->add_option("--in", pref.in, "PromptResponse JSON-lines")
        ->required()
        ->check(CLI::ExistingFile);
    add(p_sub, {"synth", "pref"}, [&](RunRecord& record) {
      auto ctx = MakeSynthContext(pref, synth::JobKind::kPreference);
      const auto input = ReadRecords<PromptResponse>(pref.in);
      auto result = synth::GeneratePreferencePairs(*ctx.client, ctx.config, input);
      EnsureParent(pref.out);
      WriteRecords(pref.out, result.pairs);
      WriteRecords(pref.out + ".retry.jsonl", result.retries);
      Print(FinishSynth(pref, ctx, result.report, record));
    });
  }

  // arena
  std::vector<std::string> ab_models, ab_seeds;
  std::string ab_generations, ab_out, pv_in, pv_out;
  int ab_per_pair = 8, ab_judges = 1;
  std::size_t pv_sample = 0;
  {
    auto* arena = app.add_subcommand("arena", "Build anonymized pairwise comparisons");
    arena->require_subcommand(1);

    auto* b = arena->add_subcommand("build", "Model-vs-model comparisons over shared seeds");
    b->add_option("--models", ab_models, "Models to compare (default: all in --generations)");
    b->add_option("--per-pair", ab_per_pair, "Comparisons per model pair")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    b->add_option("--seeds", ab_seeds, "Seed files (two pools)")->required();
    b->add_option("--generations", ab_generations, "QAPair JSON-lines")
        ->required()
        ->check(CLI::ExistingFile);
    b->add_option("--judges", ab_judges, "Judges per comparison, for the annotation total")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    b->add_option("--out", ab_out, "Comparison JSON-lines")->required();
    add(b, {"arena", "build"}, [&](RunRecord& record) {
      const auto qa = ReadRecords<QAPair>(ab_generations);
      std::vector<std::string> models = SplitCommaList(ab_models);
      if (models.empty()) {
        std::set<std::string> all;
        for (const QAPair& p : qa) all.insert(p.model);
        models.assign(all.begin(), all.end());
      }
      auto [a, pool_b] = TwoPools(ab_seeds);
      const auto comparisons =
          arena::SchedulePairs(models, a, pool_b, qa, {ab_per_pair, g.seed});
      const auto leaks = arena::FindNameLeaks(comparisons, models);
      if (!leaks.empty()) throw ValidationError(0, "payload", "model name visible: " + leaks[0]);
      EnsureParent(ab_out);
      arena::WriteComparisons(ab_out, comparisons);
      record.WriteTo(RunRecordPathFor(ab_out, false));
      const std::size_t k = models.size();
      Print(Json{{"models", k},
                 {"pairs", k * (k - 1) / 2},
                 {"per_pair", ab_per_pair},
                 {"comparisons", comparisons.size()},
                 {"judges", ab_judges},
                 {"annotations", comparisons.size() * static_cast<std::size_t>(ab_judges)}});
    });

    auto* p = arena->add_subcommand("prefval", "Accepted-vs-rejected validation comparisons");
    p->add_option("--in", pv_in, "PreferencePair JSON-lines")->required()->check(CLI::ExistingFile);
    p->add_option("--sample", pv_sample, "Pairs to sample")->required();
    p->add_option("--out", pv_out, "Comparison JSON-lines")->required();
    add(p, {"arena", "prefval"}, [&](RunRecord& record) {
      const auto pairs = ReadRecords<PreferencePair>(pv_in);
      const auto comparisons = arena::BuildPreferenceValidation(pairs, pv_sample, g.seed);
      EnsureParent(pv_out);
      arena::WriteComparisons(pv_out, comparisons);
      record.WriteTo(RunRecordPathFor(pv_out, false));
      Print(Json{{"available", pairs.size()}, {"comparisons", comparisons.size()}});
    });
  }

  // serve
  std::string sv_comparisons, sv_ledger, sv_host = "127.0.0.1", sv_static;
  int sv_port = 8080;
  {
    auto* sub = app.add_subcommand("serve", "Run the annotation service");
    sub->add_option("--comparisons", sv_comparisons, "Comparison JSON-lines")
        ->required()
        ->envname("GLOR_COMPARISONS")
        ->check(CLI::ExistingFile);
    sub->add_option("--ledger", sv_ledger, "Annotation ledger (created if missing)")
        ->required()
        ->envname("GLOR_LEDGER");
    sub->add_option("--host", sv_host)->envname("GLOR_HOST")->capture_default_str();
    sub->add_option("--port", sv_port)->envname("GLOR_PORT")->capture_default_str();
    sub->add_option("--static", sv_static, "UI bundle served at /")->envname("GLOR_STATIC");
    add(sub, {"serve"}, [&](RunRecord&) {
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      annostore::Store store(arena::ReadComparisons(sv_comparisons), sv_ledger, g.seed);
      annostore::Server server(store, {sv_host, sv_port, sv_static});
      const int port = server.Bind();
      std::cerr << "serving " << store.size() << " comparisons on http://" << sv_host << ":"
                << port << "/\n";
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.Stop();
      });
      server.Run();
      // Run returned without a signal (e.g. a listen error): release the waiter.
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
    });
  }

  // stats
  std::string bt_in, bt_out, k_a, k_b, k_out, mw_x, mw_y, mw_alt = "greater", mw_out, mo_out;
  std::vector<std::string> mo_in;
  stats::BTOptions bt_opts;
  bool mw_lengths = false;
  {
    auto* st = app.add_subcommand("stats", "Ranking, agreement and rank tests");
    st->require_subcommand(1);

    auto* bt = st->add_subcommand("bt", "Bradley-Terry strengths and ranking");
    bt->add_option("--in", bt_in, "Win matrix JSON or an annotation export")
        ->required()
        ->check(CLI::ExistingFile);
    bt->add_option("--alpha", bt_opts.alpha, "Pseudo-wins per ordered pair")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    bt->add_option("--tol", bt_opts.tol)->capture_default_str();
    bt->add_option("--max-iter", bt_opts.max_iter)->capture_default_str();
    bt->add_option("--out", bt_out);
    add(bt, {"stats", "bt"}, [&](RunRecord& record) {
      Json j = ReadJsonFile(bt_in);
      if (j.contains("win_matrix")) j = j["win_matrix"];
      const auto result = stats::FitBradleyTerry(stats::WinMatrix::FromJson(j), bt_opts);
      Emit(result.ToJson(), bt_out, record);
    });

    auto* kp = st->add_subcommand("kappa", "Cohen's kappa between two raters");
    kp->add_option("--a", k_a, "Labels (one per line) or an annotation export (.json)")
        ->required()
        ->check(CLI::ExistingFile);
    kp->add_option("--b", k_b)->required()->check(CLI::ExistingFile);
    kp->add_option("--out", k_out);
    add(kp, {"stats", "kappa"}, [&](RunRecord& record) {
      std::vector<std::string> a, b;
      Json extra = Json::object();
      if (fs::path(k_a).extension() == ".json" && fs::path(k_b).extension() == ".json") {
        // Align two exports on comparison key; compare resolved choices.
        auto index = [](const std::string& path) {
          std::map<std::string, std::string> m;
          for (const auto& ann : ReadJsonFile(path).at("annotations")) {
            m[ann.at("comparison_key").get<std::string>()] =
                ann.at("resolved_choice").get<std::string>();
          }
          return m;
        };
        const auto ma = index(k_a);
        const auto mb = index(k_b);
        for (const auto& [key, label] : ma) {
          if (auto it = mb.find(key); it != mb.end()) {
            a.push_back(label);
            b.push_back(it->second);
          }
        }
        extra["unmatched_a"] = ma.size() - a.size();
        extra["unmatched_b"] = mb.size() - b.size();
      } else {
        a = LoadLabels(k_a);
        b = LoadLabels(k_b);
      }
      Json j = stats::CohenKappa(a, b).ToJson();
      j.update(extra);
      Emit(j, k_out, record);
    });

    auto* mw = st->add_subcommand("mwu", "Mann-Whitney U test");
    mw->add_option("--x", mw_x, "Sample 1: numbers, or texts with --lengths")
        ->required()
        ->check(CLI::ExistingFile);
    mw->add_option("--y", mw_y, "Sample 2")->required()->check(CLI::ExistingFile);
    mw->add_option("--alternative", mw_alt, "greater, less or two-sided")
        ->capture_default_str()
        ->check(CLI::IsMember({"greater", "less", "two-sided"}));
    mw->add_flag("--lengths", mw_lengths, "Compare word counts of texts");
    mw->add_option("--out", mw_out);
    add(mw, {"stats", "mwu"}, [&](RunRecord& record) {
      auto sample = [&](const std::string& path) {
        if (!mw_lengths) return LoadNumbers(path);
        const auto ls = texteval::ComputeLengthStats(texteval::LoadTexts(path));
        return std::vector<double>(ls.word_counts.begin(), ls.word_counts.end());
      };
      const auto x = sample(mw_x);
      const auto y = sample(mw_y);
      Emit(stats::MannWhitneyU(x, y, stats::ParseAlternative(mw_alt)).ToJson(), mw_out, record);
    });

    auto* mo = st->add_subcommand("mode", "Majority choice across an odd number of judges");
    mo->add_option("--in", mo_in, "One A/B label file per judge")
        ->required()
        ->check(CLI::ExistingFile);
    mo->add_option("--out", mo_out, "Write the aggregated labels, one per line");
    add(mo, {"stats", "mode"}, [&](RunRecord& record) {
      std::vector<std::vector<stats::Choice>> judges;
      for (const std::string& f : mo_in) {
        std::vector<stats::Choice> c;
        for (const std::string& l : LoadLabels(f)) c.push_back(stats::ParseChoice(l));
        judges.push_back(std::move(c));
      }
      const auto mode = stats::ModeAggregate(judges);
      Json j;
      j["judges"] = judges.size();
      j["items"] = mode.size();
      j["mode"] = Json::array();
      for (stats::Choice c : mode) j["mode"].push_back(stats::ChoiceName(c));
      if (!mo_out.empty()) {
        EnsureParent(mo_out);
        std::ofstream out(mo_out, std::ios::binary | std::ios::trunc);
        for (stats::Choice c : mode) out << stats::ChoiceName(c) << "\n";
        if (!out) throw IoError("cannot write " + mo_out);
        record.WriteTo(RunRecordPathFor(mo_out, false));
        Print(j);
      } else {
        Emit(j, "", record);
      }
    });
  }

  // eval
  std::string eb_hyp, eb_ref, eb_out, em_pred, em_gold, em_out, el_in, el_out;
  int eb_max_n = 4;
  uint64_t el_bin = 10;
  {
    auto* ev = app.add_subcommand("eval", "Text metrics");
    ev->require_subcommand(1);

    auto* bl = ev->add_subcommand("bleu", "Corpus BLEU");
    bl->add_option("--hyp", eb_hyp, "Hypotheses, one per line or .jsonl with \"text\"")
        ->required()
        ->check(CLI::ExistingFile);
    bl->add_option("--ref", eb_ref, "References, aligned with --hyp")
        ->required()
        ->check(CLI::ExistingFile);
    bl->add_option("--max-n", eb_max_n)->capture_default_str()->check(CLI::Range(1, 8));
    bl->add_option("--out", eb_out);
    add(bl, {"eval", "bleu"}, [&](RunRecord& record) {
      Emit(texteval::Bleu(texteval::LoadTexts(eb_hyp), texteval::LoadTexts(eb_ref), eb_max_n)
               .ToJson(),
           eb_out, record);
    });

    auto* em = ev->add_subcommand("em", "Exact match after answer normalization");
    em->add_option("--pred", em_pred)->required()->check(CLI::ExistingFile);
    em->add_option("--gold", em_gold)->required()->check(CLI::ExistingFile);
    em->add_option("--out", em_out);
    add(em, {"eval", "em"}, [&](RunRecord& record) {
      const auto p = texteval::LoadTexts(em_pred);
      const auto gold = texteval::LoadTexts(em_gold);
      Emit(Json{{"n", p.size()}, {"exact_match", texteval::ExactMatch(p, gold)}}, em_out, record);
    });

    auto* ln = ev->add_subcommand("lens", "Response word-count statistics and histogram");
    ln->add_option("--in", el_in)->required()->check(CLI::ExistingFile);
    ln->add_option("--out", el_out, "Statistics JSON")->required();
    ln->add_option("--bin-width", el_bin)->capture_default_str()->check(CLI::PositiveNumber);
    add(ln, {"eval", "lens"}, [&](RunRecord& record) {
      Emit(texteval::ComputeLengthStats(texteval::LoadTexts(el_in), el_bin).ToJson(), el_out,
           record);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  SetLogLevel(ParseLogLevel(g.log_level));

  for (Command& c : commands) {
    if (!c.app->parsed()) continue;
    RunRecord record(c.path);
    record.SetSeed(g.seed);
    RecordOptions(c.app, record);
    c.run(record);
    return 0;
  }
  Usage("no command given");
  return 2;
}

}  // namespace glor::cli

namespace {

int ReportError(const char* kind, const std::exception& e, int code) {
  glor::Json j;
  j["error"] = {{"kind", kind}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return glor::cli::Main(argc, argv);
  } catch (const glor::UsageError& e) {
    return ReportError("usage", e, 2);
  } catch (const glor::ValidationError& e) {
    return ReportError("validation", e, 1);
  } catch (const glor::NotFoundError& e) {
    return ReportError("not_found", e, 1);
  } catch (const glor::ConflictError& e) {
    return ReportError("conflict", e, 1);
  } catch (const glor::DegenerateError& e) {
    return ReportError("degenerate", e, 1);
  } catch (const glor::IoError& e) {
    return ReportError("io", e, 1);
  } catch (const std::exception& e) {
    return ReportError("runtime", e, 1);
  }
}
