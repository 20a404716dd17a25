#include "codeprompt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include "codeprompt/corpus.hpp"
#include "codeprompt/util.hpp"

namespace codeprompt::runner {

using nlohmann::json;

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

// Exclusive ownership of a run directory for the duration of the run.
class DirLock {
 public:
  explicit DirLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
    std::filesystem::create_directories(dir);
    if (std::filesystem::exists(path_)) {
      throw Error("run directory is locked (" + path_.string() +
                  " exists); another run owns it or crashed, remove the lock to proceed");
    }
    util::write_file_atomic(path_, "locked\n");
  }
  ~DirLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }

 private:
  std::filesystem::path path_;
};

chain::ChainConfig make_chain_config(const config::ExperimentConfig& cfg, RunContext& ctx,
                                     const std::string& dataset, std::uint64_t seed,
                                     const std::vector<Instance>& train_pool) {
  chain::ChainConfig chain_cfg;
  chain_cfg.model_id = cfg.model_id;
  chain_cfg.templates = &ctx.templates;
  chain_cfg.completer = ctx.completer.get();
  chain_cfg.scope = dataset;
  chain_cfg.seed = seed;
  chain_cfg.strict_dialect = cfg.strict_dialect;
  chain_cfg.context_token_limit = cfg.context_token_limit;
  chain_cfg.decoding_translate = {cfg.temperature, cfg.max_tokens_translate, {}};
  chain_cfg.decoding_answer = {cfg.temperature, cfg.max_tokens_answer, {}};
  chain_cfg.decoding_probe = {cfg.temperature, cfg.max_tokens_probe, {}};

  chain_cfg.answer_demos = corpus::sample_demonstrations(train_pool, seed, cfg.n_per_class);
  for (const auto& demo : chain_cfg.answer_demos) {
    chain_cfg.code_demos.push_back({demo, load_demo_code(cfg.demos_dir, dataset, demo.id)});
  }
  chain_cfg.translation_demos =
      load_translation_demos(cfg.demos_dir, dataset, cfg.translation_demos_for(dataset));
  return chain_cfg;
}

void attach_ablation_demos(const config::ExperimentConfig& cfg, chain::ChainConfig* chain_cfg,
                           prompts::PromptKind kind) {
  if (kind == prompts::PromptKind::BackTranslatedCode) {
    chain_cfg->back_translation_demos = load_back_translation_demos(cfg.demos_dir);
  }
  if (kind == prompts::PromptKind::AtomicStatements) {
    chain_cfg->atomic_demos = load_atomic_demos(cfg.demos_dir);
  }
}

std::vector<chain::Transcript> run_cell(const config::ExperimentConfig& cfg,
                                        const chain::ChainConfig& chain_cfg,
                                        const std::vector<Instance>& instances,
                                        prompts::PromptKind kind) {
  std::vector<chain::Transcript> transcripts(instances.size());
  if (cfg.threads <= 1 || instances.size() < 2) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      transcripts[i] = chain::run_chain(instances[i], chain_cfg, kind);
    }
    return transcripts;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  int n_workers = std::min<int>(cfg.threads, int(instances.size()));
  std::atomic<bool> fixture_miss{false};
  std::string fixture_miss_what;
  std::mutex miss_mutex;
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= instances.size() || fixture_miss.load()) return;
        try {
          transcripts[i] = chain::run_chain(instances[i], chain_cfg, kind);
        } catch (const FixtureMissingError& e) {
          std::lock_guard<std::mutex> lock(miss_mutex);
          fixture_miss = true;
          fixture_miss_what = e.what();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (fixture_miss) throw FixtureMissingError(fixture_miss_what);
  return transcripts;
}

std::string cell_stem(const std::string& dataset, prompts::PromptKind kind, std::uint64_t seed) {
  return dataset + "__" + sanitize(prompts::to_string(kind)) + "__seed" + std::to_string(seed);
}

json report_to_json(const eval::EvalReport& report) {
  json j;
  j["model_id"] = report.model_id;
  j["dataset"] = to_string(report.dataset);
  j["kind"] = prompts::to_string(report.kind);
  j["seed"] = report.seed;
  j["headline"] = report.headline;
  j["cost_total"] = report.cost_total;
  int scored = int(report.per_instance.size()) - report.skipped;
  j["cost_per_instance"] = scored > 0 ? report.cost_total / double(scored) : 0.0;
  j["failed"] = report.failed;
  j["skipped"] = report.skipped;
  json per = json::array();
  for (const auto& s : report.per_instance) {
    per.push_back({{"id", s.instance_id},
                   {"status", s.status},
                   {"score", s.score},
                   {"correct", s.correct},
                   {"predicted", to_string(s.predicted)},
                   {"gold", to_string(s.gold)},
                   {"extraction", s.extraction_method}});
  }
  j["per_instance"] = per;
  return j;
}

std::string report_csv(const eval::EvalReport& report) {
  std::ostringstream out;
  out << "id,status,score,correct,predicted,gold,extraction\n";
  for (const auto& s : report.per_instance) {
    out << s.instance_id << "," << s.status << "," << util::canonical_double(s.score) << ","
        << (s.correct ? 1 : 0) << "," << to_string(s.predicted) << "," << to_string(s.gold) << ","
        << s.extraction_method << "\n";
  }
  return out.str();
}

double cell_cost(const std::vector<chain::Transcript>& transcripts,
                 const std::optional<llm::PriceTable>& prices) {
  if (!prices) return 0.0;
  std::vector<llm::LlmExchange> exchanges;
  for (const auto& t : transcripts) {
    exchanges.insert(exchanges.end(), t.exchanges.begin(), t.exchanges.end());
  }
  return llm::estimate_cost(exchanges, *prices);
}

}  // namespace

RunContext RunContext::create(const config::ExperimentConfig& cfg) {
  RunContext ctx{prompts::TemplateSet::load(cfg.templates_dir), nullptr, nullptr, nullptr,
                 std::nullopt};
  if (!cfg.prices_path.empty()) ctx.prices = llm::PriceTable::load(cfg.prices_path);

  if (cfg.backend == "replay") {
    ctx.store = std::make_shared<llm::CacheStore>(cfg.replay_dir);
    ctx.completer = std::make_unique<llm::Completer>(nullptr, llm::Policy::ReplayOnly, ctx.store);
    return ctx;
  }
  if (cfg.backend == "stub") {
    ctx.backend = llm::StubBackend::load(cfg.stub_script);
  } else {
    llm::EndpointOptions options;
    options.base_url = cfg.endpoint_base_url;
    options.path = cfg.endpoint_path;
    options.max_retries = cfg.max_retries;
    options.max_in_flight = cfg.max_in_flight;
    options.requests_per_minute = cfg.requests_per_minute;
    if (const char* credential = std::getenv(cfg.credential_env.c_str())) {
      options.credential = credential;
    }
    ctx.backend = std::make_shared<llm::LiveBackend>(
        llm::make_httplib_transport(cfg.endpoint_base_url), options);
  }
  ctx.store = std::make_shared<llm::CacheStore>(cfg.cache_dir);
  ctx.completer = std::make_unique<llm::Completer>(ctx.backend, llm::Policy::CacheFirst, ctx.store);
  return ctx;
}

std::vector<prompts::TranslationDemo> load_translation_demos(const std::filesystem::path& demos_dir,
                                                             const std::string& dataset,
                                                             int count) {
  std::filesystem::path path = demos_dir / dataset / "translation.jsonl";
  std::vector<prompts::TranslationDemo> demos;
  for (const auto& line : util::split_lines(util::read_file(path))) {
    if (util::trim(line).empty()) continue;
    json j = json::parse(line);
    demos.push_back({j.at("source").get<std::string>(), j.at("code").get<std::string>()});
  }
  if (int(demos.size()) < count) {
    throw Error("demos: " + path.string() + " has " + std::to_string(demos.size()) +
                " demonstrations, config asks for " + std::to_string(count));
  }
  demos.resize(std::size_t(count));
  return demos;
}

std::vector<prompts::BackTranslationDemo> load_back_translation_demos(
    const std::filesystem::path& demos_dir) {
  std::filesystem::path path = demos_dir / "backtranslation.jsonl";
  std::vector<prompts::BackTranslationDemo> demos;
  for (const auto& line : util::split_lines(util::read_file(path))) {
    if (util::trim(line).empty()) continue;
    json j = json::parse(line);
    demos.push_back({j.at("code").get<std::string>(), j.at("text").get<std::string>()});
  }
  return demos;
}

std::vector<std::pair<std::string, std::string>> load_atomic_demos(
    const std::filesystem::path& demos_dir) {
  std::filesystem::path path = demos_dir / "atomic.jsonl";
  std::vector<std::pair<std::string, std::string>> demos;
  for (const auto& line : util::split_lines(util::read_file(path))) {
    if (util::trim(line).empty()) continue;
    json j = json::parse(line);
    demos.emplace_back(j.at("sentence").get<std::string>(), j.at("statements").get<std::string>());
  }
  return demos;
}

std::string load_demo_code(const std::filesystem::path& demos_dir, const std::string& dataset,
                           const std::string& instance_id) {
  std::filesystem::path path = demos_dir / dataset / "code" / (sanitize(instance_id) + ".txt");
  auto content = util::read_file_if_exists(path);
  if (!content) {
    throw Error("demos: no code file for demonstration instance " + instance_id + " (" +
                path.string() + ")");
  }
  std::string code = *content;
  while (!code.empty() && (code.back() == '\n' || code.back() == '\r')) code.pop_back();
  return code;
}

json transcript_to_json(const chain::Transcript& t) {
  json j;
  j["schema_version"] = 1;
  j["instance_id"] = t.instance_id;
  j["kind"] = prompts::to_string(t.kind);
  j["status"] = chain::to_string(t.status);
  j["note"] = t.note;
  j["cot_text"] = t.cot_text;
  j["cot_steps"] = t.cot_steps;
  j["raw_answer_text"] = t.raw_answer_text;
  j["generated_code"] = t.generated_code_text;
  json exchanges = json::array();
  for (const auto& e : t.exchanges) {
    exchanges.push_back({{"key", e.key},
                         {"source", llm::to_string(e.source)},
                         {"prompt_tokens", e.prompt_tokens},
                         {"completion_tokens", e.completion_tokens},
                         {"response", e.response_text},
                         {"latency_ms", e.source == llm::Source::Live ? e.latency_ms : 0},
                         {"timestamp", e.timestamp}});
  }
  j["exchanges"] = exchanges;
  return j;
}

json probe_result_to_json(const chain::ProbeResult& r) {
  return json{{"schema_version", 1},
              {"instance_id", r.instance_id},
              {"step_index", r.step_index},
              {"target", r.target},
              {"expected", r.expected},
              {"reply_raw", r.reply_raw},
              {"reply_norm", r.reply_norm},
              {"is_error", r.is_error}};
}

config::RunManifest run_experiment(const config::ExperimentConfig& cfg) {
  auto started = std::chrono::steady_clock::now();
  cfg.validate();
  RunContext ctx = RunContext::create(cfg);

  std::string config_hash = cfg.hash();
  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) /
      (cfg.run_id.empty() ? "run-" + config_hash.substr(0, 12) : cfg.run_id);
  DirLock lock(run_dir);
  std::filesystem::create_directories(run_dir / "transcripts");
  std::filesystem::create_directories(run_dir / "reports");

  config::RunManifest manifest;
  manifest.model_id = cfg.model_id;
  manifest.config_hash = config_hash;
  manifest.template_set_hash = ctx.templates.set_hash();
  manifest.template_hashes = ctx.templates.hashes();
  manifest.fixture_digest = ctx.store ? ctx.store->digest() : "";

  std::vector<eval::EvalReport> reports;

  for (const auto& dataset_name : cfg.run_datasets) {
    DatasetKind dataset = *dataset_from_string(dataset_name);
    std::vector<Instance> instances = corpus::load_dataset(dataset, cfg.split_path(dataset_name));
    if (cfg.limit > 0 && int(instances.size()) > cfg.limit) {
      instances.resize(std::size_t(cfg.limit));
    }
    std::vector<Instance> train_pool;
    if (!cfg.paths_for(dataset_name).train.empty()) {
      train_pool = corpus::load_dataset(dataset, cfg.paths_for(dataset_name).train);
    }

    for (const auto& kind_name : cfg.kinds) {
      prompts::PromptKind kind = *prompts::prompt_kind_from_string(kind_name);
      for (std::uint64_t seed : cfg.seeds) {
        chain::ChainConfig chain_cfg = make_chain_config(cfg, ctx, dataset_name, seed, train_pool);
        attach_ablation_demos(cfg, &chain_cfg, kind);
        chain_cfg.donor_pool = &chain_cfg.translation_demos;

        std::vector<chain::Transcript> transcripts = run_cell(cfg, chain_cfg, instances, kind);

        std::string stem = cell_stem(dataset_name, kind, seed);
        std::string transcript_lines;
        for (const auto& t : transcripts) {
          transcript_lines += transcript_to_json(t).dump();
          transcript_lines += '\n';
        }
        util::write_file_atomic(run_dir / "transcripts" / (stem + ".jsonl"), transcript_lines);

        eval::EvalReport report =
            eval::build_report(cfg.model_id, dataset, kind, seed, instances, transcripts);
        report.cost_total = cell_cost(transcripts, ctx.prices);
        util::write_file_atomic(run_dir / "reports" / (stem + ".json"),
                                report_to_json(report).dump(2) + "\n");
        util::write_file_atomic(run_dir / "reports" / (stem + ".csv"), report_csv(report));
        if (report.confusion) {
          util::write_file_atomic(run_dir / "reports" / (stem + "_confusion.csv"),
                                  eval::confusion_csv(*report.confusion));
        }

        for (std::size_t i = 0; i < instances.size(); ++i) {
          const auto& score = report.per_instance[i];
          manifest.instances.push_back({score.instance_id, dataset_name,
                                        prompts::to_string(kind), seed, score.status,
                                        transcripts[i].note, score.score, score.correct});
        }
        int scored = int(instances.size()) - report.skipped;
        manifest.reports.push_back({dataset_name, prompts::to_string(kind), seed, report.headline,
                                    report.cost_total, report.failed, report.skipped, scored});
        manifest.total_cost += report.cost_total;
        reports.push_back(std::move(report));
      }
    }
  }

  if (!reports.empty()) {
    eval::Summary summary = eval::aggregate_runs(reports);
    std::ostringstream text;
    json summary_json;
    for (const auto& [model, datasets] : summary.cells) {
      text << "model " << model << "\n";
      for (const auto& [ds, kinds] : datasets) {
        for (const auto& [kind, cell] : kinds) {
          text << "  " << ds << " " << kind << ": " << util::canonical_double(cell.mean);
          if (cell.runs > 1) text << " +/- " << util::canonical_double(cell.stddev);
          text << " (" << cell.runs << " runs)\n";
          summary_json["cells"][model][ds][kind] = {
              {"mean", cell.mean}, {"stddev", cell.stddev}, {"runs", cell.runs}};
        }
      }
      auto it = summary.delta_cp.find(model);
      if (it != summary.delta_cp.end()) {
        text << "  delta_cp: " << util::canonical_double(it->second) << "\n";
        summary_json["delta_cp"][model] = it->second;
      }
    }
    util::write_file_atomic(run_dir / "reports" / "summary.txt", text.str());
    util::write_file_atomic(run_dir / "reports" / "summary.json", summary_json.dump(2) + "\n");
  }

  // Replay artifacts must be reproducible byte for byte; wall clock is the
  // only nondeterministic field, so it is pinned to zero there.
  manifest.wall_clock_ms = cfg.backend == "replay"
                               ? 0
                               : std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
  manifest.manifest_hash = manifest.compute_hash();
  util::write_file_atomic(run_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return manifest;
}

ProbeSuiteResult run_probe_suite(const config::ExperimentConfig& cfg) {
  cfg.validate();
  RunContext ctx = RunContext::create(cfg);
  std::string config_hash = cfg.hash();
  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) /
      (cfg.run_id.empty() ? "probe-" + config_hash.substr(0, 12) : cfg.run_id);
  DirLock lock(run_dir);
  std::filesystem::create_directories(run_dir / "probes");

  ProbeSuiteResult suite;
  std::uint64_t seed = cfg.seeds.front();

  for (const auto& dataset_name : cfg.run_datasets) {
    DatasetKind dataset = *dataset_from_string(dataset_name);
    if (dataset == DatasetKind::ShARC) continue;  // probes are defined for BGQA and CondQA

    std::vector<Instance> instances = corpus::load_dataset(dataset, cfg.split_path(dataset_name));
    if (cfg.limit > 0 && int(instances.size()) > cfg.limit) instances.resize(std::size_t(cfg.limit));
    std::vector<Instance> train_pool;
    if (!cfg.paths_for(dataset_name).train.empty()) {
      train_pool = corpus::load_dataset(dataset, cfg.paths_for(dataset_name).train);
    }

    int per_partition = dataset == DatasetKind::CondQA ? cfg.probes.condqa_instances
                        : dataset == DatasetKind::BGQA3 ? cfg.probes.bgqa3_instances
                                                        : cfg.probes.bgqa_instances;
    chain::ProbeBudget budget;
    if (dataset == DatasetKind::CondQA) {
      budget.max_entities = cfg.probes.condqa_max_entities;
      budget.max_steps = cfg.probes.condqa_max_steps;
    }

    for (prompts::PromptKind kind : {prompts::PromptKind::Text, prompts::PromptKind::CodeAnswer}) {
      chain::ChainConfig chain_cfg = make_chain_config(cfg, ctx, dataset_name, seed, train_pool);
      chain_cfg.atomic_demos = load_atomic_demos(cfg.demos_dir);
      chain_cfg.donor_pool = &chain_cfg.translation_demos;

      std::vector<chain::Transcript> transcripts = run_cell(cfg, chain_cfg, instances, kind);

      // Partition by final-answer correctness, then probe up to the
      // per-partition instance budget in dataset order.
      ProbeCell cell;
      cell.dataset = dataset_name;
      cell.kind = kind == prompts::PromptKind::Text ? "text" : "code";
      prompts::ProbeMode mode = kind == prompts::PromptKind::Text ? prompts::ProbeMode::TextProbe
                                                                  : prompts::ProbeMode::CodeProbe;
      std::string lines;
      for (bool correct_partition : {true, false}) {
        ProbePartition& partition = correct_partition ? cell.correct : cell.incorrect;
        std::map<std::string, bool> correctness;
        std::vector<chain::ProbeResult> partition_results;
        for (std::size_t i = 0; i < instances.size(); ++i) {
          if (partition.instances >= per_partition) break;
          if (transcripts[i].status != chain::RunStatus::Ok) continue;
          eval::Prediction prediction = eval::extract_answer(transcripts[i], instances[i]);
          bool correct = eval::is_correct(instances[i], prediction, cfg.span_correct_threshold);
          if (correct != correct_partition) continue;
          chain::ProbeSession session =
              chain::run_probe_session(instances[i], transcripts[i], mode, budget, chain_cfg);
          if (session.results.empty()) continue;
          ++partition.instances;
          correctness[instances[i].id] = correct;
          for (const auto& r : session.results) {
            ++partition.probes;
            if (r.is_error) ++partition.errors;
            lines += probe_result_to_json(r).dump();
            lines += '\n';
            partition_results.push_back(r);
            suite.all_results.push_back(r);
          }
        }
        partition.error_rate =
            eval::memory_error_rate(partition_results, correctness, correct_partition);
      }
      util::write_file_atomic(
          run_dir / "probes" / (dataset_name + "__" + cell.kind + ".jsonl"), lines);
      suite.cells.push_back(std::move(cell));
    }
  }

  // Memory-error grid: dataset rows, text/code x correct/incorrect columns.
  json summary = json::array();
  std::ostringstream grid;
  grid << "dataset    text.correct   code.correct text.incorrect code.incorrect\n";
  std::set<std::string> seen;
  for (const auto& cell : suite.cells) seen.insert(cell.dataset);
  auto find_cell = [&](const std::string& ds, const std::string& kind) -> const ProbeCell* {
    for (const auto& cell : suite.cells) {
      if (cell.dataset == ds && cell.kind == kind) return &cell;
    }
    return nullptr;
  };
  auto fmt = [](const ProbePartition& p) {
    return p.error_rate ? util::canonical_double(*p.error_rate) : std::string("absent");
  };
  for (const auto& ds : seen) {
    const ProbeCell* text_cell = find_cell(ds, "text");
    const ProbeCell* code_cell = find_cell(ds, "code");
    grid << ds;
    for (std::size_t pad = ds.size(); pad < 10; ++pad) grid << ' ';
    for (const auto& value :
         {text_cell ? fmt(text_cell->correct) : "absent", code_cell ? fmt(code_cell->correct) : "absent",
          text_cell ? fmt(text_cell->incorrect) : "absent",
          code_cell ? fmt(code_cell->incorrect) : "absent"}) {
      std::string v(value);
      for (std::size_t pad = v.size(); pad < 14; ++pad) grid << ' ';
      grid << v << ' ';
    }
    grid << "\n";
  }
  for (const auto& cell : suite.cells) {
    summary.push_back({{"dataset", cell.dataset},
                       {"kind", cell.kind},
                       {"correct",
                        {{"instances", cell.correct.instances},
                         {"probes", cell.correct.probes},
                         {"errors", cell.correct.errors},
                         {"error_rate", cell.correct.error_rate ? json(*cell.correct.error_rate)
                                                                : json(nullptr)}}},
                       {"incorrect",
                        {{"instances", cell.incorrect.instances},
                         {"probes", cell.incorrect.probes},
                         {"errors", cell.incorrect.errors},
                         {"error_rate", cell.incorrect.error_rate ? json(*cell.incorrect.error_rate)
                                                                  : json(nullptr)}}}});
  }
  util::write_file_atomic(run_dir / "probes" / "summary.json", summary.dump(2) + "\n");
  util::write_file_atomic(run_dir / "probes" / "memory_errors.txt", grid.str());

  // A minimal manifest so `report` can pick the probe run up by path.
  config::RunManifest manifest;
  manifest.model_id = cfg.model_id;
  manifest.config_hash = config_hash;
  manifest.template_set_hash = ctx.templates.set_hash();
  manifest.template_hashes = ctx.templates.hashes();
  manifest.fixture_digest = ctx.store ? ctx.store->digest() : "";
  manifest.manifest_hash = manifest.compute_hash();
  util::write_file_atomic(run_dir / "manifest.json", manifest.to_json().dump(2) + "\n");
  return suite;
}

std::string render_report(const std::vector<std::filesystem::path>& manifest_paths) {
  static const std::vector<std::string> dataset_order = {"condqa", "sharc", "bgqa1", "bgqa2",
                                                         "bgqa3"};
  std::vector<eval::EvalReport> reports;
  std::vector<std::filesystem::path> probe_summaries;
  // (model, dataset, kind) -> per-seed (cost, scored)
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<std::pair<double, int>>>>>
      costs;
  for (const auto& path : manifest_paths) {
    config::RunManifest manifest = config::RunManifest::from_json(json::parse(util::read_file(path)));
    for (const auto& r : manifest.reports) {
      eval::EvalReport report;
      report.model_id = manifest.model_id;
      auto dataset = dataset_from_string(r.dataset);
      auto kind = prompts::prompt_kind_from_string(r.kind);
      if (!dataset || !kind) throw Error("manifest " + path.string() + ": unknown cell " + r.dataset + "/" + r.kind);
      report.dataset = *dataset;
      report.kind = *kind;
      report.seed = r.seed;
      report.headline = r.headline;
      costs[manifest.model_id][r.dataset][prompts::to_string(*kind)].emplace_back(r.cost, r.scored);
      reports.push_back(std::move(report));
    }
    std::filesystem::path probes = path.parent_path() / "probes" / "summary.json";
    if (std::filesystem::exists(probes)) probe_summaries.push_back(probes);
  }
  if (reports.empty() && probe_summaries.empty()) {
    throw Error("render_report: manifests carry no reports or probe summaries");
  }

  eval::Summary summary;
  if (!reports.empty()) summary = eval::aggregate_runs(reports);
  std::ostringstream out;

  auto print_cell = [&](const eval::Summary::Cell& cell) {
    std::string s = util::canonical_double(cell.mean);
    if (cell.runs > 1) s += " +/- " + util::canonical_double(cell.stddev);
    return s;
  };

  for (const auto& [model, datasets] : summary.cells) {
    std::vector<std::string> present;
    for (const auto& ds : dataset_order) {
      if (datasets.count(ds)) present.push_back(ds);
    }
    for (const auto& [ds, _] : datasets) {
      if (std::find(present.begin(), present.end(), ds) == present.end()) present.push_back(ds);
    }
    std::set<std::string> kinds;
    for (const auto& [ds, kind_map] : datasets) {
      for (const auto& [kind, _] : kind_map) kinds.insert(kind);
    }

    out << "== " << model << " ==\n";
    out << "kind";
    for (const auto& ds : present) out << "\t" << ds;
    out << "\n";
    // text and code rows first, ablations after
    std::vector<std::string> kind_order = {"text", "code"};
    for (const auto& kind : kinds) {
      if (kind != "text" && kind != "code") kind_order.push_back(kind);
    }
    for (const auto& kind : kind_order) {
      if (!kinds.count(kind)) continue;
      out << kind;
      for (const auto& ds : present) {
        out << "\t";
        auto it = datasets.at(ds).find(kind);
        out << (it == datasets.at(ds).end() ? "-" : print_cell(it->second));
      }
      if (kind == "code" && summary.delta_cp.count(model)) {
        out << "\tdelta_cp=" << util::canonical_double(summary.delta_cp.at(model));
      }
      out << "\n";
    }

    // Per-question cost at dataset x prompt-kind granularity.
    out << "-- cost per question --\n";
    for (const auto& kind : kind_order) {
      if (!kinds.count(kind)) continue;
      out << kind;
      for (const auto& ds : present) {
        out << "\t";
        auto model_it = costs.find(model);
        if (model_it == costs.end() || !model_it->second.count(ds) ||
            !model_it->second.at(ds).count(kind)) {
          out << "-";
          continue;
        }
        double total_cost = 0.0;
        long total_scored = 0;
        for (const auto& [cost, scored] : model_it->second.at(ds).at(kind)) {
          total_cost += cost;
          total_scored += scored;
        }
        out << (total_scored > 0 ? util::canonical_double(total_cost / double(total_scored))
                                 : std::string("-"));
      }
      out << "\n";
    }

    // Ablation deltas relative to code prompts.
    bool have_ablation = std::any_of(kind_order.begin(), kind_order.end(), [&](const std::string& k) {
      return k != "text" && k != "code" && kinds.count(k);
    });
    if (have_ablation) {
      out << "-- ablation deltas vs code --\n";
      for (const auto& kind : kind_order) {
        if (kind == "text" || kind == "code" || !kinds.count(kind)) continue;
        out << kind;
        for (const auto& ds : present) {
          out << "\t";
          const auto& kind_map = datasets.at(ds);
          auto ab = kind_map.find(kind);
          auto code = kind_map.find("code");
          if (ab == kind_map.end() || code == kind_map.end()) {
            out << "-";
          } else {
            out << util::canonical_double(ab->second.mean - code->second.mean);
          }
        }
        out << "\n";
      }
    }
  }

  for (const auto& probes : probe_summaries) {
    out << "== memory errors (" << probes.parent_path().parent_path().filename().string()
        << ") ==\n";
    out << "dataset\ttext.correct\tcode.correct\ttext.incorrect\tcode.incorrect\n";
    json j = json::parse(util::read_file(probes));
    std::map<std::string, std::map<std::string, json>> by_dataset;
    for (const auto& cell : j) {
      by_dataset[cell.at("dataset").get<std::string>()][cell.at("kind").get<std::string>()] = cell;
    }
    auto rate = [](const json& cell, const char* partition) -> std::string {
      if (cell.is_null()) return "-";
      const json& r = cell.at(partition).at("error_rate");
      return r.is_null() ? "absent" : util::canonical_double(r.get<double>());
    };
    for (const auto& [ds, kinds] : by_dataset) {
      json text_cell = kinds.count("text") ? kinds.at("text") : json(nullptr);
      json code_cell = kinds.count("code") ? kinds.at("code") : json(nullptr);
      out << ds << "\t" << rate(text_cell, "correct") << "\t" << rate(code_cell, "correct") << "\t"
          << rate(text_cell, "incorrect") << "\t" << rate(code_cell, "incorrect") << "\n";
    }
  }
  return out.str();
}

std::string validate_code_corpus(const std::vector<std::filesystem::path>& paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& path : paths) {
    if (std::filesystem::is_directory(path)) {
      for (const auto& entry : std::filesystem::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
          files.push_back(entry.path());
        }
      }
    } else {
      files.push_back(path);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("validate-code: no files to check");

  std::ostringstream out;
  std::vector<pseudo::PseudoProgram> programs;
  int fatal_total = 0;
  for (const auto& file : files) {
    pseudo::PseudoProgram program = pseudo::parse(util::read_file(file));
    pseudo::LineCounts counts = pseudo::count_lines(program);
    out << file.string() << ": " << counts.non_blank_lines << " lines, " << counts.if_lines
        << " if, ratio " << util::canonical_double(pseudo::reasoning_op_ratio(program));
    if (program.question_variable) out << ", question variable " << *program.question_variable;
    out << "\n";
    for (const auto& d : program.diagnostics) {
      const char* severity = d.severity == pseudo::Severity::Fatal     ? "fatal"
                             : d.severity == pseudo::Severity::Warning ? "warning"
                                                                       : "info";
      if (d.severity == pseudo::Severity::Fatal) ++fatal_total;
      out << "  [" << severity << "] line " << d.line << ": " << d.message << "\n";
    }
    programs.push_back(std::move(program));
  }
  corpus::ComplexityStats stats = corpus::complexity_stats(programs);
  out << "corpus: " << programs.size() << " programs, mean reasoning-op ratio "
      << util::canonical_double(100.0 * stats.mean_reasoning_op_ratio) << "%, mean lines "
      << util::canonical_double(stats.mean_line_count) << ", fatal diagnostics " << fatal_total
      << "\n";
  return out.str();
}

config::RunManifest record_fixtures(config::ExperimentConfig cfg, bool include_probes) {
  if (cfg.backend == "replay") {
    throw Error("record-fixtures: backend must be stub or live, not replay");
  }
  if (cfg.replay_dir.empty()) throw Error("record-fixtures: replay_dir must be set");
  cfg.cache_dir = cfg.replay_dir;
  config::RunManifest manifest = run_experiment(cfg);
  if (include_probes) {
    config::ExperimentConfig probe_cfg = cfg;
    probe_cfg.run_id = cfg.run_id.empty() ? "" : cfg.run_id + "-probes";
    run_probe_suite(probe_cfg);
  }
  return manifest;
}

}  // namespace codeprompt::runner
