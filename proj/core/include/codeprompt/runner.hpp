#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codeprompt/chain.hpp"
#include "codeprompt/config.hpp"
#include "codeprompt/eval.hpp"
#include "codeprompt/llm.hpp"

namespace codeprompt::runner {

// Backend + store wiring for one run, built from the config. The credential
// is read from the configured environment variable, never from the file.
struct RunContext {
  prompts::TemplateSet templates;
  std::shared_ptr<llm::CacheStore> store;
  std::shared_ptr<llm::Backend> backend;
  std::unique_ptr<llm::Completer> completer;
  std::optional<llm::PriceTable> prices;

  static RunContext create(const config::ExperimentConfig& cfg);
};

// Demonstration payloads shipped in the repo.
std::vector<prompts::TranslationDemo> load_translation_demos(const std::filesystem::path& demos_dir,
                                                             const std::string& dataset, int count);
std::vector<prompts::BackTranslationDemo> load_back_translation_demos(
    const std::filesystem::path& demos_dir);
std::vector<std::pair<std::string, std::string>> load_atomic_demos(
    const std::filesystem::path& demos_dir);
std::string load_demo_code(const std::filesystem::path& demos_dir, const std::string& dataset,
                           const std::string& instance_id);

// Executes every (dataset, kind, seed) cell, writes the output tree
// (out/<run-id>/{manifest.json, transcripts/, reports/}) and returns the
// manifest. Individual instance failures are recorded, not fatal.
config::RunManifest run_experiment(const config::ExperimentConfig& cfg);

struct ProbePartition {
  int instances = 0;
  int probes = 0;
  int errors = 0;
  std::optional<double> error_rate;  // absent when the partition has no probes
};

struct ProbeCell {
  std::string dataset;
  std::string kind;  // text | code
  ProbePartition correct;
  ProbePartition incorrect;
};

struct ProbeSuiteResult {
  std::vector<ProbeCell> cells;
  std::vector<chain::ProbeResult> all_results;
};

// Runs the variable-tracking probe protocol for the configured datasets under
// both prompting methods, partitioned by final-answer correctness.
ProbeSuiteResult run_probe_suite(const config::ExperimentConfig& cfg);

// Table-style grids from manifests: score grid with the code-minus-text gap,
// ablation deltas against code prompts, and the memory-error grid when probe
// summaries sit next to a manifest.
std::string render_report(const std::vector<std::filesystem::path>& manifest_paths);

// Parses dialect files, printing diagnostics and corpus complexity stats.
std::string validate_code_corpus(const std::vector<std::filesystem::path>& paths);

// Re-runs the configured experiment with the cache pointed at replay_dir so
// the recorded exchanges become the replay fixture store.
config::RunManifest record_fixtures(config::ExperimentConfig cfg, bool include_probes);

nlohmann::json transcript_to_json(const chain::Transcript& transcript);
nlohmann::json probe_result_to_json(const chain::ProbeResult& result);

}  // namespace codeprompt::runner
