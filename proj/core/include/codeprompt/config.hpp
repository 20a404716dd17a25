#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace codeprompt::config {

struct DatasetPaths {
  std::string dev;
  std::string test;
  std::string train;
};

struct ProbeBudgets {
  int condqa_max_entities = 5;  // facts per instance
  int condqa_max_steps = 3;     // partial CoTs per instance
  int condqa_instances = 30;    // per correctness partition
  int bgqa_instances = 50;
  int bgqa3_instances = 20;
};

// One structured, human-editable file; every field overridable on the
// command line; credentials only via environment variable.
struct ExperimentConfig {
  std::string model_id = "stub-model";
  std::string backend = "stub";  // live | replay | stub

  std::string endpoint_base_url;
  std::string endpoint_path = "/v1/chat/completions";
  std::string credential_env = "CODEPROMPT_API_KEY";

  std::map<std::string, DatasetPaths> datasets;  // dataset id -> split files
  std::vector<std::string> run_datasets;
  std::string split = "dev";
  std::vector<std::string> kinds = {"text", "code"};
  std::vector<std::uint64_t> seeds = {0, 1};
  int n_per_class = 1;
  int limit = 0;  // head-of-dataset smoke runs; 0 = all

  std::map<std::string, int> translation_demo_counts = {
      {"condqa", 4}, {"sharc", 5}, {"bgqa1", 4}, {"bgqa2", 4}, {"bgqa3", 4}};

  ProbeBudgets probes;

  std::string templates_dir = "templates/paper-v1";
  std::string demos_dir = "demos";
  std::string prices_path;
  std::string cache_dir = ".codeprompt-cache";
  std::string replay_dir;
  std::string stub_script;
  std::string out_dir = "out";
  std::string run_id;  // default: run-<config hash prefix>

  double temperature = 0.0;
  int max_tokens_translate = 1024;
  int max_tokens_answer = 512;
  int max_tokens_probe = 16;
  long context_token_limit = 16384;
  bool strict_dialect = false;
  // Span answers count as correct (probe partitioning) at this token-F1.
  double span_correct_threshold = 0.5;

  int max_in_flight = 4;
  int requests_per_minute = 60;
  int max_retries = 4;
  int threads = 1;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // Throws on contradictions before any network call.
  void validate() const;
  // Hash of the experiment definition; output/cache locations, pacing limits
  // and thread counts are excluded so identical experiments hash identically
  // everywhere.
  std::string hash() const;

  const DatasetPaths& paths_for(const std::string& dataset) const;
  std::string split_path(const std::string& dataset) const;
  int translation_demos_for(const std::string& dataset) const;
};

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct InstanceOutcome {
  std::string id;
  std::string dataset;
  std::string kind;
  std::uint64_t seed = 0;
  std::string status;  // ok | skipped | failed
  std::string note;
  double score = 0.0;
  bool correct = false;
};

struct ReportSummary {
  std::string dataset;
  std::string kind;
  std::uint64_t seed = 0;
  double headline = 0.0;
  double cost = 0.0;
  int failed = 0;
  int skipped = 0;
  int scored = 0;
};

struct RunManifest {
  int schema_version = 1;
  std::string model_id;
  std::string config_hash;
  std::string template_set_hash;
  std::map<std::string, std::string> template_hashes;
  std::string fixture_digest;
  std::vector<InstanceOutcome> instances;
  std::vector<ReportSummary> reports;
  double total_cost = 0.0;
  long wall_clock_ms = 0;   // excluded from the hash
  std::string manifest_hash;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  // Hash over the canonical JSON minus wall clock and the hash field itself.
  std::string compute_hash() const;
};

}  // namespace codeprompt::config
