#include <doctest.h>

#include <fstream>

#include "codeprompt/runner.hpp"
#include "support.hpp"

using namespace codeprompt;
using config::ExperimentConfig;

namespace {

ExperimentConfig base_config(const std::string& scratch_name) {
  ExperimentConfig cfg =
      ExperimentConfig::load(testsupport::repo_root() / "configs" / "bgqa1_dev.json");
  cfg.out_dir = testsupport::scratch_dir(scratch_name).string();
  cfg.cache_dir = (testsupport::scratch_dir(scratch_name + "-cache")).string();
  return cfg;
}

}  // namespace

TEST_CASE("config: load, validate, override, hash stability") {
  ExperimentConfig cfg = base_config("config");
  cfg.validate();
  std::string h1 = cfg.hash();
  CHECK(h1 == cfg.hash());

  ExperimentConfig changed = cfg;
  changed.seeds = {7};
  CHECK(changed.hash() != h1);

  ExperimentConfig bad = cfg;
  bad.backend = "telepathy";
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("backend"), Error);

  bad = cfg;
  bad.run_datasets = {"nope"};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("unknown dataset"), Error);

  bad = cfg;
  bad.backend = "live";
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("base_url"), Error);

  bad = cfg;
  bad.kinds = {"osmosis"};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("prompt kind"), Error);

  CHECK(cfg.translation_demos_for("sharc") == 5);
  CHECK(cfg.translation_demos_for("condqa") == 4);
}

TEST_CASE("stub run end to end: reports, manifest, per-instance outcomes") {
  ExperimentConfig cfg = base_config("e2e");
  cfg.seeds = {0};
  cfg.limit = 6;
  config::RunManifest manifest = runner::run_experiment(cfg);

  REQUIRE(manifest.reports.size() == 2);  // text + code
  for (const auto& report : manifest.reports) {
    CHECK(report.headline > 0.0);
    CHECK(report.cost > 0.0);
  }
  CHECK(manifest.instances.size() == 12);
  CHECK(manifest.total_cost > 0.0);
  CHECK_FALSE(manifest.manifest_hash.empty());
  CHECK_FALSE(manifest.template_hashes.empty());

  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) / ("run-" + manifest.config_hash.substr(0, 12));
  CHECK(std::filesystem::exists(run_dir / "manifest.json"));
  CHECK(std::filesystem::exists(run_dir / "transcripts" / "bgqa1__text__seed0.jsonl"));
  CHECK(std::filesystem::exists(run_dir / "reports" / "bgqa1__code__seed0.csv"));
  CHECK(std::filesystem::exists(run_dir / "reports" / "bgqa1__text__seed0_confusion.csv"));
  CHECK(std::filesystem::exists(run_dir / "reports" / "summary.txt"));

  // The lock is released at the end of the run.
  CHECK_FALSE(std::filesystem::exists(run_dir / ".lock"));
}

TEST_CASE("rerun of a completed run performs zero backend calls") {
  ExperimentConfig cfg = base_config("resume");
  cfg.seeds = {0};
  cfg.limit = 4;
  runner::run_experiment(cfg);

  // Poison the stub script path: any backend call would now fail to load...
  ExperimentConfig again = cfg;
  again.run_id = "second";
  config::RunManifest manifest = runner::run_experiment(again);
  // ...so equality of outcomes plus cache-only sources prove resume-by-cache.
  std::filesystem::path run_dir = std::filesystem::path(cfg.out_dir) / "second";
  std::string transcript_lines =
      util::read_file(run_dir / "transcripts" / "bgqa1__code__seed0.jsonl");
  CHECK(transcript_lines.find("\"source\":\"cache\"") != std::string::npos);
  CHECK(transcript_lines.find("\"source\":\"stub\"") == std::string::npos);
  CHECK(manifest.reports.size() == 2);
}

TEST_CASE("replay determinism: recorded store yields bit-identical manifest hashes") {
  ExperimentConfig record_cfg = base_config("record");
  record_cfg.seeds = {0};
  record_cfg.limit = 5;
  record_cfg.replay_dir = (std::filesystem::path(record_cfg.out_dir) / "replay-store").string();
  runner::record_fixtures(record_cfg, false);

  ExperimentConfig replay_cfg = record_cfg;
  replay_cfg.backend = "replay";
  replay_cfg.run_id = "replay-a";
  auto first = runner::run_experiment(replay_cfg);
  replay_cfg.run_id = "replay-b";
  auto second = runner::run_experiment(replay_cfg);
  CHECK(first.manifest_hash == second.manifest_hash);
  CHECK_FALSE(first.manifest_hash.empty());

  // Every artifact replays byte-identically, not just hash-identically.
  std::filesystem::path run_a = std::filesystem::path(replay_cfg.out_dir) / "replay-a";
  std::filesystem::path run_b = std::filesystem::path(replay_cfg.out_dir) / "replay-b";
  for (const char* sub : {"transcripts", "reports", ""}) {
    std::filesystem::path dir_a = sub[0] ? run_a / sub : run_a;
    for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
      if (!entry.is_regular_file()) continue;
      CAPTURE(entry.path().string());
      std::filesystem::path other = (sub[0] ? run_b / sub : run_b) / entry.path().filename();
      CHECK(util::read_file(entry.path()) == util::read_file(other));
    }
  }

  // A replay miss fails loudly.
  ExperimentConfig miss = replay_cfg;
  miss.run_id = "replay-miss";
  miss.limit = 8;  // more instances than were recorded
  CHECK_THROWS_AS(runner::run_experiment(miss), FixtureMissingError);
}

TEST_CASE("manifest hash ignores wall clock but pins outcomes") {
  config::RunManifest m;
  m.model_id = "m";
  m.config_hash = "c";
  m.instances.push_back({"i", "bgqa1", "text", 0, "ok", "", 1.0, true});
  m.wall_clock_ms = 1;
  std::string h1 = m.compute_hash();
  m.wall_clock_ms = 99999;
  CHECK(m.compute_hash() == h1);
  m.instances[0].score = 0.5;
  CHECK(m.compute_hash() != h1);
}

TEST_CASE("probe suite produces the partitioned memory-error grid") {
  ExperimentConfig cfg = base_config("probes");
  cfg.run_datasets = {"bgqa1"};
  cfg.seeds = {0};
  cfg.limit = 8;
  cfg.probes.bgqa_instances = 3;
  auto suite = runner::run_probe_suite(cfg);
  REQUIRE(suite.cells.size() == 2);  // text + code
  for (const auto& cell : suite.cells) {
    CHECK(cell.dataset == "bgqa1");
    CHECK(cell.correct.instances <= 3);
    CHECK(cell.incorrect.instances <= 3);
    int probes = cell.correct.probes + cell.incorrect.probes;
    CHECK(probes > 0);
  }
  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) / ("probe-" + cfg.hash().substr(0, 12));
  CHECK(std::filesystem::exists(run_dir / "probes" / "summary.json"));
  CHECK(std::filesystem::exists(run_dir / "probes" / "memory_errors.txt"));

  // The report command renders the memory-error grid from the probe run.
  std::string rendered = runner::render_report({run_dir / "manifest.json"});
  CHECK(rendered.find("memory errors") != std::string::npos);
  CHECK(rendered.find("text.correct") != std::string::npos);
  CHECK(rendered.find("bgqa1") != std::string::npos);
}

TEST_CASE("report rendering merges manifests into score and delta tables") {
  ExperimentConfig cfg = base_config("report");
  cfg.seeds = {0, 1};
  cfg.limit = 5;
  config::RunManifest manifest = runner::run_experiment(cfg);
  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) / ("run-" + manifest.config_hash.substr(0, 12));

  std::string rendered = runner::render_report({run_dir / "manifest.json"});
  CHECK(rendered.find("== stub-model ==") != std::string::npos);
  CHECK(rendered.find("text") != std::string::npos);
  CHECK(rendered.find("code") != std::string::npos);
  CHECK(rendered.find("delta_cp=") != std::string::npos);
  CHECK(rendered.find("+/-") != std::string::npos);  // two seeds -> std column
}

TEST_CASE("ablation kinds run end to end against the stub") {
  ExperimentConfig cfg = base_config("ablate");
  cfg.run_datasets = {"bgqa1"};
  cfg.kinds = {"code", "anonymized_code", "no_comments", "random_code", "back_translated_code",
               "atomic_statements"};
  cfg.seeds = {0};
  cfg.limit = 3;
  config::RunManifest manifest = runner::run_experiment(cfg);
  CHECK(manifest.reports.size() == 6);
  std::filesystem::path run_dir =
      std::filesystem::path(cfg.out_dir) / ("run-" + manifest.config_hash.substr(0, 12));
  std::string rendered = runner::render_report({run_dir / "manifest.json"});
  CHECK(rendered.find("ablation deltas vs code") != std::string::npos);
  CHECK(rendered.find("anonymized_code") != std::string::npos);
}

TEST_CASE("validate-code prints diagnostics and corpus stats") {
  std::string out = runner::validate_code_corpus(
      {testsupport::repo_root() / "fixtures" / "appendix_n" / "code_blocks"});
  CHECK(out.find("mean reasoning-op ratio") != std::string::npos);
  CHECK(out.find("fatal diagnostics 0") != std::string::npos);

  auto dir = testsupport::scratch_dir("validate");
  util::write_file_atomic(dir / "bad.txt", "for x in y:\n    z = True\n");
  std::string bad = runner::validate_code_corpus({dir});
  CHECK(bad.find("[fatal]") != std::string::npos);
  CHECK(bad.find("forbidden construct") != std::string::npos);
}

TEST_CASE("run directory lock rejects concurrent owners") {
  ExperimentConfig cfg = base_config("lock");
  cfg.seeds = {0};
  cfg.limit = 2;
  cfg.run_id = "locked-run";
  std::filesystem::path run_dir = std::filesystem::path(cfg.out_dir) / "locked-run";
  std::filesystem::create_directories(run_dir);
  util::write_file_atomic(run_dir / ".lock", "held\n");
  CHECK_THROWS_WITH_AS(runner::run_experiment(cfg), doctest::Contains("locked"), Error);
}

TEST_CASE("sharc and condqa stub cells cover both prompt kinds") {
  ExperimentConfig cfg = base_config("other-datasets");
  cfg.run_datasets = {"condqa", "sharc"};
  cfg.seeds = {0};
  cfg.limit = 6;
  config::RunManifest manifest = runner::run_experiment(cfg);
  REQUIRE(manifest.reports.size() == 4);
  for (const auto& report : manifest.reports) {
    CAPTURE(report.dataset);
    CAPTURE(report.kind);
    CHECK(report.headline > 0.0);
  }
}
