#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "codeprompt/runner.hpp"
#include "codeprompt/util.hpp"

namespace {

using codeprompt::config::ExperimentConfig;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> datasets;
  std::vector<std::string> kinds;
  std::vector<std::uint64_t> seeds;
  std::string backend;
  std::string split;
  std::string model;
  std::string out;
  std::string run_id;
  int limit = -1;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "Experiment configuration file (JSON)")
      ->required();
  cmd->add_option("--dataset", args->datasets, "Dataset(s) to run (overrides config)");
  cmd->add_option("--kind", args->kinds, "Prompt kind(s) to run (overrides config)");
  cmd->add_option("--seed", args->seeds, "Seed(s) to run (overrides config)");
  cmd->add_option("--backend", args->backend, "Backend: live | replay | stub");
  cmd->add_option("--split", args->split, "Dataset split: dev | test");
  cmd->add_option("--model", args->model, "Model id");
  cmd->add_option("--limit", args->limit, "Run only the first N instances");
  cmd->add_option("--out", args->out, "Output directory");
  cmd->add_option("--run-id", args->run_id, "Run directory name (default: run-<config hash>)");
  cmd->add_option("--threads", args->threads, "Instance-level parallelism");
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::load(args.config_path);
  if (!args.datasets.empty()) cfg.run_datasets = args.datasets;
  if (!args.kinds.empty()) cfg.kinds = args.kinds;
  if (!args.seeds.empty()) cfg.seeds = args.seeds;
  if (!args.backend.empty()) cfg.backend = args.backend;
  if (!args.split.empty()) cfg.split = args.split;
  if (!args.model.empty()) cfg.model_id = args.model;
  if (!args.out.empty()) cfg.out_dir = args.out;
  if (!args.run_id.empty()) cfg.run_id = args.run_id;
  if (args.limit >= 0) cfg.limit = args.limit;
  if (args.threads > 0) cfg.threads = args.threads;
  return cfg;
}

void print_manifest_summary(const codeprompt::config::RunManifest& manifest) {
  std::cout << "manifest hash: " << manifest.manifest_hash << "\n";
  std::cout << "total cost: " << codeprompt::util::canonical_double(manifest.total_cost) << "\n";
  for (const auto& report : manifest.reports) {
    std::cout << report.dataset << " " << report.kind << " seed" << report.seed << ": headline "
              << codeprompt::util::canonical_double(report.headline) << " (failed "
              << report.failed << ", skipped " << report.skipped << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"code prompting experiment harness"};
  app.require_subcommand(1);

  CommonArgs run_args, ablate_args, probe_args, record_args;
  bool record_probes = false;

  CLI::App* run_cmd = app.add_subcommand("run", "Run text/code prompting experiments");
  add_common(run_cmd, &run_args);

  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Run the ablation prompt kinds");
  add_common(ablate_cmd, &ablate_args);

  CLI::App* probe_cmd = app.add_subcommand("probe", "Run the variable-tracking probe protocol");
  add_common(probe_cmd, &probe_args);

  std::vector<std::string> report_manifests;
  CLI::App* report_cmd = app.add_subcommand("report", "Render summary tables from manifests");
  report_cmd->add_option("manifests", report_manifests, "manifest.json paths")->required();

  std::vector<std::string> validate_paths;
  CLI::App* validate_cmd =
      app.add_subcommand("validate-code", "Parse a code corpus and print dialect diagnostics");
  validate_cmd->add_option("paths", validate_paths, "code files or directories")->required();

  CLI::App* record_cmd =
      app.add_subcommand("record-fixtures", "Record live/stub exchanges into the replay store");
  add_common(record_cmd, &record_args);
  record_cmd->add_flag("--probes", record_probes, "Also record the probe suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      print_manifest_summary(codeprompt::runner::run_experiment(resolve(run_args)));
    } else if (ablate_cmd->parsed()) {
      ExperimentConfig cfg = resolve(ablate_args);
      if (ablate_args.kinds.empty()) {
        cfg.kinds = {"code", "atomic_statements", "back_translated_code", "anonymized_code",
                     "random_code", "no_comments"};
      }
      print_manifest_summary(codeprompt::runner::run_experiment(cfg));
    } else if (probe_cmd->parsed()) {
      auto suite = codeprompt::runner::run_probe_suite(resolve(probe_args));
      for (const auto& cell : suite.cells) {
        auto fmt = [](const codeprompt::runner::ProbePartition& p) {
          return p.error_rate ? codeprompt::util::canonical_double(*p.error_rate) + "%"
                              : std::string("absent");
        };
        std::cout << cell.dataset << " " << cell.kind << ": correct " << fmt(cell.correct) << " ("
                  << cell.correct.probes << " probes), incorrect " << fmt(cell.incorrect) << " ("
                  << cell.incorrect.probes << " probes)\n";
      }
    } else if (report_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(report_manifests.begin(), report_manifests.end());
      std::cout << codeprompt::runner::render_report(paths);
    } else if (validate_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(validate_paths.begin(), validate_paths.end());
      std::cout << codeprompt::runner::validate_code_corpus(paths);
    } else if (record_cmd->parsed()) {
      print_manifest_summary(
          codeprompt::runner::record_fixtures(resolve(record_args), record_probes));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
