#include "codeprompt/config.hpp"

#include "codeprompt/prompts.hpp"
#include "codeprompt/types.hpp"
#include "codeprompt/util.hpp"

namespace codeprompt::config {

using nlohmann::json;

namespace {

template <typename T>
void maybe(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  maybe(j, "model_id", &c.model_id);
  maybe(j, "backend", &c.backend);
  if (j.contains("endpoint")) {
    const json& e = j["endpoint"];
    maybe(e, "base_url", &c.endpoint_base_url);
    maybe(e, "path", &c.endpoint_path);
    maybe(e, "credential_env", &c.credential_env);
  }
  if (j.contains("datasets")) {
    for (const auto& [name, paths] : j["datasets"].items()) {
      DatasetPaths p;
      maybe(paths, "dev", &p.dev);
      maybe(paths, "test", &p.test);
      maybe(paths, "train", &p.train);
      c.datasets[name] = p;
    }
  }
  if (j.contains("run")) {
    const json& r = j["run"];
    maybe(r, "datasets", &c.run_datasets);
    maybe(r, "split", &c.split);
    maybe(r, "kinds", &c.kinds);
    maybe(r, "seeds", &c.seeds);
    maybe(r, "n_per_class", &c.n_per_class);
    maybe(r, "limit", &c.limit);
    maybe(r, "threads", &c.threads);
    maybe(r, "strict_dialect", &c.strict_dialect);
  }
  if (j.contains("translation_demos")) {
    for (const auto& [name, count] : j["translation_demos"].items()) {
      c.translation_demo_counts[name] = count.get<int>();
    }
  }
  if (j.contains("probes")) {
    const json& p = j["probes"];
    maybe(p, "condqa_max_entities", &c.probes.condqa_max_entities);
    maybe(p, "condqa_max_steps", &c.probes.condqa_max_steps);
    maybe(p, "condqa_instances", &c.probes.condqa_instances);
    maybe(p, "bgqa_instances", &c.probes.bgqa_instances);
    maybe(p, "bgqa3_instances", &c.probes.bgqa3_instances);
    maybe(p, "span_correct_threshold", &c.span_correct_threshold);
  }
  maybe(j, "templates_dir", &c.templates_dir);
  maybe(j, "demos_dir", &c.demos_dir);
  maybe(j, "prices", &c.prices_path);
  maybe(j, "cache_dir", &c.cache_dir);
  maybe(j, "replay_dir", &c.replay_dir);
  maybe(j, "stub_script", &c.stub_script);
  maybe(j, "out_dir", &c.out_dir);
  maybe(j, "run_id", &c.run_id);
  if (j.contains("decoding")) {
    const json& d = j["decoding"];
    maybe(d, "temperature", &c.temperature);
    maybe(d, "max_tokens_translate", &c.max_tokens_translate);
    maybe(d, "max_tokens_answer", &c.max_tokens_answer);
    maybe(d, "max_tokens_probe", &c.max_tokens_probe);
    maybe(d, "context_token_limit", &c.context_token_limit);
  }
  if (j.contains("limits")) {
    const json& l = j["limits"];
    maybe(l, "max_in_flight", &c.max_in_flight);
    maybe(l, "requests_per_minute", &c.requests_per_minute);
    maybe(l, "max_retries", &c.max_retries);
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(util::read_file(path));
  } catch (const json::exception& e) {
    throw Error("config " + path.string() + ": invalid JSON: " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["model_id"] = model_id;
  j["backend"] = backend;
  j["endpoint"] = {{"base_url", endpoint_base_url},
                   {"path", endpoint_path},
                   {"credential_env", credential_env}};
  json datasets_json = json::object();
  for (const auto& [name, p] : datasets) {
    datasets_json[name] = {{"dev", p.dev}, {"test", p.test}, {"train", p.train}};
  }
  j["datasets"] = datasets_json;
  j["run"] = {{"datasets", run_datasets}, {"split", split},         {"kinds", kinds},
              {"seeds", seeds},           {"n_per_class", n_per_class}, {"limit", limit},
              {"threads", threads},       {"strict_dialect", strict_dialect}};
  j["translation_demos"] = translation_demo_counts;
  j["probes"] = {{"condqa_max_entities", probes.condqa_max_entities},
                 {"condqa_max_steps", probes.condqa_max_steps},
                 {"condqa_instances", probes.condqa_instances},
                 {"bgqa_instances", probes.bgqa_instances},
                 {"bgqa3_instances", probes.bgqa3_instances},
                 {"span_correct_threshold", span_correct_threshold}};
  j["templates_dir"] = templates_dir;
  j["demos_dir"] = demos_dir;
  j["prices"] = prices_path;
  j["cache_dir"] = cache_dir;
  j["replay_dir"] = replay_dir;
  j["stub_script"] = stub_script;
  j["out_dir"] = out_dir;
  j["run_id"] = run_id;
  j["decoding"] = {{"temperature", temperature},
                   {"max_tokens_translate", max_tokens_translate},
                   {"max_tokens_answer", max_tokens_answer},
                   {"max_tokens_probe", max_tokens_probe},
                   {"context_token_limit", context_token_limit}};
  j["limits"] = {{"max_in_flight", max_in_flight},
                 {"requests_per_minute", requests_per_minute},
                 {"max_retries", max_retries}};
  return j;
}

void ExperimentConfig::validate() const {
  if (backend != "live" && backend != "replay" && backend != "stub") {
    throw Error("config: backend must be live, replay or stub (got '" + backend + "')");
  }
  if (backend == "live" && endpoint_base_url.empty()) {
    throw Error("config: live backend needs endpoint.base_url");
  }
  if (backend == "replay" && replay_dir.empty()) {
    throw Error("config: replay backend needs replay_dir");
  }
  if (backend == "stub" && stub_script.empty()) {
    throw Error("config: stub backend needs stub_script");
  }
  if (run_datasets.empty()) throw Error("config: run.datasets is empty");
  for (const auto& name : run_datasets) {
    if (!dataset_from_string(name)) throw Error("config: unknown dataset '" + name + "'");
    if (!datasets.count(name)) throw Error("config: no paths configured for dataset '" + name + "'");
    if (split_path(name).empty()) {
      throw Error("config: dataset '" + name + "' has no path for split '" + split + "'");
    }
  }
  if (split != "dev" && split != "test") throw Error("config: split must be dev or test");
  for (const auto& kind : kinds) {
    if (!prompts::prompt_kind_from_string(kind)) {
      throw Error("config: unknown prompt kind '" + kind + "'");
    }
  }
  if (seeds.empty()) throw Error("config: run.seeds is empty");
  if (n_per_class < 1) throw Error("config: n_per_class must be >= 1");
  if (threads < 1) throw Error("config: threads must be >= 1");
}

std::string ExperimentConfig::hash() const {
  // The hash names the experiment definition; where it runs (output and
  // cache locations, pacing) must not move it.
  json j = to_json();
  j.erase("out_dir");
  j.erase("run_id");
  j.erase("cache_dir");
  j.erase("limits");
  j["run"].erase("threads");
  return util::sha256_hex(j.dump());
}

const DatasetPaths& ExperimentConfig::paths_for(const std::string& dataset) const {
  auto it = datasets.find(dataset);
  if (it == datasets.end()) throw Error("config: no paths for dataset '" + dataset + "'");
  return it->second;
}

std::string ExperimentConfig::split_path(const std::string& dataset) const {
  const DatasetPaths& p = paths_for(dataset);
  return split == "test" ? p.test : p.dev;
}

int ExperimentConfig::translation_demos_for(const std::string& dataset) const {
  auto it = translation_demo_counts.find(dataset);
  return it == translation_demo_counts.end() ? 4 : it->second;
}

// ---------------------------------------------------------------------------
// RunManifest
// ---------------------------------------------------------------------------

json RunManifest::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["model_id"] = model_id;
  j["config_hash"] = config_hash;
  j["template_set_hash"] = template_set_hash;
  j["template_hashes"] = template_hashes;
  j["fixture_digest"] = fixture_digest;
  json inst = json::array();
  for (const auto& o : instances) {
    inst.push_back({{"id", o.id},
                    {"dataset", o.dataset},
                    {"kind", o.kind},
                    {"seed", o.seed},
                    {"status", o.status},
                    {"note", o.note},
                    {"score", o.score},
                    {"correct", o.correct}});
  }
  j["instances"] = inst;
  json reps = json::array();
  for (const auto& r : reports) {
    reps.push_back({{"dataset", r.dataset},
                    {"kind", r.kind},
                    {"seed", r.seed},
                    {"headline", r.headline},
                    {"cost", r.cost},
                    {"failed", r.failed},
                    {"skipped", r.skipped},
                    {"scored", r.scored}});
  }
  j["reports"] = reps;
  j["total_cost"] = total_cost;
  j["wall_clock_ms"] = wall_clock_ms;
  j["manifest_hash"] = manifest_hash;
  return j;
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.schema_version = j.value("schema_version", 1);
  if (m.schema_version != 1) {
    throw Error("manifest: unsupported schema version " + std::to_string(m.schema_version));
  }
  m.model_id = j.value("model_id", "");
  m.config_hash = j.value("config_hash", "");
  m.template_set_hash = j.value("template_set_hash", "");
  if (j.contains("template_hashes")) {
    m.template_hashes = j["template_hashes"].get<std::map<std::string, std::string>>();
  }
  m.fixture_digest = j.value("fixture_digest", "");
  for (const auto& o : j.value("instances", json::array())) {
    m.instances.push_back({o.value("id", ""), o.value("dataset", ""), o.value("kind", ""),
                           o.value("seed", std::uint64_t(0)), o.value("status", ""),
                           o.value("note", ""), o.value("score", 0.0), o.value("correct", false)});
  }
  for (const auto& r : j.value("reports", json::array())) {
    m.reports.push_back({r.value("dataset", ""), r.value("kind", ""),
                         r.value("seed", std::uint64_t(0)), r.value("headline", 0.0),
                         r.value("cost", 0.0), r.value("failed", 0), r.value("skipped", 0),
                         r.value("scored", 0)});
  }
  m.total_cost = j.value("total_cost", 0.0);
  m.wall_clock_ms = j.value("wall_clock_ms", 0L);
  m.manifest_hash = j.value("manifest_hash", "");
  return m;
}

std::string RunManifest::compute_hash() const {
  json j = to_json();
  j.erase("wall_clock_ms");
  j.erase("manifest_hash");
  return util::sha256_hex(j.dump());
}

}  // namespace codeprompt::config
