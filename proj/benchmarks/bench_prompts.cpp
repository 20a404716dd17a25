#include <benchmark/benchmark.h>

#include "codeprompt/corpus.hpp"
#include "codeprompt/llm.hpp"
#include "codeprompt/prompts.hpp"
#include "codeprompt/util.hpp"

using namespace codeprompt;

namespace {

std::filesystem::path root() { return CODEPROMPT_SOURCE_ROOT; }

void BM_build_text_condqa(benchmark::State& state) {
  auto templates = prompts::TemplateSet::load(root() / "templates" / "paper-v1");
  auto instance = corpus::load_dataset(
      DatasetKind::CondQA, root() / "fixtures/appendix_n/instances/condqa_guardian.jsonl")[0];
  prompts::Decoding decoding;
  for (auto _ : state) {
    auto bundle = prompts::build_text(instance, {}, templates, decoding);
    benchmark::DoNotOptimize(bundle);
  }
}
BENCHMARK(BM_build_text_condqa);

void BM_build_code_answer_condqa(benchmark::State& state) {
  auto templates = prompts::TemplateSet::load(root() / "templates" / "paper-v1");
  auto instance = corpus::load_dataset(
      DatasetKind::CondQA, root() / "fixtures/appendix_n/instances/condqa_guardian.jsonl")[0];
  auto code = pseudo::parse(
      util::read_file(root() / "fixtures/appendix_n/generated_code/condqa_guardian.txt"));
  prompts::Decoding decoding;
  for (auto _ : state) {
    auto bundle = prompts::build_code_answer(code, instance, {}, templates, decoding);
    benchmark::DoNotOptimize(bundle);
  }
}
BENCHMARK(BM_build_code_answer_condqa);

void BM_cache_key(benchmark::State& state) {
  auto templates = prompts::TemplateSet::load(root() / "templates" / "paper-v1");
  auto instance = corpus::load_dataset(
      DatasetKind::CondQA, root() / "fixtures/appendix_n/instances/condqa_guardian.jsonl")[0];
  prompts::Decoding decoding;
  llm::LlmRequest request{"bench-model",
                          prompts::build_text(instance, {}, templates, decoding)};
  for (auto _ : state) {
    std::string key = llm::cache_key(request);
    benchmark::DoNotOptimize(key);
  }
}
BENCHMARK(BM_cache_key);

}  // namespace
