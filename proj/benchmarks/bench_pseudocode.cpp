#include <benchmark/benchmark.h>

#include "codeprompt/pseudocode.hpp"
#include "codeprompt/util.hpp"

using namespace codeprompt;

namespace {

std::string load_fixture(const char* rel) {
  return util::read_file(std::filesystem::path(CODEPROMPT_SOURCE_ROOT) / rel);
}

void BM_parse_guardian_code(benchmark::State& state) {
  std::string text = load_fixture("fixtures/appendix_n/generated_code/condqa_guardian.txt");
  for (auto _ : state) {
    auto program = pseudo::parse(text);
    benchmark::DoNotOptimize(program);
  }
  state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(text.size()));
}
BENCHMARK(BM_parse_guardian_code);

void BM_render(benchmark::State& state) {
  auto program = pseudo::parse(load_fixture("fixtures/appendix_n/generated_code/condqa_guardian.txt"));
  for (auto _ : state) {
    std::string out = pseudo::render(program);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_render);

void BM_anonymize(benchmark::State& state) {
  auto program = pseudo::parse(load_fixture("fixtures/appendix_n/generated_code/condqa_guardian.txt"));
  for (auto _ : state) {
    auto result = pseudo::anonymize(program);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_anonymize);

void BM_splice_random(benchmark::State& state) {
  auto program = pseudo::parse(load_fixture("fixtures/appendix_n/generated_code/condqa_guardian.txt"));
  auto donor = pseudo::parse(load_fixture("fixtures/appendix_n/generated_code/sharc_vat.txt"));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto result = pseudo::splice_random(program, donor, seed++);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_splice_random);

}  // namespace

BENCHMARK_MAIN();
