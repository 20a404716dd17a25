#include <benchmark/benchmark.h>

#include "codeprompt/eval.hpp"
#include "codeprompt/util.hpp"

using namespace codeprompt;

namespace {

void BM_token_f1(benchmark::State& state) {
  std::string pred = "within 10 days of receiving the application form";
  std::vector<std::string> golds = {"within 10 days of receiving your application",
                                    "the court replies within 10 days"};
  for (auto _ : state) {
    double f1 = eval::token_f1(pred, golds);
    benchmark::DoNotOptimize(f1);
  }
}
BENCHMARK(BM_token_f1);

void BM_macro_f1(benchmark::State& state) {
  util::CounterRng rng(1, "bench-macro");
  std::vector<AnswerClass> golds, preds;
  const AnswerClass classes[] = {AnswerClass::Yes, AnswerClass::No, AnswerClass::NotEnoughInfo};
  for (int i = 0; i < int(state.range(0)); ++i) {
    golds.push_back(classes[rng.next_below(3)]);
    preds.push_back(classes[rng.next_below(3)]);
  }
  for (auto _ : state) {
    double f1 = eval::macro_f1(preds, golds);
    benchmark::DoNotOptimize(f1);
  }
}
BENCHMARK(BM_macro_f1)->Arg(500)->Arg(5000);

}  // namespace
