#include <doctest.h>

#include <algorithm>
#include <map>

#include "codeprompt/eval.hpp"
#include "codeprompt/util.hpp"
#include "support.hpp"

using namespace codeprompt;
using eval::EvalReport;

namespace {

chain::Transcript ok_transcript(const std::string& id, prompts::PromptKind kind,
                                const std::string& reply, const std::string& raw_answer) {
  chain::Transcript t;
  t.instance_id = id;
  t.kind = kind;
  t.status = chain::RunStatus::Ok;
  llm::LlmExchange exchange;
  exchange.response_text = reply;
  t.exchanges.push_back(exchange);
  t.raw_answer_text = raw_answer;
  return t;
}

Instance classification_instance(const std::string& id, DatasetKind dataset, AnswerClass cls) {
  Instance inst;
  inst.id = id;
  inst.dataset = dataset;
  inst.answer_class = cls;
  inst.gold_answers = {cls == AnswerClass::Yes  ? "yes"
                       : cls == AnswerClass::No ? "no"
                                                : "unknown"};
  return inst;
}

}  // namespace

TEST_CASE("token_f1: identity, hand-derived 4/9, disjoint") {
  CHECK(eval::token_f1("within 10 days", {"within 10 days"}) == doctest::Approx(1.0));
  // P = 1 (2 of 2 predicted tokens), R = 2/7 -> F1 = 4/9.
  CHECK(eval::token_f1("10 days", {"within 10 days of receiving your application"}) ==
        doctest::Approx(4.0 / 9.0));
  CHECK(eval::token_f1("yes", {"no"}) == 0.0);
}

TEST_CASE("token_f1 normalization: case, punctuation, articles, whitespace, empties") {
  CHECK(eval::token_f1("The  Answer!", {"answer"}) == doctest::Approx(1.0));
  CHECK(eval::token_f1("an apple", {"apple"}) == doctest::Approx(1.0));
  // Both sides normalize to empty -> exact-match rule.
  CHECK(eval::token_f1("the", {"a"}) == doctest::Approx(1.0));
  CHECK(eval::token_f1("the", {"apple"}) == 0.0);
  // Max over golds.
  CHECK(eval::token_f1("blue bird", {"red fish", "blue bird"}) == doctest::Approx(1.0));
}

TEST_CASE("macro_f1: perfect, hand-derived half, errors") {
  using A = AnswerClass;
  std::vector<A> golds = {A::Yes, A::No, A::NotEnoughInfo, A::Yes, A::No, A::NotEnoughInfo};
  CHECK(eval::macro_f1(golds, golds) == doctest::Approx(1.0));

  // Two-class confusion [[1,1],[1,1]] -> each class P=R=F1=0.5 -> macro 0.5.
  std::vector<A> g2 = {A::Yes, A::Yes, A::No, A::No};
  std::vector<A> p2 = {A::Yes, A::No, A::Yes, A::No};
  CHECK(eval::macro_f1(p2, g2) == doctest::Approx(0.5));

  CHECK_THROWS_AS(eval::macro_f1({}, {}), Error);
  CHECK_THROWS_AS(eval::macro_f1({A::Yes}, {A::Yes, A::No}), Error);

  // Classes absent from both sides are excluded from the mean.
  std::vector<A> g3 = {A::Yes, A::Yes};
  std::vector<A> p3 = {A::Yes, A::Yes};
  CHECK(eval::macro_f1(p3, g3) == doctest::Approx(1.0));
}

TEST_CASE("confusion matrix: diagonal, over-prediction column, span errors") {
  using A = AnswerClass;
  std::vector<A> golds, preds;
  for (int i = 0; i < 3; ++i) {
    golds.insert(golds.end(), {A::Yes, A::No, A::NotEnoughInfo});
    preds.insert(preds.end(), {A::Yes, A::No, A::NotEnoughInfo});
  }
  auto perfect = eval::confusion_matrix(preds, golds);
  CHECK(perfect.cells[0][0] == 3);
  CHECK(perfect.cells[1][1] == 3);
  CHECK(perfect.cells[2][2] == 3);
  CHECK(perfect.total() == 9);

  // Everything predicted "not enough information": one non-zero column.
  std::vector<A> nei(golds.size(), A::NotEnoughInfo);
  auto over = eval::confusion_matrix(nei, golds);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(over.cells[r][2] == 3);
    CHECK(over.cells[r][0] == 0);
    CHECK(over.cells[r][1] == 0);
  }
  CHECK(over.total() == 9);

  CHECK_THROWS_AS(eval::confusion_matrix({A::Span}, {A::Span}), Error);

  // Unextractable predictions land in the trailing bucket, keeping the sum.
  auto with_unknown = eval::confusion_matrix({A::Unknown, A::Yes}, {A::Yes, A::Yes});
  CHECK(with_unknown.cells[0][3] == 1);
  CHECK(with_unknown.total() == 2);
}

TEST_CASE("extract_answer: markers, fallbacks and the unextractable case") {
  Instance bg = classification_instance("b1", DatasetKind::BGQA1, AnswerClass::Yes);

  auto marker = eval::extract_answer(
      ok_transcript("b1", prompts::PromptKind::Text, "steps...\nAnswer: yes", "yes"), bg);
  CHECK(marker.predicted_class == AnswerClass::Yes);
  CHECK(marker.extraction_method == "marker");

  // No marker: the last class keyword in the reply decides.
  auto fallback = eval::extract_answer(
      ok_transcript("b1", prompts::PromptKind::Text,
                    "it could be yes at first glance but overall the answer is no", ""),
      bg);
  CHECK(fallback.predicted_class == AnswerClass::No);
  CHECK(fallback.extraction_method == "fallback");

  auto none = eval::extract_answer(
      ok_transcript("b1", prompts::PromptKind::Text, "I cannot tell anything", ""), bg);
  CHECK(none.predicted_class == AnswerClass::Unknown);

  // Malformed replies collected from smoke runs: keyword scanning pins them.
  std::map<std::string, AnswerClass> malformed = {
      {"Based on Rule1 the claim is proved", AnswerClass::Yes},
      {"the statement is disproved by Rule2", AnswerClass::No},
      {"...so it must be true. Unknown factors aside the previous answer stands: unknown",
       AnswerClass::NotEnoughInfo},
      {"Not enough information", AnswerClass::NotEnoughInfo},
  };
  for (const auto& [reply, expected] : malformed) {
    CAPTURE(reply);
    auto p = eval::extract_answer(ok_transcript("b1", prompts::PromptKind::Text, reply, ""), bg);
    CHECK(p.predicted_class == expected);
  }
}

TEST_CASE("extract_answer: sharc code completions map True/False/None") {
  Instance sh = classification_instance("s1", DatasetKind::ShARC, AnswerClass::Yes);
  auto yes = eval::extract_answer(
      ok_transcript("s1", prompts::PromptKind::CodeAnswer, "True", "True"), sh);
  CHECK(yes.predicted_class == AnswerClass::Yes);
  auto no = eval::extract_answer(
      ok_transcript("s1", prompts::PromptKind::CodeAnswer, "False", "False"), sh);
  CHECK(no.predicted_class == AnswerClass::No);
  auto nei = eval::extract_answer(
      ok_transcript("s1", prompts::PromptKind::CodeAnswer, "None", "None"), sh);
  CHECK(nei.predicted_class == AnswerClass::NotEnoughInfo);

  auto label = eval::extract_answer(
      ok_transcript("s1", prompts::PromptKind::Text, "not enough information",
                    "not enough information"),
      sh);
  CHECK(label.predicted_class == AnswerClass::NotEnoughInfo);
}

TEST_CASE("extract_answer: condqa spans via marker, keyword fallback, whole reply") {
  Instance cq;
  cq.id = "c1";
  cq.dataset = DatasetKind::CondQA;
  cq.answer_class = AnswerClass::Span;
  cq.gold_answers = {"within 10 days"};

  auto span = eval::extract_answer(
      ok_transcript("c1", prompts::PromptKind::Text, "cot\nAnswer: within 10 days",
                    "within 10 days"),
      cq);
  CHECK(span.predicted_class == AnswerClass::Span);
  CHECK(span.extracted == "within 10 days");

  auto yes = eval::extract_answer(
      ok_transcript("c1", prompts::PromptKind::Text, "reasoning without marker, I say yes", ""),
      cq);
  CHECK(yes.predicted_class == AnswerClass::Yes);
  CHECK(yes.extraction_method == "fallback");

  auto whole = eval::extract_answer(
      ok_transcript("c1", prompts::PromptKind::Text, "the court replies within 10 days", ""), cq);
  CHECK(whole.extraction_method == "whole-reply");
  CHECK(eval::token_f1(whole.extracted, cq.gold_answers) > 0.5);
}

TEST_CASE("aggregate_runs reproduces the published code-minus-text gaps") {
  struct Cell {
    const char* dataset;
    double text;
    double code;
  };
  struct Row {
    const char* model;
    std::vector<Cell> cells;
    double expected;
  };
  // Test-split table values.
  std::vector<Row> test_rows = {
      {"gpt35",
       {{"condqa", 58.70, 60.60},
        {"sharc", 62.95, 54.98},
        {"bgqa1", 51.15, 58.67},
        {"bgqa2", 37.42, 55.56},
        {"bgqa3", 27.77, 50.29}},
       8.42},
      {"mixtral",
       {{"condqa", 48.17, 44.73},
        {"sharc", 53.77, 59.06},
        {"bgqa1", 56.38, 53.33},
        {"bgqa2", 39.64, 47.39},
        {"bgqa3", 30.15, 44.72}},
       4.22},
      {"mistral",
       {{"condqa", 35.74, 33.28},
        {"sharc", 43.60, 49.92},
        {"bgqa1", 47.40, 53.80},
        {"bgqa2", 48.78, 51.27},
        {"bgqa3", 47.86, 48.79}},
       2.74},
  };
  // Dev-split means.
  std::vector<Row> dev_rows = {
      {"gpt35-dev",
       {{"condqa", 56.54, 57.64},
        {"sharc", 64.10, 58.54},
        {"bgqa1", 53.16, 68.60},
        {"bgqa2", 33.71, 55.85},
        {"bgqa3", 31.5, 47.57}},
       9.84},
      {"mixtral-dev",
       {{"condqa", 46.60, 40.88},
        {"sharc", 55.71, 58.96},
        {"bgqa1", 58.31, 57.94},
        {"bgqa2", 36.77, 45.32},
        {"bgqa3", 32.06, 38.90}},
       2.51},
      {"mistral-dev",
       {{"condqa", 28.84, 28.26},
        {"sharc", 37.56, 53.42},
        {"bgqa1", 47.61, 52.21},
        {"bgqa2", 47.29, 54.27},
        {"bgqa3", 46.56, 45.22}},
       5.10},
  };

  auto check_rows = [](const std::vector<Row>& rows) {
    std::vector<EvalReport> reports;
    for (const auto& row : rows) {
      for (const auto& cell : row.cells) {
        EvalReport text;
        text.model_id = row.model;
        text.dataset = *dataset_from_string(cell.dataset);
        text.kind = prompts::PromptKind::Text;
        text.headline = cell.text;
        reports.push_back(text);
        EvalReport code = text;
        code.kind = prompts::PromptKind::CodeAnswer;
        code.headline = cell.code;
        reports.push_back(code);
      }
    }
    auto summary = eval::aggregate_runs(reports);
    for (const auto& row : rows) {
      CAPTURE(row.model);
      REQUIRE(summary.delta_cp.count(row.model) == 1);
      CHECK(std::abs(summary.delta_cp.at(row.model) - row.expected) <= 0.01);
    }
  };
  check_rows(test_rows);
  check_rows(dev_rows);
}

TEST_CASE("aggregate_runs: mean and population std across seeds, single seed std 0") {
  EvalReport a;
  a.model_id = "m";
  a.dataset = DatasetKind::BGQA1;
  a.kind = prompts::PromptKind::Text;
  a.seed = 0;
  a.headline = 50.0;
  EvalReport b = a;
  b.seed = 1;
  b.headline = 54.0;
  auto summary = eval::aggregate_runs({a, b});
  const auto& cell = summary.cells.at("m").at("bgqa1").at("text");
  CHECK(cell.mean == doctest::Approx(52.0));
  CHECK(cell.stddev == doctest::Approx(2.0));  // population std
  CHECK(cell.runs == 2);

  auto single = eval::aggregate_runs({a});
  CHECK(single.cells.at("m").at("bgqa1").at("text").stddev == 0.0);
}

TEST_CASE("aggregate_runs rejects mismatched dataset sets between kinds") {
  EvalReport text;
  text.model_id = "m";
  text.dataset = DatasetKind::BGQA1;
  text.kind = prompts::PromptKind::Text;
  EvalReport code = text;
  code.kind = prompts::PromptKind::CodeAnswer;
  code.dataset = DatasetKind::BGQA2;
  CHECK_THROWS_WITH_AS(eval::aggregate_runs({text, code}), doctest::Contains("mismatched"),
                       Error);
}

TEST_CASE("memory_error_rate partitions by correctness and reports absence") {
  std::vector<chain::ProbeResult> results;
  for (int i = 0; i < 8; ++i) {
    chain::ProbeResult r;
    r.instance_id = "inst";
    r.is_error = i < 2;  // 2 errors of 8 probes
    results.push_back(r);
  }
  std::map<std::string, bool> correctness = {{"inst", true}};
  auto rate = eval::memory_error_rate(results, correctness, true);
  REQUIRE(rate.has_value());
  CHECK(*rate == doctest::Approx(25.0));
  CHECK_FALSE(eval::memory_error_rate(results, correctness, false).has_value());
  CHECK_FALSE(eval::memory_error_rate({}, {}, true).has_value());
}

TEST_CASE("build_report scores classification and span datasets") {
  Instance yes = classification_instance("i1", DatasetKind::BGQA1, AnswerClass::Yes);
  Instance no = classification_instance("i2", DatasetKind::BGQA1, AnswerClass::No);
  auto t1 = ok_transcript("i1", prompts::PromptKind::Text, "Answer: yes", "yes");
  auto t2 = ok_transcript("i2", prompts::PromptKind::Text, "Answer: yes", "yes");
  auto report = eval::build_report("m", DatasetKind::BGQA1, prompts::PromptKind::Text, 0,
                                   {yes, no}, {t1, t2});
  REQUIRE(report.confusion.has_value());
  CHECK(report.confusion->total() == 2);
  CHECK(report.per_instance[0].correct);
  CHECK_FALSE(report.per_instance[1].correct);
  // yes: TP=1 FP=1 -> F1 = 2/3; no: FN=1 -> 0; macro = 1/3.
  CHECK(report.headline == doctest::Approx(100.0 / 3.0));

  chain::Transcript skipped;
  skipped.instance_id = "i3";
  skipped.status = chain::RunStatus::Skipped;
  Instance third = classification_instance("i3", DatasetKind::BGQA1, AnswerClass::Yes);
  auto with_skip = eval::build_report("m", DatasetKind::BGQA1, prompts::PromptKind::Text, 0,
                                      {yes, no, third}, {t1, t2, skipped});
  CHECK(with_skip.skipped == 1);
  CHECK(with_skip.headline == doctest::Approx(100.0 / 3.0));
}
