#include <doctest.h>

#include "codeprompt/corpus.hpp"
#include "codeprompt/prompts.hpp"
#include "support.hpp"

using namespace codeprompt;
using prompts::Decoding;
using prompts::PromptKind;
using prompts::Role;

namespace {

const Decoding kDecoding{0.0, 512, {}};

pseudo::PseudoProgram load_code(const std::string& rel) {
  return pseudo::parse(testsupport::fixture_text(rel));
}

}  // namespace

TEST_CASE("golden: condqa text prompt matches byte-exactly") {
  Instance inst = testsupport::load_single(DatasetKind::CondQA,
                                           "appendix_n/instances/condqa_guardian.jsonl");
  auto bundle = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(bundle) == testsupport::fixture_text("appendix_n/golden/condqa_text.txt"));
}

TEST_CASE("golden: condqa code prompt matches byte-exactly") {
  Instance inst = testsupport::load_single(DatasetKind::CondQA,
                                           "appendix_n/instances/condqa_guardian.jsonl");
  auto code = load_code("appendix_n/generated_code/condqa_guardian.txt");
  CHECK_FALSE(code.has_fatal_diagnostics());
  auto bundle = prompts::build_code_answer(code, inst, {}, testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(bundle) == testsupport::fixture_text("appendix_n/golden/condqa_code.txt"));
}

TEST_CASE("golden: bgqa text and code prompts match byte-exactly") {
  Instance inst = testsupport::load_single(DatasetKind::BGQA1,
                                           "appendix_n/instances/bgqa1_amberjack.jsonl");
  auto text = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(text) == testsupport::fixture_text("appendix_n/golden/bgqa1_text.txt"));

  auto code = load_code("appendix_n/generated_code/bgqa1_amberjack.txt");
  auto bundle = prompts::build_code_answer(code, inst, {}, testsupport::templates(), kDecoding);
  std::string rendered = prompts::serialize(bundle);
  CHECK(rendered == testsupport::fixture_text("appendix_n/golden/bgqa1_code.txt"));
  // The rendering ends with the question predicate.
  CHECK(rendered.find("question = remove_piece(amberjack, carp)\n") ==
        rendered.size() - std::string("question = remove_piece(amberjack, carp)\n").size());
}

TEST_CASE("golden: sharc text and code prompts match byte-exactly") {
  Instance inst =
      testsupport::load_single(DatasetKind::ShARC, "appendix_n/instances/sharc_vat.jsonl");
  auto text = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(text) == testsupport::fixture_text("appendix_n/golden/sharc_text.txt"));

  auto code = load_code("appendix_n/generated_code/sharc_vat.txt");
  auto bundle = prompts::build_code_answer(code, inst, {}, testsupport::templates(), kDecoding);
  std::string rendered = prompts::serialize(bundle);
  CHECK(rendered == testsupport::fixture_text("appendix_n/golden/sharc_code.txt"));
  CHECK(rendered.find("can_apply_zero_VAT = \n") ==
        rendered.size() - std::string("can_apply_zero_VAT = \n").size());
}

TEST_CASE("golden: probe prompt matches byte-exactly and pins the verbatim probe line") {
  Instance inst = testsupport::load_single(DatasetKind::CondQA,
                                           "appendix_n/instances/condqa_guardian_yn.jsonl");
  auto base = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  std::string partial =
      "<p>Within 10 days of receiving your application the court will send you a case number and "
      "a date for a meeting to set out:</p>\n";
  auto probe = prompts::build_probe(base.messages, partial,
                                    "the children have been living with me for the last 4 years",
                                    prompts::ProbeMode::TextProbe, DatasetKind::CondQA,
                                    testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(probe) ==
        testsupport::fixture_text("appendix_n/golden/probe_condqa_text.txt"));
}

TEST_CASE("probe prompts per dataset and mode") {
  std::vector<prompts::Message> context = {{Role::System, "s"}, {Role::User, "u"}};
  auto bgqa = prompts::build_probe(context, "step\n", "the amberjack has a knife",
                                   prompts::ProbeMode::TextProbe, DatasetKind::BGQA2,
                                   testsupport::templates(), kDecoding);
  CHECK(bgqa.messages.back().content.find("Is it true that the amberjack has a knife?") !=
        std::string::npos);
  CHECK(bgqa.messages.back().content.find("`yes`, `no`, or `unknown`") != std::string::npos);

  auto code = prompts::build_probe(context, "step\n", "children_living_with_me_4_years",
                                   prompts::ProbeMode::CodeProbe, DatasetKind::CondQA,
                                   testsupport::templates(), kDecoding);
  CHECK(code.messages.back().content.find(
            "What is the value of the variable children_living_with_me_4_years?") !=
        std::string::npos);

  CHECK_THROWS_AS(prompts::build_probe(context, "step\n", "", prompts::ProbeMode::TextProbe,
                                       DatasetKind::CondQA, testsupport::templates(), kDecoding),
                  Error);
}

TEST_CASE("demonstrations appear as alternating user/assistant pairs") {
  auto pool = corpus::load_dataset(DatasetKind::CondQA,
                                   testsupport::fixture("datasets/condqa_train.jsonl"));
  auto demos = corpus::sample_demonstrations(pool, 0, 1);
  REQUIRE(demos.size() == 3);
  Instance live = testsupport::load_single(DatasetKind::CondQA,
                                           "appendix_n/instances/condqa_guardian.jsonl");
  auto bundle = prompts::build_text(live, demos, testsupport::templates(), kDecoding);
  REQUIRE(bundle.messages.size() == 1 + 2 * 3 + 1);
  CHECK(bundle.messages[0].role == Role::System);
  for (std::size_t i = 1; i + 1 < bundle.messages.size(); i += 2) {
    CHECK(bundle.messages[i].role == Role::User);
    CHECK(bundle.messages[i + 1].role == Role::Assistant);
    CHECK(bundle.messages[i + 1].content.find("Answer: ") != std::string::npos);
  }
  CHECK(bundle.messages.back().role == Role::User);
}

TEST_CASE("zero demos yields system plus a single user message") {
  Instance inst = testsupport::load_single(DatasetKind::BGQA1,
                                           "appendix_n/instances/bgqa1_amberjack.jsonl");
  auto bundle = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  REQUIRE(bundle.messages.size() == 2);
  CHECK(bundle.messages[0].role == Role::System);
  CHECK(bundle.messages[1].role == Role::User);
}

TEST_CASE("text demos require the chain of thought their template needs") {
  Instance live = testsupport::load_single(DatasetKind::BGQA1,
                                           "appendix_n/instances/bgqa1_amberjack.jsonl");
  Instance demo = live;
  demo.gold_cot.clear();
  CHECK_THROWS_WITH_AS(prompts::build_text(live, {demo}, testsupport::templates(), kDecoding),
                       doctest::Contains("chain of thought"), Error);
}

TEST_CASE("code translation bundles count messages per the demo count") {
  Instance inst = testsupport::load_single(DatasetKind::CondQA,
                                           "appendix_n/instances/condqa_guardian.jsonl");
  std::vector<prompts::TranslationDemo> demos;
  for (int i = 0; i < 4; ++i) {
    demos.push_back({"source " + std::to_string(i), "x = True"});
  }
  auto bundle = prompts::build_code_translation(inst, demos, testsupport::templates(), kDecoding);
  CHECK(bundle.messages.size() == 1 + 4 * 2 + 1);  // system + 4 pairs + live input

  demos.resize(3);
  Instance bg = testsupport::load_single(DatasetKind::BGQA1,
                                         "appendix_n/instances/bgqa1_amberjack.jsonl");
  auto bg_bundle = prompts::build_code_translation(bg, demos, testsupport::templates(), kDecoding);
  CHECK(bg_bundle.messages.size() == 8);

  CHECK_THROWS_AS(prompts::build_code_translation(inst, {}, testsupport::templates(), kDecoding),
                  Error);
  std::vector<prompts::TranslationDemo> bad = {{"src", "for x in y:\n    z = True"}};
  CHECK_THROWS_WITH_AS(
      prompts::build_code_translation(inst, bad, testsupport::templates(), kDecoding),
      doctest::Contains("dialect validation"), Error);
}

TEST_CASE("code answer errors: empty program, missing question variable") {
  Instance sharc =
      testsupport::load_single(DatasetKind::ShARC, "appendix_n/instances/sharc_vat.jsonl");
  CHECK_THROWS_WITH_AS(prompts::build_code_answer(pseudo::PseudoProgram{}, sharc, {},
                                                  testsupport::templates(), kDecoding),
                       doctest::Contains("empty program"), Error);
  auto no_marker = pseudo::parse("x = True");
  CHECK_THROWS_WITH_AS(
      prompts::build_code_answer(no_marker, sharc, {}, testsupport::templates(), kDecoding),
      doctest::Contains("question variable"), Error);
}

TEST_CASE("back-translation bundle needs exactly four demos") {
  auto code = load_code("appendix_n/code_blocks/estate_administrator.txt");
  std::vector<prompts::BackTranslationDemo> three(3, {"c", "t"});
  CHECK_THROWS_AS(
      prompts::build_back_translation(code, three, testsupport::templates(), kDecoding), Error);
  std::vector<prompts::BackTranslationDemo> four(4, {"c", "t"});
  auto bundle = prompts::build_back_translation(code, four, testsupport::templates(), kDecoding);
  CHECK(bundle.messages.size() == 1 + 4 * 2 + 1);
  CHECK(bundle.messages.back().content == testsupport::fixture_text(
                                              "appendix_n/code_blocks/estate_administrator.txt"));
}

TEST_CASE("assembly is a pure function of its inputs") {
  Instance inst =
      testsupport::load_single(DatasetKind::ShARC, "appendix_n/instances/sharc_vat.jsonl");
  auto one = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  auto two = prompts::build_text(inst, {}, testsupport::templates(), kDecoding);
  CHECK(prompts::serialize(one) == prompts::serialize(two));
}

TEST_CASE("template hashes are stable and name every file") {
  const auto& set = testsupport::templates();
  CHECK(set.version() == "paper-v1");
  CHECK(set.hashes().count("condqa_text_user") == 1);
  CHECK(set.set_hash() == testsupport::templates().set_hash());
  CHECK_THROWS_AS(set.get("no_such_template"), Error);
  CHECK(prompts::TemplateSet::expand_text("{a} and {missing}", {{"a", "x"}}) == "x and {missing}");
}
