#include <doctest.h>

#include <map>
#include <set>

#include "codeprompt/pseudocode.hpp"
#include "support.hpp"

using namespace codeprompt;
using namespace codeprompt::pseudo;

namespace {

int count_severity(const PseudoProgram& p, Severity s) {
  int n = 0;
  for (const auto& d : p.diagnostics)
    if (d.severity == s) ++n;
  return n;
}

}  // namespace

TEST_CASE("if block with three-conjunct condition") {
  auto p = parse(
      "if applicant_age >= 18 and entitled_inheritor and closest_relative:\n"
      "    can_apply_estate_administrator = True");
  REQUIRE(p.statements.size() == 1);
  const Statement& s = p.statements[0];
  CHECK(s.kind == StatementKind::If);
  CHECK(conjuncts(*s.condition).size() == 3);
  REQUIRE(s.body.size() == 1);
  CHECK(s.body[0].kind == StatementKind::Assign);
  CHECK(render_expr(*s.body[0].target) == "can_apply_estate_administrator");
}

TEST_CASE("question marker binds the question variable") {
  auto p = parse("can_apply_zero_VAT = None # This is the variable that answers the question.");
  REQUIRE(p.statements.size() == 1);
  CHECK(p.statements[0].kind == StatementKind::Assign);
  CHECK(p.statements[0].value->literal_kind == LiteralKind::None);
  REQUIRE(p.question_variable.has_value());
  CHECK(*p.question_variable == "can_apply_zero_VAT");
}

TEST_CASE("empty input parses to the empty program") {
  auto p = parse("");
  CHECK(p.statements.empty());
  CHECK(p.diagnostics.empty());
}

TEST_CASE("parser never rejects; junk becomes opaque with diagnostics") {
  auto p = parse("this is just prose, not code\n@@@\nx = = broken");
  CHECK(p.statements.size() == 3);
  for (const auto& s : p.statements) CHECK(s.kind == StatementKind::Opaque);
  CHECK(count_severity(p, Severity::Warning) == 3);
  CHECK_FALSE(p.has_fatal_diagnostics());
  CHECK(render(p) == "this is just prose, not code\n@@@\nx = = broken");
}

TEST_CASE("forbidden constructs are fatal diagnostics, not parse failures") {
  auto p = parse("for item in items:\n    x = True\ndef helper():\nclass Foo:\nwhile y:");
  CHECK(p.has_fatal_diagnostics());
  CHECK(count_severity(p, Severity::Fatal) == 4);
  // "format_x = True" must not trip the keyword check.
  auto ok = parse("format_x = True\nclassification = None\nwhilelist = False");
  CHECK_FALSE(ok.has_fatal_diagnostics());
}

TEST_CASE("render is byte-exact for untouched programs") {
  for (const char* rel :
       {"appendix_n/generated_code/condqa_guardian.txt", "appendix_n/generated_code/sharc_vat.txt",
        "appendix_n/generated_code/bgqa1_amberjack.txt", "appendix_n/code_blocks/predicate_rule.txt",
        "appendix_n/code_blocks/widow_benefits.txt"}) {
    std::string text = testsupport::fixture_text(rel);
    CAPTURE(rel);
    CHECK(render(parse(text)) == text);
  }
}

TEST_CASE("round-trip is a fixpoint") {
  std::string text = testsupport::fixture_text("appendix_n/generated_code/sharc_vat.txt");
  auto once = parse(text);
  auto twice = parse(render(once));
  CHECK(render(once) == render(twice));
  CHECK(kind_sequence(once) == kind_sequence(twice));
}

TEST_CASE("render of single synthesized comment") {
  PseudoProgram p;
  Statement c;
  c.kind = StatementKind::Comment;
  c.text = "x";
  p.statements.push_back(std::move(c));
  CHECK(render(p) == "# x");
  CHECK(render(PseudoProgram{}).empty());
}

TEST_CASE("anonymize maps names in first-occurrence order") {
  std::string text = testsupport::fixture_text("appendix_n/code_blocks/asylum_original.txt");
  auto result = anonymize(parse(text));
  // The pinned anonymous-code block drops the ':' after "if var_1"; the
  // renderer keeps the header syntactically complete.
  std::string expected = util::replace_all(
      testsupport::fixture_text("appendix_n/code_blocks/asylum_anonymous.txt"), "if var_1",
      "if var_1:");
  CHECK(render(result.program) == expected);
  REQUIRE(result.mapping.size() == 2);
  CHECK(result.mapping[0] ==
        std::pair<std::string, std::string>{"left_country_and_fear_persecution", "var_1"});
  CHECK(result.mapping[1] == std::pair<std::string, std::string>{"eligible_for_asylum", "var_2"});
}

TEST_CASE("anonymize: comments untouched, mapping bijective, repeats consistent") {
  auto p = parse(
      "# the flag controls eligibility\n"
      "flag = True\n"
      "if flag:\n"
      "    outcome = True\n"
      "outcome = False");
  auto result = anonymize(p);
  CHECK(result.mapping.size() == 2);
  CHECK(result.mapping[0].first == "flag");
  CHECK(result.mapping[0].second == "var_1");
  CHECK(result.mapping[1].second == "var_2");
  CHECK(comment_texts(result.program) == comment_texts(p));
  CHECK(kind_sequence(result.program) == kind_sequence(p));
  // Code lines carry no original names; the comment keeps its text.
  std::string code_only = render(strip_comments(result.program));
  CHECK(code_only.find("flag") == std::string::npos);
  CHECK(code_only.find("var_1 = True") != std::string::npos);
  CHECK(code_only.find("if var_1:") != std::string::npos);
  CHECK(render(result.program).find("# the flag controls eligibility") != std::string::npos);

  auto no_vars = parse("# only comments here\n\n# nothing else");
  auto unchanged = anonymize(no_vars);
  CHECK(render(unchanged.program) == render(no_vars));
  CHECK(unchanged.mapping.empty());
}

TEST_CASE("strip_comments removes comments but keeps the question variable") {
  std::string text = testsupport::fixture_text("appendix_n/generated_code/sharc_vat.txt");
  auto stripped = strip_comments(parse(text));
  for (auto kind : kind_sequence(stripped)) CHECK(kind != StatementKind::Comment);
  CHECK(comment_texts(stripped).empty());
  REQUIRE(stripped.question_variable.has_value());
  CHECK(*stripped.question_variable == "can_apply_zero_VAT");
  // idempotent
  CHECK(render(strip_comments(stripped)) == render(stripped));
  // all-comment program strips to blanks only
  auto all_comments = strip_comments(parse("# a\n# b"));
  CHECK(count_lines(all_comments).non_blank_lines == 0);
  // comment-free program unchanged
  std::string bare = "x = True\nif x:\n    y = False";
  CHECK(render(strip_comments(parse(bare))) == bare);
}

TEST_CASE("splice_random keeps comments byte-exact and takes donor code") {
  auto program = parse(testsupport::fixture_text("appendix_n/code_blocks/asylum_original.txt"));
  auto donor = parse(
      "# donor comment\n"
      "if value_of_property_gone_down_by_more_than_50:\n"
      "    eligible_to_claim = True\n"
      "    getting_housing_benefit = True");
  auto spliced = splice_random(program, donor, 0);
  CHECK(comment_texts(spliced) == comment_texts(program));
  std::string rendered = render(spliced);
  CHECK(rendered.find("value_of_property_gone_down_by_more_than_50") != std::string::npos);
  CHECK(rendered.find("left_country_and_fear_persecution") == std::string::npos);

  // Determinism under a fixed seed.
  CHECK(render(splice_random(program, donor, 42)) == render(splice_random(program, donor, 42)));

  // Donor without code statements is an error.
  CHECK_THROWS_AS(splice_random(program, parse("# just a comment"), 0), Error);
}

TEST_CASE("splice_random with donor == program reproduces the code as a multiset") {
  auto program = parse(
      "# first\n"
      "a = True\n"
      "# second\n"
      "if b:\n"
      "    c = True\n"
      "# third\n"
      "d = False");
  auto spliced = splice_random(program, program, 3);
  auto lines = [](const PseudoProgram& p) {
    std::multiset<std::string> out;
    for (const auto& line : util::split_lines(render(p))) {
      if (!line.empty() && line[0] != '#') out.insert(line);
    }
    return out;
  };
  CHECK(lines(spliced) == lines(program));
  CHECK(comment_texts(spliced) == comment_texts(program));
}

TEST_CASE("reasoning_op_ratio counts if lines over code lines") {
  std::string two_if_ten_code =
      "if a:\n    x1 = True\n    x2 = True\n    x3 = True\n    x4 = True\n"
      "if b:\n    y1 = True\n    y2 = True\n    y3 = True\n    y4 = True";
  CHECK(reasoning_op_ratio(parse(two_if_ten_code)) == doctest::Approx(0.2));
  CHECK(reasoning_op_ratio(parse("# only comments")) == 0.0);
  CHECK(reasoning_op_ratio(parse("")) == 0.0);
}

TEST_CASE("reasoning_op_ratio of the zero-VAT fixture matches the hand count") {
  // Hand count of the fixture: code lines are 4 top-level assignments, 3 if
  // headers, 3 body assignments and 1 trailing assignment = 11; if lines = 3.
  auto p = parse(testsupport::fixture_text("appendix_n/generated_code/sharc_vat.txt"));
  auto counts = count_lines(p);
  CHECK(counts.if_lines == 3);
  CHECK(counts.code_lines == 11);
  CHECK(reasoning_op_ratio(p) == doctest::Approx(3.0 / 11.0));
}

TEST_CASE("desnake") {
  CHECK(desnake("husband_pass_away") == "Key entity: husband pass away");
  CHECK(desnake("x") == "Key entity: x");
  CHECK(desnake("a_b_c") == "Key entity: a b c");
  CHECK_THROWS_AS(desnake(""), Error);
}

TEST_CASE("variable table derives kinds from literals") {
  auto p = parse(
      "flag = True\n"
      "count = 6\n"
      "label = \"within 10 days\"\n"
      "items = [\"a\", \"b\"]\n"
      "pending = None");
  auto table = variable_table(p);
  CHECK(table.at("flag") == VarKind::Boolean);
  CHECK(table.at("count") == VarKind::Number);
  CHECK(table.at("label") == VarKind::String);
  CHECK(table.at("items") == VarKind::StringList);
  CHECK(table.at("pending") == VarKind::None);
}

TEST_CASE("initial_values keeps first assignment and strips quotes") {
  auto p = parse(
      "state = True\n"
      "state = False\n"
      "when = \"now\"");
  auto values = initial_values(p);
  REQUIRE(values.size() == 2);
  CHECK(values[0].name == "state");
  CHECK(values[0].spelling == "True");
  CHECK(values[1].spelling == "now");
}

TEST_CASE("empty if body is a recorded diagnostic, not an error") {
  auto p = parse("if some_flag:\nnext_one = True");
  bool found = false;
  for (const auto& d : p.diagnostics) {
    if (d.message.find("empty body") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("predicate rules parse as rule definitions") {
  auto p = parse(testsupport::fixture_text("appendix_n/code_blocks/predicate_rule.txt"));
  REQUIRE(p.statements.size() == 2);
  CHECK(p.statements[0].kind == StatementKind::Comment);
  CHECK(p.statements[1].kind == StatementKind::RuleDef);
  CHECK(p.statements[1].value->op == "=>");
}
