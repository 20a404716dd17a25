#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "codeprompt/eval.hpp"
#include "codeprompt/pseudocode.hpp"
#include "codeprompt/util.hpp"
#include "support.hpp"

using namespace codeprompt;
using namespace codeprompt::pseudo;

namespace {

// ---------------------------------------------------------------------------
// Random program generator for transform properties.
// ---------------------------------------------------------------------------

class ProgramGen {
 public:
  explicit ProgramGen(std::uint64_t seed) : rng_(seed, "program-gen") {}

  std::string next_program() {
    int n = 1 + int(rng_.next_below(12));
    std::string out;
    for (int i = 0; i < n; ++i) {
      switch (rng_.next_below(6)) {
        case 0:
          out += "# " + word() + " " + word() + " " + word() + "\n";
          break;
        case 1:
          out += "\n";
          break;
        case 2:
          out += word() + " = " + literal() + "\n";
          break;
        case 3: {
          out += "if " + condition() + ":\n";
          int body = 1 + int(rng_.next_below(3));
          for (int b = 0; b < body; ++b) out += "    " + word() + " = " + literal() + "\n";
          break;
        }
        case 4:
          out += word() + "(" + word() + ") = " + word() + "(" + word() + ") => " + word() + "(" +
                 word() + ")\n";
          break;
        default:
          out += word() + " = " + word() + " # " + word() + " trailing\n";
          break;
      }
    }
    return out;
  }

  std::uint64_t below(std::uint64_t bound) { return rng_.next_below(bound); }

 private:
  std::string word() {
    static const char* stems[] = {"eligible", "claim",  "benefit", "payment", "resident",
                                  "partner",  "income", "support", "housing", "applied"};
    std::string w = stems[rng_.next_below(10)];
    if (rng_.next_below(2)) w += "_" + std::string(stems[rng_.next_below(10)]);
    if (rng_.next_below(4) == 0) w += "_" + std::to_string(rng_.next_below(100));
    return w;
  }

  std::string literal() {
    switch (rng_.next_below(5)) {
      case 0: return "True";
      case 1: return "False";
      case 2: return "None";
      case 3: return std::to_string(rng_.next_below(5000));
      default: return "\"" + word() + " " + word() + "\"";
    }
  }

  std::string condition() {
    std::string c = word();
    std::uint64_t extra = rng_.next_below(3);
    for (std::uint64_t i = 0; i < extra; ++i) {
      c += (rng_.next_below(2) ? " and " : " or ");
      c += word();
    }
    if (rng_.next_below(4) == 0) c = "not " + c;
    return c;
  }

  util::CounterRng rng_;
};

int if_count(const PseudoProgram& p) {
  int n = 0;
  for (auto kind : kind_sequence(p))
    if (kind == StatementKind::If) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Independent metric oracles (naive, set/bag based).
// ---------------------------------------------------------------------------

double oracle_token_f1(const std::string& pred, const std::vector<std::string>& golds) {
  auto tokens = [](const std::string& s) {
    std::vector<std::string> out = eval::answer_tokens(s);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::string> p = tokens(pred);
  double best = 0.0;
  for (const auto& gold : golds) {
    std::vector<std::string> g = tokens(gold);
    if (p.empty() || g.empty()) {
      best = std::max(best, p.empty() && g.empty() ? 1.0 : 0.0);
      continue;
    }
    // Multiset intersection by two-pointer walk over sorted token lists.
    std::size_t i = 0, j = 0;
    int overlap = 0;
    while (i < p.size() && j < g.size()) {
      if (p[i] == g[j]) {
        ++overlap;
        ++i;
        ++j;
      } else if (p[i] < g[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    if (overlap == 0) continue;
    double precision = double(overlap) / double(p.size());
    double recall = double(overlap) / double(g.size());
    best = std::max(best, 2 * precision * recall / (precision + recall));
  }
  return best;
}

double oracle_macro_f1(const std::vector<AnswerClass>& preds,
                       const std::vector<AnswerClass>& golds) {
  std::set<AnswerClass> classes;
  for (auto c : preds)
    if (c != AnswerClass::Unknown) classes.insert(c);
  for (auto c : golds)
    if (c != AnswerClass::Unknown) classes.insert(c);
  double sum = 0.0;
  for (AnswerClass cls : classes) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      bool p = preds[i] == cls, g = golds[i] == cls;
      if (p && g) ++tp;
      if (p && !g) ++fp;
      if (!p && g) ++fn;
    }
    double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
    double recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
    sum += precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
  }
  return classes.empty() ? 0.0 : sum / double(classes.size());
}

std::string random_phrase(util::CounterRng* rng) {
  static const char* words[] = {"the", "within", "10", "days", "a",    "an",  "court",
                                "reply", "blue",   "fish", "apply", "form", "C2!", "10,000"};
  int n = int(rng->next_below(8));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += " ";
    out += words[rng->next_below(14)];
  }
  return out;
}

}  // namespace

TEST_CASE("property: anonymize is a bijection onto var_1..var_k preserving structure") {
  ProgramGen gen(11);
  for (int iter = 0; iter < 1000; ++iter) {
    PseudoProgram program = parse(gen.next_program());
    AnonymizeResult result = anonymize(program);

    CHECK(kind_sequence(result.program) == kind_sequence(program));
    CHECK(comment_texts(result.program) == comment_texts(program));

    std::set<std::string> sources, targets;
    for (const auto& [from, to] : result.mapping) {
      sources.insert(from);
      targets.insert(to);
    }
    REQUIRE(sources.size() == result.mapping.size());  // injective on names
    REQUIRE(targets.size() == result.mapping.size());
    for (std::size_t k = 0; k < result.mapping.size(); ++k) {
      CHECK(result.mapping[k].second == "var_" + std::to_string(k + 1));
    }
  }
}

TEST_CASE("property: strip_comments is idempotent and comment-free") {
  ProgramGen gen(22);
  for (int iter = 0; iter < 1000; ++iter) {
    PseudoProgram program = parse(gen.next_program());
    PseudoProgram once = strip_comments(program);
    CHECK(comment_texts(once).empty());
    CHECK(render(strip_comments(once)) == render(once));
  }
}

TEST_CASE("property: splice_random preserves comment statements byte-exactly") {
  // Trailing comments ride on code statements and are replaced with them;
  // standalone comment lines must survive untouched.
  auto standalone_comments = [](const PseudoProgram& p) {
    std::vector<std::string> out;
    for (const auto& s : p.statements) {
      if (s.kind == StatementKind::Comment) out.push_back(s.raw);
    }
    return out;
  };
  ProgramGen gen(33);
  std::string donor_src = gen.next_program() + "donor_only_flag = True\n";
  PseudoProgram donor = parse(donor_src);
  for (int iter = 0; iter < 1000; ++iter) {
    PseudoProgram program = parse(gen.next_program());
    PseudoProgram spliced = splice_random(program, donor, iter);
    CHECK(standalone_comments(spliced) == standalone_comments(program));
  }
}

TEST_CASE("property: reasoning_op_ratio in [0,1], zero iff no if statements") {
  ProgramGen gen(44);
  for (int iter = 0; iter < 1000; ++iter) {
    PseudoProgram program = parse(gen.next_program());
    double ratio = reasoning_op_ratio(program);
    CHECK(ratio >= 0.0);
    CHECK(ratio <= 1.0);
    CHECK((ratio == 0.0) == (if_count(program) == 0));
  }
}

TEST_CASE("property: parse(render(parse(t))) equals parse(t) on random programs") {
  ProgramGen gen(55);
  for (int iter = 0; iter < 500; ++iter) {
    std::string text = gen.next_program();
    PseudoProgram once = parse(text);
    PseudoProgram twice = parse(render(once));
    CHECK(render(once) == render(twice));
    CHECK(kind_sequence(once) == kind_sequence(twice));
  }
}

TEST_CASE("property: token_f1 agrees with the brute-force oracle on 1000 random pairs") {
  util::CounterRng rng(66, "token-f1-cases");
  for (int iter = 0; iter < 1000; ++iter) {
    std::string pred = random_phrase(&rng);
    std::vector<std::string> golds;
    int n_golds = 1 + int(rng.next_below(3));
    for (int g = 0; g < n_golds; ++g) golds.push_back(random_phrase(&rng));
    double got = eval::token_f1(pred, golds);
    double want = oracle_token_f1(pred, golds);
    CHECK(std::abs(got - want) <= 1e-12);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("property: token_f1 is invariant to token order, case and articles") {
  util::CounterRng rng(77, "token-f1-invariance");
  for (int iter = 0; iter < 300; ++iter) {
    std::string pred = random_phrase(&rng);
    std::string gold = random_phrase(&rng);
    double base = eval::token_f1(pred, {gold});
    // Shuffle predicted tokens.
    std::vector<std::string> toks = util::split(pred, ' ');
    for (std::size_t i = toks.size(); i > 1; --i) {
      std::swap(toks[i - 1], toks[rng.next_below(i)]);
    }
    std::string shuffled = util::join(toks, " ");
    CHECK(eval::token_f1(shuffled, {gold}) == doctest::Approx(base).epsilon(1e-12));
    std::string upper;
    for (char c : pred) upper += char(std::toupper(static_cast<unsigned char>(c)));
    CHECK(eval::token_f1(upper, {gold}) == doctest::Approx(base).epsilon(1e-12));
    CHECK(eval::token_f1("the " + pred, {gold}) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("property: macro_f1 agrees with the brute-force oracle on 1000 random cases") {
  util::CounterRng rng(88, "macro-f1-cases");
  const AnswerClass classes[] = {AnswerClass::Yes, AnswerClass::No, AnswerClass::NotEnoughInfo,
                                 AnswerClass::Unknown};
  for (int iter = 0; iter < 1000; ++iter) {
    std::size_t n = 1 + rng.next_below(20);
    std::vector<AnswerClass> golds, preds;
    for (std::size_t i = 0; i < n; ++i) {
      golds.push_back(classes[rng.next_below(3)]);  // golds are real classes
      preds.push_back(classes[rng.next_below(4)]);  // predictions may be unknown
    }
    double got = eval::macro_f1(preds, golds);
    double want = oracle_macro_f1(preds, golds);
    CHECK(std::abs(got - want) <= 1e-12);
  }
}
