#include "codeprompt/prompts.hpp"

#include "codeprompt/corpus.hpp"
#include "codeprompt/util.hpp"

namespace codeprompt::prompts {

namespace {

std::string dataset_prefix(DatasetKind kind) {
  if (is_bgqa(kind)) return "bgqa";
  return kind == DatasetKind::CondQA ? "condqa" : "sharc";
}

std::string scenario_question(const Instance& instance) {
  if (instance.scenario.empty()) return instance.question;
  return instance.scenario + " " + instance.question;
}

std::string join_sections(const std::vector<DocumentSection>& sections) {
  std::vector<std::string> texts;
  texts.reserve(sections.size());
  for (const auto& s : sections) texts.push_back(s.text);
  return util::join(texts, "\n\n");
}

std::string history_block(const Instance& instance) {
  std::vector<std::string> turns;
  turns.reserve(instance.history.size());
  for (const auto& turn : instance.history) {
    turns.push_back("Q: " + turn.question + "\n\nA: " + turn.answer);
  }
  return util::join(turns, "\n\n");
}

std::string document_block(const Instance& instance) {
  if (instance.dataset == DatasetKind::CondQA) {
    return join_sections(corpus::oracle_retrieve(instance));
  }
  return join_sections(instance.document);
}

std::string answer_format(const Instance& instance, const TemplateSet& templates, bool code_flavor) {
  const char* variant = instance.answer_class == AnswerClass::Span ? "span" : "yesno";
  std::string name = code_flavor ? std::string("condqa_code_answer_format_") + variant
                                 : std::string("condqa_answer_format_") + variant;
  return templates.get(name);
}

std::string first_gold(const Instance& instance) {
  if (instance.gold_answers.empty()) throw Error("instance " + instance.id + " has no gold answer");
  return instance.gold_answers.front();
}

std::string sharc_code_label(const Instance& instance) {
  switch (instance.answer_class) {
    case AnswerClass::Yes: return "True";
    case AnswerClass::No: return "False";
    default: return "None";
  }
}

std::string code_body(const pseudo::PseudoProgram& program) { return pseudo::render(program); }

// User message of a code-answer prompt for one (instance, program) pair.
std::string code_answer_user(const pseudo::PseudoProgram& program, const Instance& instance,
                             const TemplateSet& templates) {
  if (program.statements.empty()) {
    throw Error("build_code_answer: empty program for instance " + instance.id);
  }
  switch (instance.dataset) {
    case DatasetKind::CondQA:
      return templates.expand("condqa_code_user",
                              {{"scenario_question", scenario_question(instance)},
                               {"code", code_body(program)},
                               {"answer_format", answer_format(instance, templates, true)}});
    case DatasetKind::ShARC: {
      if (!program.question_variable) {
        throw Error("build_code_answer: instance " + instance.id +
                    ": generated code declares no question variable");
      }
      return templates.expand("sharc_code_user", {{"code", code_body(program)},
                                                  {"question_variable", *program.question_variable}});
    }
    default:
      return templates.expand("bgqa_code_user", {{"code", code_body(program)}});
  }
}

}  // namespace

std::string to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> role_from_string(const std::string& name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  return std::nullopt;
}

std::string to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::Text: return "text";
    case PromptKind::CodeTranslate: return "code_translate";
    case PromptKind::CodeAnswer: return "code";
    case PromptKind::AtomicStatements: return "atomic_statements";
    case PromptKind::BackTranslatedCode: return "back_translated_code";
    case PromptKind::AnonymizedCode: return "anonymized_code";
    case PromptKind::RandomCode: return "random_code";
    case PromptKind::NoComments: return "no_comments";
    case PromptKind::Probe: return "probe";
  }
  return "text";
}

std::optional<PromptKind> prompt_kind_from_string(const std::string& name) {
  std::string n = util::to_lower(name);
  if (n == "text") return PromptKind::Text;
  if (n == "code" || n == "code_answer") return PromptKind::CodeAnswer;
  if (n == "code_translate") return PromptKind::CodeTranslate;
  if (n == "atomic_statements" || n == "atomic") return PromptKind::AtomicStatements;
  if (n == "back_translated_code" || n == "backtranslated" || n == "nl_code")
    return PromptKind::BackTranslatedCode;
  if (n == "anonymized_code" || n == "anonymized") return PromptKind::AnonymizedCode;
  if (n == "random_code" || n == "random") return PromptKind::RandomCode;
  if (n == "no_comments" || n == "nocomments") return PromptKind::NoComments;
  if (n == "probe") return PromptKind::Probe;
  return std::nullopt;
}

bool uses_code_answer(PromptKind kind) {
  switch (kind) {
    case PromptKind::CodeAnswer:
    case PromptKind::BackTranslatedCode:
    case PromptKind::AnonymizedCode:
    case PromptKind::RandomCode:
    case PromptKind::NoComments:
      return true;
    default:
      return false;
  }
}

bool is_code_chain(PromptKind kind) { return uses_code_answer(kind); }

std::string serialize(const PromptBundle& bundle) {
  std::string out;
  for (const auto& message : bundle.messages) {
    out += "[" + to_string(message.role) + "]\n" + message.content + "\n";
  }
  return out;
}

std::string text_body(const Instance& instance, const TemplateSet& templates) {
  switch (instance.dataset) {
    case DatasetKind::CondQA:
      return templates.expand("condqa_text_user",
                              {{"scenario_question", scenario_question(instance)},
                               {"document", document_block(instance)},
                               {"answer_format", answer_format(instance, templates, false)}});
    case DatasetKind::ShARC:
      return templates.expand("sharc_text_user",
                              {{"scenario_question", scenario_question(instance)},
                               {"document", document_block(instance)},
                               {"history", history_block(instance)},
                               {"question", instance.question}});
    default:
      return templates.expand("bgqa_text_user", {{"prerendered", instance.prerendered}});
  }
}

std::string translation_source(const Instance& instance, const TemplateSet& templates) {
  switch (instance.dataset) {
    case DatasetKind::CondQA:
      return templates.expand("translate_condqa_user",
                              {{"scenario_question", scenario_question(instance)},
                               {"document", document_block(instance)}});
    case DatasetKind::ShARC:
      return templates.expand("translate_sharc_user",
                              {{"scenario_question", scenario_question(instance)},
                               {"document", document_block(instance)},
                               {"history", history_block(instance)}});
    default:
      return templates.expand("translate_bgqa_user", {{"prerendered", instance.prerendered}});
  }
}

std::string demo_target(const Instance& instance, PromptKind kind, const TemplateSet& templates) {
  bool code = uses_code_answer(kind);
  switch (instance.dataset) {
    case DatasetKind::CondQA: {
      if (instance.gold_cot.empty()) {
        throw Error("demonstration " + instance.id + " has no chain of thought");
      }
      return templates.expand(code ? "condqa_code_target" : "condqa_text_target",
                              {{"cot", instance.gold_cot}, {"answer", first_gold(instance)}});
    }
    case DatasetKind::ShARC:
      return templates.expand(code ? "sharc_code_target" : "sharc_text_target",
                              {{"answer", code ? sharc_code_label(instance) : first_gold(instance)}});
    default: {
      if (instance.gold_cot.empty()) {
        throw Error("demonstration " + instance.id + " has no chain of thought");
      }
      return templates.expand(code ? "bgqa_code_target" : "bgqa_text_target",
                              {{"cot", instance.gold_cot}});
    }
  }
}

PromptBundle build_text(const Instance& instance, const std::vector<Instance>& demos,
                        const TemplateSet& templates, const Decoding& decoding,
                        PromptKind purpose) {
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = purpose;
  bundle.messages.push_back(
      {Role::System, templates.get(dataset_prefix(instance.dataset) + "_text_system")});
  for (const auto& demo : demos) {
    bundle.messages.push_back({Role::User, text_body(demo, templates)});
    bundle.messages.push_back({Role::Assistant, demo_target(demo, PromptKind::Text, templates)});
  }
  bundle.messages.push_back({Role::User, text_body(instance, templates)});
  return bundle;
}

PromptBundle build_code_translation(const Instance& instance,
                                    const std::vector<TranslationDemo>& demos,
                                    const TemplateSet& templates, const Decoding& decoding) {
  if (demos.empty()) {
    throw Error("build_code_translation: no demonstrations for instance " + instance.id);
  }
  for (const auto& demo : demos) {
    pseudo::PseudoProgram program = pseudo::parse(demo.code);
    if (program.has_fatal_diagnostics()) {
      throw Error("build_code_translation: demonstration code fails dialect validation");
    }
  }
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = PromptKind::CodeTranslate;
  bundle.messages.push_back(
      {Role::System, templates.get("translate_" + dataset_prefix(instance.dataset) + "_system")});
  for (const auto& demo : demos) {
    bundle.messages.push_back({Role::User, demo.source});
    bundle.messages.push_back({Role::Assistant, demo.code});
  }
  bundle.messages.push_back({Role::User, translation_source(instance, templates)});
  return bundle;
}

PromptBundle build_code_answer(const pseudo::PseudoProgram& code, const Instance& instance,
                               const std::vector<CodeDemo>& demos, const TemplateSet& templates,
                               const Decoding& decoding, PromptKind purpose) {
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = purpose;
  bundle.messages.push_back(
      {Role::System, templates.get(dataset_prefix(instance.dataset) + "_code_system")});
  for (const auto& demo : demos) {
    pseudo::PseudoProgram demo_program = pseudo::parse(demo.code);
    bundle.messages.push_back({Role::User, code_answer_user(demo_program, demo.instance, templates)});
    bundle.messages.push_back({Role::Assistant, demo_target(demo.instance, purpose, templates)});
  }
  bundle.messages.push_back({Role::User, code_answer_user(code, instance, templates)});
  return bundle;
}

PromptBundle build_back_translation(const pseudo::PseudoProgram& code,
                                    const std::vector<BackTranslationDemo>& demos,
                                    const TemplateSet& templates, const Decoding& decoding) {
  if (demos.size() != 4) {
    throw Error("build_back_translation: expected exactly 4 demonstrations, got " +
                std::to_string(demos.size()));
  }
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = PromptKind::BackTranslatedCode;
  bundle.messages.push_back({Role::System, templates.get("backtranslate_system")});
  for (const auto& demo : demos) {
    bundle.messages.push_back({Role::User, demo.code});
    bundle.messages.push_back({Role::Assistant, demo.text});
  }
  bundle.messages.push_back({Role::User, code_body(code)});
  return bundle;
}

PromptBundle build_probe(const std::vector<Message>& context, const std::string& partial_cot,
                         const std::string& target, ProbeMode mode, DatasetKind dataset,
                         const TemplateSet& templates, const Decoding& decoding) {
  if (target.empty()) throw Error("build_probe: empty target");
  std::string line;
  if (is_bgqa(dataset)) {
    line = templates.expand("probe_bgqa", {{"fact", target}});
  } else if (dataset == DatasetKind::CondQA) {
    line = mode == ProbeMode::TextProbe
               ? templates.expand("probe_condqa_text", {{"fact", target}})
               : templates.expand("probe_condqa_code", {{"var", target}});
  } else {
    throw Error("build_probe: probing is defined for BGQA and CondQA only");
  }
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = PromptKind::Probe;
  bundle.messages = context;
  bundle.messages.push_back({Role::Assistant, partial_cot});
  bundle.messages.push_back({Role::User, line});
  return bundle;
}

PromptBundle build_atomic_decomposition(const std::string& sentence,
                                        const std::vector<std::pair<std::string, std::string>>& demos,
                                        const TemplateSet& templates, const Decoding& decoding) {
  PromptBundle bundle;
  bundle.decoding = decoding;
  bundle.purpose = PromptKind::AtomicStatements;
  bundle.messages.push_back({Role::System, templates.get("atomic_system")});
  for (const auto& [demo_sentence, statements] : demos) {
    bundle.messages.push_back({Role::User, templates.expand("atomic_user", {{"sentence", demo_sentence}})});
    bundle.messages.push_back({Role::Assistant, statements});
  }
  bundle.messages.push_back({Role::User, templates.expand("atomic_user", {{"sentence", sentence}})});
  return bundle;
}

}  // namespace codeprompt::prompts
