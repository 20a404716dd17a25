#include "codeprompt/chain.hpp"

#include <algorithm>
#include <cctype>

#include "codeprompt/corpus.hpp"
#include "codeprompt/util.hpp"

namespace codeprompt::chain {

namespace {

long estimated_tokens(const prompts::PromptBundle& bundle) {
  std::size_t chars = 0;
  for (const auto& m : bundle.messages) chars += m.content.size();
  return long((chars + 3) / 4);
}

llm::LlmExchange complete(const prompts::PromptBundle& bundle, const ChainConfig& config) {
  llm::LlmRequest request{config.model_id, bundle};
  return config.completer->complete(request, config.scope);
}

// Splits a reply into (cot, answer) at the last answer marker.
void split_reply(const std::string& reply, std::string* cot, std::string* answer) {
  std::size_t pos = reply.rfind("Answer:");
  if (pos == std::string::npos) {
    *cot = reply;
    answer->clear();
    return;
  }
  std::size_t cut = pos;
  if (cut > 0 && reply[cut - 1] == '#') --cut;  // "#Answer:" marker
  *cot = util::trim(reply.substr(0, cut));
  *answer = util::trim(reply.substr(pos + 7));
}

Transcript make_skipped(const Instance& instance, prompts::PromptKind kind, std::string reason) {
  Transcript t;
  t.instance_id = instance.id;
  t.kind = kind;
  t.status = RunStatus::Skipped;
  t.note = std::move(reason);
  return t;
}

Transcript make_failed(const Instance& instance, prompts::PromptKind kind, std::string reason) {
  Transcript t;
  t.instance_id = instance.id;
  t.kind = kind;
  t.status = RunStatus::Failed;
  t.note = std::move(reason);
  return t;
}

bool overflows_context(const prompts::PromptBundle& bundle, const ChainConfig& config) {
  return config.context_token_limit > 0 && estimated_tokens(bundle) > config.context_token_limit;
}

// Appends atomic statements after every decomposed unit of the instance.
Instance augment_with_atomic_statements(const Instance& instance, const ChainConfig& config) {
  Instance augmented = instance;
  if (is_bgqa(instance.dataset)) {
    // Only the facts are decomposed; rules keep their structure.
    for (const auto& fact : stated_facts(instance)) {
      std::vector<std::string> statements = decompose_sentence(fact, config);
      if (statements.empty()) continue;
      std::string joined = util::join(statements, " ");
      augmented.prerendered =
          util::replace_all(augmented.prerendered, fact, fact + "\n" + joined);
    }
    return augmented;
  }
  for (auto& section : augmented.document) {
    std::vector<std::string> elements = util::split(section.text, '\n');
    std::string rebuilt;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (i) rebuilt += "\n";
      rebuilt += elements[i];
      if (elements[i].empty()) continue;
      std::vector<std::string> statements = decompose_sentence(elements[i], config);
      if (!statements.empty()) rebuilt += "\n" + util::join(statements, " ");
    }
    section.text = rebuilt;
  }
  return augmented;
}

}  // namespace

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Skipped: return "skipped";
    case RunStatus::Failed: return "failed";
  }
  return "ok";
}

std::vector<std::string> split_cot(const std::string& text) {
  std::vector<std::string> steps;
  for (const auto& line : util::split_lines(text)) {
    if (!util::trim(line).empty()) steps.push_back(line);
  }
  return steps;
}

std::vector<std::string> decompose_sentence(const std::string& sentence, const ChainConfig& config) {
  prompts::PromptBundle bundle = prompts::build_atomic_decomposition(
      sentence, config.atomic_demos, *config.templates, config.decoding_answer);
  llm::LlmExchange exchange = complete(bundle, config);
  std::vector<std::string> statements;
  for (const auto& line : util::split_lines(exchange.response_text)) {
    if (!util::trim(line).empty()) statements.push_back(util::trim(line));
  }
  return statements;
}

Transcript run_text_chain(const Instance& instance, const ChainConfig& config,
                          prompts::PromptKind kind) {
  if (kind == prompts::PromptKind::AtomicStatements && instance.dataset == DatasetKind::ShARC) {
    return make_skipped(instance, kind, "ablations are not run on sharc");
  }

  Transcript t;
  t.instance_id = instance.id;
  t.kind = kind;
  try {
    Instance subject = kind == prompts::PromptKind::AtomicStatements
                           ? augment_with_atomic_statements(instance, config)
                           : instance;
    prompts::PromptBundle bundle = prompts::build_text(subject, config.answer_demos,
                                                       *config.templates, config.decoding_answer,
                                                       kind);
    if (overflows_context(bundle, config)) {
      return make_failed(instance, kind,
                         "context overflow: estimated " + std::to_string(estimated_tokens(bundle)) +
                             " tokens > " + std::to_string(config.context_token_limit));
    }
    llm::LlmExchange exchange = complete(bundle, config);
    t.exchanges.push_back(exchange);
    t.answer_context = bundle.messages;

    if (instance.dataset == DatasetKind::ShARC) {
      // ShARC text prompts answer with the label directly, no CoT.
      t.raw_answer_text = util::trim(exchange.response_text);
    } else {
      split_reply(exchange.response_text, &t.cot_text, &t.raw_answer_text);
      t.cot_steps = split_cot(t.cot_text);
    }
  } catch (const FixtureMissingError&) {
    throw;  // replay misses must fail the run loudly
  } catch (const Error& e) {
    return make_failed(instance, kind, e.what());
  }
  return t;
}

Transcript run_code_chain(const Instance& instance, const ChainConfig& config,
                          prompts::PromptKind kind) {
  if (instance.dataset == DatasetKind::ShARC && kind != prompts::PromptKind::CodeAnswer) {
    return make_skipped(instance, kind, "ablations are not run on sharc");
  }
  bool perturbation = kind == prompts::PromptKind::NoComments ||
                      kind == prompts::PromptKind::AnonymizedCode ||
                      kind == prompts::PromptKind::RandomCode;
  if (perturbation && instance.dataset == DatasetKind::CondQA &&
      instance.answer_class == AnswerClass::Span) {
    return make_skipped(instance, kind, "condqa perturbations run on the yes/no partition only");
  }

  Transcript t;
  t.instance_id = instance.id;
  t.kind = kind;
  try {
    prompts::PromptBundle translate = prompts::build_code_translation(
        instance, config.translation_demos, *config.templates, config.decoding_translate);
    if (overflows_context(translate, config)) {
      return make_failed(instance, kind,
                         "context overflow: estimated " + std::to_string(estimated_tokens(translate)) +
                             " tokens > " + std::to_string(config.context_token_limit));
    }
    llm::LlmExchange first = complete(translate, config);
    t.exchanges.push_back(first);
    t.generated_code_text = first.response_text;
    pseudo::PseudoProgram program = pseudo::parse(first.response_text);
    if (config.strict_dialect && program.has_fatal_diagnostics()) {
      t.status = RunStatus::Failed;
      t.note = "failed-translation: generated code has fatal dialect diagnostics";
      t.generated_code = std::move(program);
      return t;
    }

    pseudo::PseudoProgram answer_program;
    switch (kind) {
      case prompts::PromptKind::AnonymizedCode:
        answer_program = pseudo::anonymize(program).program;
        break;
      case prompts::PromptKind::NoComments:
        answer_program = pseudo::strip_comments(program);
        break;
      case prompts::PromptKind::RandomCode: {
        if (!config.donor_pool || config.donor_pool->empty()) {
          throw Error("random-code ablation needs a donor pool");
        }
        util::CounterRng rng(config.seed, "donor/" + instance.id);
        const auto& donor = (*config.donor_pool)[std::size_t(
            rng.next_below(config.donor_pool->size()))];
        answer_program = pseudo::splice_random(program, pseudo::parse(donor.code), config.seed);
        break;
      }
      case prompts::PromptKind::BackTranslatedCode: {
        prompts::PromptBundle back = prompts::build_back_translation(
            program, config.back_translation_demos, *config.templates, config.decoding_translate);
        llm::LlmExchange back_exchange = complete(back, config);
        t.exchanges.push_back(back_exchange);
        answer_program = pseudo::parse(back_exchange.response_text);
        break;
      }
      default:
        answer_program = program;
        break;
    }

    prompts::PromptBundle answer = prompts::build_code_answer(
        answer_program, instance, config.code_demos, *config.templates, config.decoding_answer, kind);
    if (overflows_context(answer, config)) {
      return make_failed(instance, kind,
                         "context overflow: estimated " + std::to_string(estimated_tokens(answer)) +
                             " tokens > " + std::to_string(config.context_token_limit));
    }
    llm::LlmExchange second = complete(answer, config);
    t.exchanges.push_back(second);
    t.answer_context = answer.messages;
    t.generated_code = std::move(program);

    if (instance.dataset == DatasetKind::ShARC) {
      // The reply completes "<question_variable> = ".
      t.raw_answer_text = util::trim(second.response_text);
    } else {
      split_reply(second.response_text, &t.cot_text, &t.raw_answer_text);
      t.cot_steps = split_cot(t.cot_text);
    }
  } catch (const FixtureMissingError&) {
    throw;
  } catch (const Error& e) {
    return make_failed(instance, kind, e.what());
  }
  return t;
}

Transcript run_chain(const Instance& instance, const ChainConfig& config, prompts::PromptKind kind) {
  if (prompts::is_code_chain(kind)) return run_code_chain(instance, config, kind);
  return run_text_chain(instance, config, kind);
}

// ---------------------------------------------------------------------------
// Probes
// ---------------------------------------------------------------------------

std::string normalize_reply(const std::string& text) {
  std::string collapsed;
  for (char c : text) {
    if (std::ispunct(static_cast<unsigned char>(c)) && c != '_') continue;
    collapsed.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  }
  collapsed = util::collapse_whitespace(collapsed);
  if (collapsed == "yes") return "true";
  if (collapsed == "no") return "false";
  return collapsed;
}

std::vector<std::pair<std::string, std::string>> probe_targets(const Instance& instance,
                                                               const Transcript& transcript,
                                                               prompts::ProbeMode mode,
                                                               const ChainConfig& config) {
  std::vector<std::pair<std::string, std::string>> targets;
  if (is_bgqa(instance.dataset)) {
    // Facts are stated as true and queried verbatim in both modes.
    for (const auto& fact : stated_facts(instance)) targets.emplace_back(fact, "yes");
    return targets;
  }
  if (instance.dataset != DatasetKind::CondQA) {
    throw Error("probe_targets: probing is defined for BGQA and CondQA only");
  }
  if (mode == prompts::ProbeMode::TextProbe) {
    // Key entities are atomic statements of the scenario, all stated as true.
    for (const auto& statement : decompose_sentence(instance.scenario, config)) {
      targets.emplace_back(statement, "True");
    }
    return targets;
  }
  if (!transcript.generated_code) {
    throw Error("probe_targets: code probes need the transcript's generated code");
  }
  for (const auto& value : pseudo::initial_values(*transcript.generated_code)) {
    if (value.kind == pseudo::LiteralKind::None) continue;  // unknown / question variable
    targets.emplace_back(value.name, value.spelling);
  }
  return targets;
}

ProbeSession run_probe_session(const Instance& instance, const Transcript& transcript,
                               prompts::ProbeMode mode, const ProbeBudget& budget,
                               const ChainConfig& config) {
  ProbeSession session;
  if (transcript.cot_steps.empty()) {
    session.note = "transcript has no reasoning steps";
    return session;
  }

  std::vector<std::pair<std::string, std::string>> targets =
      probe_targets(instance, transcript, mode, config);
  std::size_t n_entities = targets.size();
  if (budget.max_entities > 0) n_entities = std::min(n_entities, std::size_t(budget.max_entities));
  std::size_t n_steps = transcript.cot_steps.size();
  if (budget.max_steps > 0) n_steps = std::min(n_steps, std::size_t(budget.max_steps));

  for (std::size_t step = 0; step < n_steps; ++step) {
    std::string partial;
    for (std::size_t i = 0; i <= step; ++i) partial += transcript.cot_steps[i] + "\n";
    for (std::size_t e = 0; e < n_entities; ++e) {
      const auto& [target, expected] = targets[e];
      prompts::PromptBundle bundle =
          prompts::build_probe(transcript.answer_context, partial, target, mode, instance.dataset,
                               *config.templates, config.decoding_probe);
      llm::LlmExchange exchange = complete(bundle, config);
      ProbeResult result;
      result.instance_id = instance.id;
      result.step_index = int(step);
      result.target = target;
      result.expected = expected;
      result.reply_raw = exchange.response_text;
      result.reply_norm = normalize_reply(exchange.response_text);
      result.is_error = result.reply_norm != normalize_reply(expected);
      session.results.push_back(std::move(result));
    }
  }
  return session;
}

}  // namespace codeprompt::chain
