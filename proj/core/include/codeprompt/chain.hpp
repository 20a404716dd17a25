#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codeprompt/llm.hpp"
#include "codeprompt/prompts.hpp"
#include "codeprompt/pseudocode.hpp"
#include "codeprompt/types.hpp"

namespace codeprompt::chain {

enum class RunStatus { Ok, Skipped, Failed };
std::string to_string(RunStatus status);

struct Transcript {
  std::string instance_id;
  prompts::PromptKind kind = prompts::PromptKind::Text;
  RunStatus status = RunStatus::Ok;
  std::string note;  // skip reason or failure description

  std::vector<llm::LlmExchange> exchanges;
  std::optional<pseudo::PseudoProgram> generated_code;  // translation output, code chains
  std::string generated_code_text;
  std::string cot_text;
  std::vector<std::string> cot_steps;
  std::string raw_answer_text;  // text after the answer marker / completion cue

  // Messages of the final answer prompt; probes replay these as context.
  std::vector<prompts::Message> answer_context;
};

struct ChainConfig {
  std::string model_id;
  const prompts::TemplateSet* templates = nullptr;
  llm::Completer* completer = nullptr;
  std::string scope;  // fixture shard scope, normally the dataset id

  std::vector<Instance> answer_demos;                  // text prompts
  std::vector<prompts::CodeDemo> code_demos;           // code answer prompts
  std::vector<prompts::TranslationDemo> translation_demos;
  std::vector<prompts::BackTranslationDemo> back_translation_demos;
  std::vector<std::pair<std::string, std::string>> atomic_demos;
  const std::vector<prompts::TranslationDemo>* donor_pool = nullptr;  // random-code ablation

  prompts::Decoding decoding_translate{0.0, 1024, {}};
  prompts::Decoding decoding_answer{0.0, 512, {}};
  prompts::Decoding decoding_probe{0.0, 16, {}};

  long context_token_limit = 16384;  // estimated tokens; overflow fails the instance
  bool strict_dialect = false;       // fatal diagnostics fail the translation
  std::uint64_t seed = 0;
};

// One-step text chain (also runs the atomic-statements ablation).
Transcript run_text_chain(const Instance& instance, const ChainConfig& config,
                          prompts::PromptKind kind = prompts::PromptKind::Text);

// Two-step code chain; ablation kinds apply their transform between the
// translation and answer exchanges.
Transcript run_code_chain(const Instance& instance, const ChainConfig& config,
                          prompts::PromptKind kind = prompts::PromptKind::CodeAnswer);

Transcript run_chain(const Instance& instance, const ChainConfig& config, prompts::PromptKind kind);

// Splits a chain of thought on newlines; empty segments are dropped.
std::vector<std::string> split_cot(const std::string& text);

// ---------------------------------------------------------------------------
// Variable-tracking probes
// ---------------------------------------------------------------------------

struct ProbeResult {
  std::string instance_id;
  int step_index = 0;  // 0-based truncation point (after step step_index+1)
  std::string target;
  std::string expected;
  std::string reply_raw;
  std::string reply_norm;
  bool is_error = false;
};

struct ProbeBudget {
  int max_entities = 0;  // 0 = no cap
  int max_steps = 0;     // 0 = no cap
};

struct ProbeSession {
  std::vector<ProbeResult> results;
  std::string note;  // set when the session degenerates (e.g. zero steps)
};

// Issues min(entities, cap) x min(steps, cap) stateless probes against the
// transcript's answer context, truncating the CoT after each step.
ProbeSession run_probe_session(const Instance& instance, const Transcript& transcript,
                               prompts::ProbeMode mode, const ProbeBudget& budget,
                               const ChainConfig& config);

// Probe targets without issuing any calls (exposed for budget accounting).
std::vector<std::pair<std::string, std::string>> probe_targets(const Instance& instance,
                                                               const Transcript& transcript,
                                                               prompts::ProbeMode mode,
                                                               const ChainConfig& config);

// Reply/expected canonicalization: case-fold, strip punctuation, collapse
// whitespace, yes->true / no->false.
std::string normalize_reply(const std::string& text);

// Decomposes one sentence into atomic statements (one per line).
std::vector<std::string> decompose_sentence(const std::string& sentence, const ChainConfig& config);

}  // namespace codeprompt::chain
