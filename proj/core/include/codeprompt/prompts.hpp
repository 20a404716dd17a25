#pragma once

#include <optional>
#include <string>
#include <vector>

#include "codeprompt/pseudocode.hpp"
#include "codeprompt/templates.hpp"
#include "codeprompt/types.hpp"

namespace codeprompt::prompts {

enum class Role { System, User, Assistant };

struct Message {
  Role role = Role::User;
  std::string content;
};

std::string to_string(Role role);
std::optional<Role> role_from_string(const std::string& name);

enum class PromptKind {
  Text,
  CodeTranslate,
  CodeAnswer,
  AtomicStatements,
  BackTranslatedCode,
  AnonymizedCode,
  RandomCode,
  NoComments,
  Probe,
};

std::string to_string(PromptKind kind);
std::optional<PromptKind> prompt_kind_from_string(const std::string& name);

// Kinds whose answer prompt is assembled by build_code_answer.
bool uses_code_answer(PromptKind kind);
// Kinds that run the two-step translation chain.
bool is_code_chain(PromptKind kind);

struct Decoding {
  double temperature = 0.0;  // greedy by default
  int max_tokens = 512;
  std::vector<std::string> stop;
};

struct PromptBundle {
  std::vector<Message> messages;
  Decoding decoding;
  PromptKind purpose = PromptKind::Text;
};

// "[role]\n<content>\n" per message; the form goldens pin and hashes use.
std::string serialize(const PromptBundle& bundle);

// Demonstration payloads.
struct TranslationDemo {
  std::string source;  // NL rendering of the demo instance
  std::string code;    // hand-written dialect code
};

struct CodeDemo {
  Instance instance;
  std::string code;
};

struct BackTranslationDemo {
  std::string code;
  std::string text;
};

// NL body of an instance as the text prompt presents it. For CondQA the
// document is the oracle-retrieved sections.
std::string text_body(const Instance& instance, const TemplateSet& templates);
// NL body handed to the translation step (no answer-format or CoT cue).
std::string translation_source(const Instance& instance, const TemplateSet& templates);
// Expected assistant output for a demonstration instance.
std::string demo_target(const Instance& instance, PromptKind kind, const TemplateSet& templates);

// One-step text prompt (also used for the atomic-statements ablation, whose
// augmented body is prepared by the caller). Demos must come with whatever
// CoT the dataset's target template needs.
PromptBundle build_text(const Instance& instance, const std::vector<Instance>& demos,
                        const TemplateSet& templates, const Decoding& decoding,
                        PromptKind purpose = PromptKind::Text);

// Few-shot NL -> code translation prompt. Demo code must pass dialect
// validation without fatal diagnostics.
PromptBundle build_code_translation(const Instance& instance,
                                    const std::vector<TranslationDemo>& demos,
                                    const TemplateSet& templates, const Decoding& decoding);

// Second chain step: answer prompt over (possibly transformed) code. ShARC
// prompts end with the question-variable completion cue and require the
// program to declare one.
PromptBundle build_code_answer(const pseudo::PseudoProgram& code, const Instance& instance,
                               const std::vector<CodeDemo>& demos, const TemplateSet& templates,
                               const Decoding& decoding,
                               PromptKind purpose = PromptKind::CodeAnswer);

// Code -> NL prompt for the back-translated-code ablation; exactly 4 demos.
PromptBundle build_back_translation(const pseudo::PseudoProgram& code,
                                    const std::vector<BackTranslationDemo>& demos,
                                    const TemplateSet& templates, const Decoding& decoding);

enum class ProbeMode { TextProbe, CodeProbe };

// Probe prompt: the chain context replayed, the partial CoT as a prior
// assistant turn, then the verbatim probe line.
PromptBundle build_probe(const std::vector<Message>& context, const std::string& partial_cot,
                         const std::string& target, ProbeMode mode, DatasetKind dataset,
                         const TemplateSet& templates, const Decoding& decoding);

// Sentence -> atomic statements decomposition request.
PromptBundle build_atomic_decomposition(const std::string& sentence,
                                        const std::vector<std::pair<std::string, std::string>>& demos,
                                        const TemplateSet& templates, const Decoding& decoding);

}  // namespace codeprompt::prompts
