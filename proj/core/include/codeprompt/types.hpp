#pragma once

#include <optional>
#include <string>
#include <vector>

namespace codeprompt {

enum class DatasetKind { CondQA, BGQA1, BGQA2, BGQA3, ShARC };

enum class AnswerClass { Yes, No, NotEnoughInfo, Span, Unknown };

std::string to_string(DatasetKind kind);
std::optional<DatasetKind> dataset_from_string(const std::string& name);
bool is_bgqa(DatasetKind kind);

std::string to_string(AnswerClass cls);
std::optional<AnswerClass> answer_class_from_string(const std::string& name);

// Answer classes a dataset can produce. CondQA is the span-extraction task.
std::vector<AnswerClass> classes_for(DatasetKind kind);

struct DocumentSection {
  std::string id;
  // Markup tags ("<p>", "<h1>", markdown headings...) are preserved verbatim;
  // prompt assembly is byte-exact.
  std::string text;
  bool is_rationale = false;
};

struct HistoryTurn {
  std::string question;
  std::string answer;  // "Yes" / "No" as given in the record
};

struct Instance {
  std::string id;
  DatasetKind dataset = DatasetKind::CondQA;
  std::string question;
  std::string scenario;  // may be empty
  std::vector<DocumentSection> document;
  std::vector<HistoryTurn> history;  // ShARC only
  std::vector<std::string> gold_answers;
  std::string gold_cot;  // BGQA proof, CondQA rationale concatenation, empty for ShARC
  AnswerClass answer_class = AnswerClass::Span;
  std::vector<std::string> rationale_ids;  // CondQA only, section ids
  // BGQA ships a pre-rendered NL input ("example"); stored verbatim and used
  // as the text prompt body.
  std::string prerendered;
};

// Stated facts of a BGQA instance (probe targets), in document order.
std::vector<std::string> stated_facts(const Instance& instance);

}  // namespace codeprompt
