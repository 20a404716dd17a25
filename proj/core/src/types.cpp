#include "codeprompt/types.hpp"

#include "codeprompt/util.hpp"

namespace codeprompt {

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::CondQA: return "condqa";
    case DatasetKind::BGQA1: return "bgqa1";
    case DatasetKind::BGQA2: return "bgqa2";
    case DatasetKind::BGQA3: return "bgqa3";
    case DatasetKind::ShARC: return "sharc";
  }
  return "unknown";
}

std::optional<DatasetKind> dataset_from_string(const std::string& name) {
  std::string n = util::to_lower(name);
  if (n == "condqa") return DatasetKind::CondQA;
  if (n == "bgqa1" || n == "bgqa-1") return DatasetKind::BGQA1;
  if (n == "bgqa2" || n == "bgqa-2") return DatasetKind::BGQA2;
  if (n == "bgqa3" || n == "bgqa-3") return DatasetKind::BGQA3;
  if (n == "sharc") return DatasetKind::ShARC;
  return std::nullopt;
}

bool is_bgqa(DatasetKind kind) {
  return kind == DatasetKind::BGQA1 || kind == DatasetKind::BGQA2 || kind == DatasetKind::BGQA3;
}

std::string to_string(AnswerClass cls) {
  switch (cls) {
    case AnswerClass::Yes: return "yes";
    case AnswerClass::No: return "no";
    case AnswerClass::NotEnoughInfo: return "not_enough_info";
    case AnswerClass::Span: return "span";
    case AnswerClass::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<AnswerClass> answer_class_from_string(const std::string& name) {
  std::string n = util::to_lower(name);
  if (n == "yes") return AnswerClass::Yes;
  if (n == "no") return AnswerClass::No;
  if (n == "not_enough_info" || n == "not enough information" || n == "nei")
    return AnswerClass::NotEnoughInfo;
  if (n == "span") return AnswerClass::Span;
  if (n == "unknown") return AnswerClass::Unknown;
  return std::nullopt;
}

std::vector<AnswerClass> classes_for(DatasetKind kind) {
  if (kind == DatasetKind::CondQA)
    return {AnswerClass::Yes, AnswerClass::No, AnswerClass::Span};
  return {AnswerClass::Yes, AnswerClass::No, AnswerClass::NotEnoughInfo};
}

std::vector<std::string> stated_facts(const Instance& instance) {
  std::vector<std::string> facts;
  for (const auto& section : instance.document) {
    if (section.id.rfind("fact_", 0) == 0) facts.push_back(section.text);
  }
  return facts;
}

}  // namespace codeprompt
