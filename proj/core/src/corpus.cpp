#include "codeprompt/corpus.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "codeprompt/util.hpp"

namespace codeprompt::corpus {

using nlohmann::json;

namespace {

std::string record_label(DatasetKind kind, const json& rec, std::size_t line_index) {
  for (const char* id_field : {"id", "utterance_id", "url"}) {
    if (rec.contains(id_field) && rec[id_field].is_string()) {
      return rec[id_field].get<std::string>();
    }
  }
  return to_string(kind) + "#" + std::to_string(line_index);
}

const json& require_field(const json& rec, const char* field, const std::string& label) {
  if (!rec.contains(field)) {
    throw Error("dataset record " + label + ": missing required field '" + field + "'");
  }
  return rec.at(field);
}

bool is_heading(const std::string& element) {
  for (const char* tag : {"<h1>", "<h2>", "<h3>", "<h4>"}) {
    if (element.rfind(tag, 0) == 0) return true;
  }
  return false;
}

AnswerClass condqa_class(const std::vector<std::string>& answers) {
  bool all_yes = true, all_no = true;
  for (const auto& a : answers) {
    std::string n = util::to_lower(util::trim(a));
    all_yes = all_yes && n == "yes";
    all_no = all_no && n == "no";
  }
  if (all_yes) return AnswerClass::Yes;
  if (all_no) return AnswerClass::No;
  return AnswerClass::Span;
}

Instance parse_condqa(const json& rec, const std::string& label) {
  Instance inst;
  inst.dataset = DatasetKind::CondQA;
  inst.id = label;
  inst.scenario = require_field(rec, "scenario", label).get<std::string>();
  inst.question = require_field(rec, "question", label).get<std::string>();

  // Answers come as [text, [conditions...]] pairs; condition lists are
  // dropped because scoring only ever sees the answer text.
  const json& answers = require_field(rec, "answers", label);
  for (const auto& entry : answers) {
    if (entry.is_array() && !entry.empty()) {
      inst.gold_answers.push_back(entry[0].get<std::string>());
    } else if (entry.is_string()) {
      inst.gold_answers.push_back(entry.get<std::string>());
    }
  }
  if (inst.gold_answers.empty()) {
    throw Error("dataset record " + label + ": empty field 'answers'");
  }
  inst.answer_class = condqa_class(inst.gold_answers);

  const json& contents = require_field(rec, "contents", label);
  const json& evidences = require_field(rec, "evidences", label);
  std::set<std::string> evidence_set;
  std::vector<std::string> evidence_list;
  for (const auto& e : evidences) {
    evidence_set.insert(e.get<std::string>());
    evidence_list.push_back(e.get<std::string>());
  }
  inst.gold_cot = util::join(evidence_list, "\n");

  // A section spans from one heading tag to the next; rationale membership is
  // tested at this granularity.
  std::vector<std::vector<std::string>> groups;
  for (const auto& element : contents) {
    std::string text = element.get<std::string>();
    if (groups.empty() || is_heading(text)) groups.emplace_back();
    groups.back().push_back(text);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    DocumentSection section;
    section.id = "sec_" + std::to_string(g);
    section.text = util::join(groups[g], "\n\n");
    for (const auto& element : groups[g]) {
      if (evidence_set.count(element)) section.is_rationale = true;
    }
    if (section.is_rationale) inst.rationale_ids.push_back(section.id);
    inst.document.push_back(std::move(section));
  }
  return inst;
}

Instance parse_bgqa(DatasetKind kind, const json& rec, const std::string& label) {
  Instance inst;
  inst.dataset = kind;
  inst.id = label;
  inst.prerendered = require_field(rec, "example", label).get<std::string>();
  inst.gold_cot = require_field(rec, "proof", label).get<std::string>();
  inst.question = inst.prerendered;

  std::string raw_label = require_field(rec, "label", label).get<std::string>();
  std::string norm = util::to_lower(util::trim(raw_label));
  if (norm == "proved") {
    inst.answer_class = AnswerClass::Yes;
    inst.gold_answers = {"yes"};
  } else if (norm == "disproved") {
    inst.answer_class = AnswerClass::No;
    inst.gold_answers = {"no"};
  } else if (norm == "unknown") {
    inst.answer_class = AnswerClass::NotEnoughInfo;
    inst.gold_answers = {"unknown"};
  } else {
    throw Error("dataset record " + label + ": unknown answer label '" + raw_label + "'");
  }

  if (rec.contains("facts")) {
    std::size_t i = 0;
    for (const auto& fact : rec["facts"]) {
      inst.document.push_back({"fact_" + std::to_string(i++), fact.get<std::string>(), false});
    }
  }
  if (rec.contains("rules")) {
    std::size_t i = 0;
    for (const auto& rule : rec["rules"]) {
      inst.document.push_back({"rule_" + std::to_string(i++), rule.get<std::string>(), false});
    }
  }
  return inst;
}

Instance parse_sharc(const json& rec, const std::string& label) {
  Instance inst;
  inst.dataset = DatasetKind::ShARC;
  inst.id = label;
  inst.question = require_field(rec, "question", label).get<std::string>();
  inst.scenario = require_field(rec, "scenario", label).get<std::string>();
  inst.document.push_back({"doc_0", require_field(rec, "snippet", label).get<std::string>(), false});

  const json& history = require_field(rec, "history", label);
  for (const auto& turn : history) {
    inst.history.push_back({turn.at("follow_up_question").get<std::string>(),
                            turn.at("follow_up_answer").get<std::string>()});
  }

  std::string answer = require_field(rec, "answer", label).get<std::string>();
  std::string norm = util::to_lower(util::trim(answer));
  if (norm == "yes") {
    inst.answer_class = AnswerClass::Yes;
  } else if (norm == "no") {
    inst.answer_class = AnswerClass::No;
  } else if (norm == "not enough information") {
    inst.answer_class = AnswerClass::NotEnoughInfo;
  } else {
    throw Error("dataset record " + label + ": unknown answer label '" + answer + "'");
  }
  inst.gold_answers = {answer};
  return inst;
}

}  // namespace

Instance parse_record(DatasetKind kind, const std::string& json_line, std::size_t line_index) {
  json rec;
  try {
    rec = json::parse(json_line);
  } catch (const json::exception& e) {
    throw Error("dataset line " + std::to_string(line_index + 1) + ": invalid JSON: " + e.what());
  }
  std::string label = record_label(kind, rec, line_index);
  try {
    switch (kind) {
      case DatasetKind::CondQA: return parse_condqa(rec, label);
      case DatasetKind::BGQA1:
      case DatasetKind::BGQA2:
      case DatasetKind::BGQA3: return parse_bgqa(kind, rec, label);
      case DatasetKind::ShARC: return parse_sharc(rec, label);
    }
  } catch (const json::exception& e) {
    throw Error("dataset record " + label + ": " + e.what());
  }
  throw Error("unreachable dataset kind");
}

std::vector<Instance> load_dataset(DatasetKind kind, const std::filesystem::path& path) {
  std::string content = util::read_file(path);
  std::vector<Instance> instances;
  std::vector<std::string> lines = util::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    instances.push_back(parse_record(kind, lines[i], i));
  }
  return instances;
}

std::vector<DocumentSection> oracle_retrieve(const Instance& instance) {
  if (instance.dataset != DatasetKind::CondQA) {
    throw Error("oracle_retrieve: instance " + instance.id + " is not a CondQA instance");
  }
  if (instance.rationale_ids.empty()) {
    throw Error("oracle_retrieve: instance " + instance.id + ": no rationale resolves");
  }
  std::set<std::string> wanted(instance.rationale_ids.begin(), instance.rationale_ids.end());
  std::vector<DocumentSection> out;
  for (const auto& section : instance.document) {
    if (wanted.erase(section.id)) out.push_back(section);
  }
  if (!wanted.empty()) {
    throw Error("oracle_retrieve: instance " + instance.id + ": rationale id '" + *wanted.begin() +
                "' absent from document");
  }
  return out;
}

std::vector<Instance> sample_demonstrations(const std::vector<Instance>& pool, std::uint64_t seed,
                                            int n_per_class) {
  if (pool.empty()) throw Error("sample_demonstrations: empty pool");
  if (n_per_class <= 0) throw Error("sample_demonstrations: n_per_class must be positive");

  DatasetKind dataset = pool.front().dataset;
  util::CounterRng rng(seed, "demos/" + to_string(dataset));

  std::vector<Instance> result;
  for (AnswerClass cls : classes_for(dataset)) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].answer_class == cls) candidates.push_back(i);
    }
    if (candidates.size() < std::size_t(n_per_class)) {
      throw Error("sample_demonstrations: pool has only " + std::to_string(candidates.size()) +
                  " instances of class '" + to_string(cls) + "', need " +
                  std::to_string(n_per_class));
    }
    for (int k = 0; k < n_per_class; ++k) {
      std::size_t pick = std::size_t(rng.next_below(candidates.size()));
      result.push_back(pool[candidates[pick]]);
      candidates.erase(candidates.begin() + std::ptrdiff_t(pick));
    }
  }
  return result;
}

ComplexityStats complexity_stats(const std::vector<pseudo::PseudoProgram>& programs) {
  if (programs.empty()) throw Error("complexity_stats: empty corpus");
  ComplexityStats stats;
  for (const auto& program : programs) {
    pseudo::LineCounts counts = pseudo::count_lines(program);
    stats.mean_reasoning_op_ratio += pseudo::reasoning_op_ratio(program);
    stats.mean_line_count += double(counts.non_blank_lines);
  }
  stats.mean_reasoning_op_ratio /= double(programs.size());
  stats.mean_line_count /= double(programs.size());
  return stats;
}

}  // namespace codeprompt::corpus
