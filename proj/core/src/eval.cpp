#include "codeprompt/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "codeprompt/util.hpp"

namespace codeprompt::eval {

namespace {

constexpr std::array<AnswerClass, 3> kClassOrder = {AnswerClass::Yes, AnswerClass::No,
                                                    AnswerClass::NotEnoughInfo};

int class_column(AnswerClass cls) {
  switch (cls) {
    case AnswerClass::Yes: return 0;
    case AnswerClass::No: return 1;
    case AnswerClass::NotEnoughInfo: return 2;
    default: return 3;  // unextractable bucket
  }
}

// Last class keyword in the reply, scanning normalized tokens.
std::optional<AnswerClass> keyword_scan(const std::string& reply) {
  std::vector<std::string> tokens = answer_tokens(reply);
  std::optional<AnswerClass> found;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok == "yes" || tok == "true" || tok == "proved") {
      found = AnswerClass::Yes;
    } else if (tok == "no" || tok == "false" || tok == "disproved") {
      found = AnswerClass::No;
    } else if (tok == "unknown" || tok == "none") {
      found = AnswerClass::NotEnoughInfo;
    } else if (tok == "not" && i + 2 < tokens.size() && tokens[i + 1] == "enough" &&
               tokens[i + 2] == "information") {
      found = AnswerClass::NotEnoughInfo;
    }
  }
  return found;
}

std::optional<AnswerClass> sharc_code_value(const std::string& text) {
  std::string norm = util::to_lower(util::collapse_whitespace(normalize_answer(text)));
  if (norm == "true" || norm == "yes") return AnswerClass::Yes;
  if (norm == "false" || norm == "no") return AnswerClass::No;
  if (norm == "none" || norm == "unknown" || norm == "not enough information")
    return AnswerClass::NotEnoughInfo;
  return std::nullopt;
}

const std::string& final_reply(const chain::Transcript& transcript) {
  static const std::string empty;
  return transcript.exchanges.empty() ? empty : transcript.exchanges.back().response_text;
}

}  // namespace

std::string normalize_answer(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    if (std::ispunct(static_cast<unsigned char>(c))) continue;
    lowered.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  }
  std::vector<std::string> kept;
  for (const auto& tok : util::split(util::collapse_whitespace(lowered), ' ')) {
    if (tok.empty() || tok == "a" || tok == "an" || tok == "the") continue;
    kept.push_back(tok);
  }
  return util::join(kept, " ");
}

std::vector<std::string> answer_tokens(const std::string& text) {
  std::string norm = normalize_answer(text);
  if (norm.empty()) return {};
  return util::split(norm, ' ');
}

double token_f1(const std::string& prediction, const std::vector<std::string>& golds) {
  std::vector<std::string> pred_tokens = answer_tokens(prediction);
  double best = 0.0;
  for (const auto& gold : golds) {
    std::vector<std::string> gold_tokens = answer_tokens(gold);
    if (pred_tokens.empty() || gold_tokens.empty()) {
      best = std::max(best, pred_tokens.empty() && gold_tokens.empty() ? 1.0 : 0.0);
      continue;
    }
    std::unordered_map<std::string, int> counts;
    for (const auto& tok : gold_tokens) ++counts[tok];
    int overlap = 0;
    for (const auto& tok : pred_tokens) {
      auto it = counts.find(tok);
      if (it != counts.end() && it->second > 0) {
        --it->second;
        ++overlap;
      }
    }
    if (overlap == 0) continue;
    double precision = double(overlap) / double(pred_tokens.size());
    double recall = double(overlap) / double(gold_tokens.size());
    best = std::max(best, 2.0 * precision * recall / (precision + recall));
  }
  return best;
}

Prediction extract_answer(const chain::Transcript& transcript, const Instance& instance) {
  Prediction p;
  p.instance_id = instance.id;
  if (transcript.status != chain::RunStatus::Ok) {
    p.extraction_method = "none";
    return p;
  }

  if (instance.dataset == DatasetKind::ShARC) {
    bool code = prompts::uses_code_answer(transcript.kind);
    std::string source = transcript.raw_answer_text.empty() ? final_reply(transcript)
                                                            : transcript.raw_answer_text;
    p.extracted = util::trim(source);
    std::optional<AnswerClass> cls;
    if (code) {
      cls = sharc_code_value(source);
    } else {
      std::string norm = normalize_answer(source);
      if (norm == "yes") cls = AnswerClass::Yes;
      else if (norm == "no") cls = AnswerClass::No;
      else if (norm == "not enough information") cls = AnswerClass::NotEnoughInfo;
    }
    if (cls) {
      p.predicted_class = *cls;
      p.extraction_method = "marker";
      return p;
    }
    cls = keyword_scan(source);
    if (cls) {
      p.predicted_class = *cls;
      p.extraction_method = "fallback";
      return p;
    }
    p.extraction_method = "none";
    return p;
  }

  if (is_bgqa(instance.dataset)) {
    std::string source = transcript.raw_answer_text;
    std::string method = "marker";
    if (source.empty()) {
      source = final_reply(transcript);
      method = "fallback";
    }
    std::optional<AnswerClass> cls = keyword_scan(source);
    if (!cls && method == "marker") {
      cls = keyword_scan(final_reply(transcript));
      method = "fallback";
    }
    p.extracted = util::trim(source);
    if (cls) {
      p.predicted_class = *cls;
      p.extraction_method = method;
    } else {
      p.extraction_method = "none";
    }
    return p;
  }

  // CondQA: span or yes/no.
  if (!transcript.raw_answer_text.empty()) {
    p.extracted = util::trim(transcript.raw_answer_text);
    std::string norm = normalize_answer(p.extracted);
    p.predicted_class = norm == "yes"  ? AnswerClass::Yes
                        : norm == "no" ? AnswerClass::No
                                       : AnswerClass::Span;
    p.extraction_method = "marker";
    return p;
  }
  std::optional<AnswerClass> cls = keyword_scan(final_reply(transcript));
  if (cls == AnswerClass::Yes || cls == AnswerClass::No) {
    p.predicted_class = *cls;
    p.extracted = *cls == AnswerClass::Yes ? "yes" : "no";
    p.extraction_method = "fallback";
    return p;
  }
  p.extracted = util::trim(final_reply(transcript));
  p.predicted_class = AnswerClass::Span;
  p.extraction_method = "whole-reply";
  return p;
}

double macro_f1(const std::vector<AnswerClass>& predictions, const std::vector<AnswerClass>& golds) {
  if (predictions.size() != golds.size()) {
    throw Error("macro_f1: prediction/gold length mismatch (" + std::to_string(predictions.size()) +
                " vs " + std::to_string(golds.size()) + ")");
  }
  if (golds.empty()) throw Error("macro_f1: empty input");

  std::map<AnswerClass, std::array<int, 3>> stats;  // tp, fp, fn
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (predictions[i] == golds[i]) {
      ++stats[golds[i]][0];
    } else {
      ++stats[predictions[i]][1];
      ++stats[golds[i]][2];
    }
  }
  double sum = 0.0;
  int n = 0;
  for (const auto& [cls, counts] : stats) {
    if (cls == AnswerClass::Unknown) continue;  // unextractable is never a class
    ++n;
    int tp = counts[0], fp = counts[1], fn = counts[2];
    int denom = 2 * tp + fp + fn;
    sum += denom == 0 ? 0.0 : 2.0 * double(tp) / double(denom);
  }
  if (n == 0) throw Error("macro_f1: no scorable classes");
  return sum / double(n);
}

int ConfusionMatrix::total() const {
  int sum = 0;
  for (const auto& row : cells)
    for (int cell : row) sum += cell;
  return sum;
}

ConfusionMatrix confusion_matrix(const std::vector<AnswerClass>& predictions,
                                 const std::vector<AnswerClass>& golds) {
  if (predictions.size() != golds.size()) throw Error("confusion_matrix: length mismatch");
  ConfusionMatrix matrix;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] == AnswerClass::Span || predictions[i] == AnswerClass::Span) {
      throw Error("confusion_matrix: span-extraction tasks have no confusion matrix");
    }
    int row = class_column(golds[i]);
    if (row == 3) throw Error("confusion_matrix: gold class must be yes/no/not_enough_info");
    matrix.cells[std::size_t(row)][std::size_t(class_column(predictions[i]))] += 1;
  }
  return matrix;
}

std::string render_confusion(const ConfusionMatrix& matrix) {
  static const char* labels[] = {"yes", "no", "nei"};
  std::ostringstream out;
  out << "gold\\pred      yes       no      nei    other\n";
  for (std::size_t r = 0; r < 3; ++r) {
    out << labels[r];
    for (std::size_t pad = std::string(labels[r]).size(); pad < 9; ++pad) out << ' ';
    for (std::size_t c = 0; c < 4; ++c) {
      std::string cell = std::to_string(matrix.cells[r][c]);
      for (std::size_t pad = cell.size(); pad < 9; ++pad) out << ' ';
      out << cell;
    }
    out << "\n";
  }
  return out.str();
}

std::string confusion_csv(const ConfusionMatrix& matrix) {
  std::ostringstream out;
  out << "gold,yes,no,not_enough_info,other\n";
  static const char* labels[] = {"yes", "no", "not_enough_info"};
  for (std::size_t r = 0; r < 3; ++r) {
    out << labels[r];
    for (std::size_t c = 0; c < 4; ++c) out << "," << matrix.cells[r][c];
    out << "\n";
  }
  return out.str();
}

bool is_correct(const Instance& instance, const Prediction& prediction, double span_threshold) {
  if (instance.answer_class == AnswerClass::Span) {
    return token_f1(prediction.extracted, instance.gold_answers) >= span_threshold;
  }
  return prediction.predicted_class == instance.answer_class;
}

EvalReport build_report(const std::string& model_id, DatasetKind dataset,
                        prompts::PromptKind kind, std::uint64_t seed,
                        const std::vector<Instance>& instances,
                        const std::vector<chain::Transcript>& transcripts) {
  if (instances.size() != transcripts.size()) {
    throw Error("build_report: instance/transcript count mismatch");
  }
  EvalReport report;
  report.model_id = model_id;
  report.dataset = dataset;
  report.kind = kind;
  report.seed = seed;

  std::vector<AnswerClass> pred_classes;
  std::vector<AnswerClass> gold_classes;
  double f1_sum = 0.0;
  int scored = 0;

  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& instance = instances[i];
    const chain::Transcript& transcript = transcripts[i];
    InstanceScore score;
    score.instance_id = instance.id;
    score.status = chain::to_string(transcript.status);
    score.gold = instance.answer_class;

    if (transcript.status == chain::RunStatus::Skipped) {
      ++report.skipped;
      report.per_instance.push_back(std::move(score));
      continue;
    }
    if (transcript.status == chain::RunStatus::Failed) {
      ++report.failed;
      // A failed instance scores zero but still counts.
    }
    Prediction prediction = extract_answer(transcript, instance);
    score.predicted = prediction.predicted_class;
    score.extraction_method = prediction.extraction_method;
    score.correct = is_correct(instance, prediction);
    if (dataset == DatasetKind::CondQA) {
      score.score = token_f1(prediction.extracted, instance.gold_answers);
      f1_sum += score.score;
    } else {
      score.score = score.correct ? 1.0 : 0.0;
      pred_classes.push_back(prediction.predicted_class);
      gold_classes.push_back(instance.answer_class);
    }
    ++scored;
    report.per_instance.push_back(std::move(score));
  }

  if (dataset == DatasetKind::CondQA) {
    report.headline = scored == 0 ? 0.0 : 100.0 * f1_sum / double(scored);
  } else if (!gold_classes.empty()) {
    report.headline = 100.0 * macro_f1(pred_classes, gold_classes);
    report.confusion = confusion_matrix(pred_classes, gold_classes);
  }
  return report;
}

Summary aggregate_runs(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw Error("aggregate_runs: no reports");
  // (model, dataset, kind) -> headline per seed
  std::map<std::string, std::map<std::string, std::map<std::string, std::vector<double>>>> bucket;
  for (const auto& report : reports) {
    bucket[report.model_id][to_string(report.dataset)][prompts::to_string(report.kind)].push_back(
        report.headline);
  }

  Summary summary;
  for (const auto& [model, datasets] : bucket) {
    for (const auto& [dataset, kinds] : datasets) {
      for (const auto& [kind, values] : kinds) {
        Summary::Cell cell;
        cell.runs = int(values.size());
        for (double v : values) cell.mean += v;
        cell.mean /= double(values.size());
        double var = 0.0;
        for (double v : values) var += (v - cell.mean) * (v - cell.mean);
        cell.stddev = std::sqrt(var / double(values.size()));
        summary.cells[model][dataset][kind] = cell;
      }
    }
  }

  const std::string text_kind = prompts::to_string(prompts::PromptKind::Text);
  const std::string code_kind = prompts::to_string(prompts::PromptKind::CodeAnswer);
  for (const auto& [model, datasets] : summary.cells) {
    std::vector<std::string> text_sets, code_sets;
    for (const auto& [dataset, kinds] : datasets) {
      if (kinds.count(text_kind)) text_sets.push_back(dataset);
      if (kinds.count(code_kind)) code_sets.push_back(dataset);
    }
    if (text_sets.empty() || code_sets.empty()) continue;
    if (text_sets != code_sets) {
      throw Error("aggregate_runs: model " + model +
                  " has mismatched dataset sets for text and code kinds");
    }
    double delta = 0.0;
    for (const auto& dataset : text_sets) {
      const auto& kinds = datasets.at(dataset);
      delta += kinds.at(code_kind).mean - kinds.at(text_kind).mean;
    }
    summary.delta_cp[model] = delta / double(text_sets.size());
  }
  return summary;
}

std::optional<double> memory_error_rate(const std::vector<chain::ProbeResult>& results,
                                        const std::map<std::string, bool>& instance_correct,
                                        bool correct_partition) {
  long probes = 0, errors = 0;
  for (const auto& result : results) {
    auto it = instance_correct.find(result.instance_id);
    if (it == instance_correct.end() || it->second != correct_partition) continue;
    ++probes;
    if (result.is_error) ++errors;
  }
  if (probes == 0) return std::nullopt;
  return 100.0 * double(errors) / double(probes);
}

}  // namespace codeprompt::eval
