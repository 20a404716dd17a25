#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codeprompt/chain.hpp"
#include "codeprompt/types.hpp"

namespace codeprompt::eval {

struct Prediction {
  std::string instance_id;
  std::string extracted;
  AnswerClass predicted_class = AnswerClass::Unknown;
  std::string extraction_method;  // marker | fallback | whole-reply | none
};

// Pulls the answer out of a transcript: text after the last answer marker,
// the ShARC completion-cue value, or a class-keyword fallback. Never throws;
// unextractable content scores as wrong via class Unknown.
Prediction extract_answer(const chain::Transcript& transcript, const Instance& instance);

// SQuAD-style normalization: case-fold, strip punctuation, drop articles
// (a/an/the), collapse whitespace.
std::string normalize_answer(const std::string& text);
std::vector<std::string> answer_tokens(const std::string& text);

// Bag-of-tokens F1 against the best-matching gold, in [0, 1].
double token_f1(const std::string& prediction, const std::vector<std::string>& golds);

// Unweighted mean of per-class F1 over classes present on either side;
// zero-denominator classes score 0. Throws on length mismatch or empty input.
double macro_f1(const std::vector<AnswerClass>& predictions, const std::vector<AnswerClass>& golds);

// Rows: gold class in fixed order (Yes, No, NotEnoughInfo); columns: the same
// plus a trailing bucket for unextractable predictions, so cells always sum
// to the instance count. Throws on span-task input.
struct ConfusionMatrix {
  std::array<std::array<int, 4>, 3> cells{};
  int total() const;
};
ConfusionMatrix confusion_matrix(const std::vector<AnswerClass>& predictions,
                                 const std::vector<AnswerClass>& golds);
std::string render_confusion(const ConfusionMatrix& matrix);
std::string confusion_csv(const ConfusionMatrix& matrix);

// Per-instance outcome within one (dataset, kind, seed) cell.
struct InstanceScore {
  std::string instance_id;
  std::string status;     // ok | skipped | failed
  double score = 0.0;     // token F1 for CondQA, 0/1 correctness otherwise
  bool correct = false;
  AnswerClass predicted = AnswerClass::Unknown;
  AnswerClass gold = AnswerClass::Unknown;
  std::string extraction_method;
};

struct EvalReport {
  std::string model_id;
  DatasetKind dataset = DatasetKind::CondQA;
  prompts::PromptKind kind = prompts::PromptKind::Text;
  std::uint64_t seed = 0;
  std::vector<InstanceScore> per_instance;
  double headline = 0.0;  // points (x100): mean token F1 or macro F1
  std::optional<ConfusionMatrix> confusion;
  double cost_total = 0.0;
  int failed = 0;
  int skipped = 0;
};

// Scores one run cell. Transcripts must be aligned 1:1 with instances.
EvalReport build_report(const std::string& model_id, DatasetKind dataset,
                        prompts::PromptKind kind, std::uint64_t seed,
                        const std::vector<Instance>& instances,
                        const std::vector<chain::Transcript>& transcripts);

// Span answers count as correct at token F1 >= threshold (probe partitioning).
bool is_correct(const Instance& instance, const Prediction& prediction,
                double span_threshold = 0.5);

struct Summary {
  struct Cell {
    double mean = 0.0;
    double stddev = 0.0;  // population std across seeds
    int runs = 0;
  };
  // model -> dataset -> kind -> cell
  std::map<std::string, std::map<std::string, std::map<std::string, Cell>>> cells;
  // model -> mean over datasets of (code - text)
  std::map<std::string, double> delta_cp;
};

// Mean +/- std across seeds and the per-model code-minus-text gap. Throws
// when text and code cover different dataset sets for one model.
Summary aggregate_runs(const std::vector<EvalReport>& reports);

// Percentage of probe errors within one correctness partition; absent when
// the partition holds no probes.
std::optional<double> memory_error_rate(const std::vector<chain::ProbeResult>& results,
                                        const std::map<std::string, bool>& instance_correct,
                                        bool correct_partition);

}  // namespace codeprompt::eval
