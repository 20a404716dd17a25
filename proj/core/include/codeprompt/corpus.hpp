#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "codeprompt/pseudocode.hpp"
#include "codeprompt/types.hpp"

namespace codeprompt::corpus {

// Loads a line-delimited dataset file in the source dataset's published field
// layout (see docs/dataset-formats.md for the field mapping). One Instance
// per record, order preserved. Throws on missing fields or unknown answer
// labels, naming the record.
std::vector<Instance> load_dataset(DatasetKind kind, const std::filesystem::path& path);

// Parses one already-decoded record (exposed for tests).
Instance parse_record(DatasetKind kind, const std::string& json_line, std::size_t line_index);

// CondQA oracle retriever: keeps, in document order, exactly the sections
// that contain at least one rationale sentence. The result replaces the
// document for prompt assembly. Throws when no rationale resolves.
std::vector<DocumentSection> oracle_retrieve(const Instance& instance);

// Deterministic demonstration sampling: n_per_class instances of every class
// the dataset uses, drawn from a counter-based stream keyed by
// (seed, dataset id) so adding datasets never perturbs existing samples.
// Returned grouped by class in fixed class order.
std::vector<Instance> sample_demonstrations(const std::vector<Instance>& pool, std::uint64_t seed,
                                            int n_per_class);

struct ComplexityStats {
  double mean_reasoning_op_ratio = 0.0;  // if-lines / code lines, averaged
  double mean_line_count = 0.0;          // non-blank lines, averaged
};

// Corpus-level code complexity. Throws on empty input.
ComplexityStats complexity_stats(const std::vector<pseudo::PseudoProgram>& programs);

}  // namespace codeprompt::corpus
