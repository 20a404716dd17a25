#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace codeprompt::pseudo {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind { Literal, Identifier, Call, Unary, Binary };
enum class LiteralKind { True, False, None, Number, String, StringList };

struct Expr {
  ExprKind kind = ExprKind::Identifier;

  // Literal
  LiteralKind literal_kind = LiteralKind::None;
  std::string spelling;  // literal text as written ("42", "\"1 June\"", ...)
  std::vector<std::string> list_items;  // StringList, item spellings

  // Identifier / Call
  std::string name;
  std::vector<ExprPtr> args;  // Call arguments, Unary/Binary operands

  // Unary ("not", "!") and Binary ("and", "&", "or", "|", "==", ">=", "<=",
  // ">", "<", "!=", "=>"). The spelling used in the source is preserved so a
  // re-render does not rewrite "&" as "and".
  std::string op;

  bool parenthesized = false;

  ExprPtr clone() const;
};

// Renders an expression with the original operator spellings.
std::string render_expr(const Expr& expr);

// Flattens nested "and"/"&" chains; a 3-conjunct condition yields 3 entries.
std::vector<const Expr*> conjuncts(const Expr& expr);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StatementKind { Blank, Comment, Assign, If, RuleDef, Opaque };

struct Statement {
  StatementKind kind = StatementKind::Blank;

  // Exact source line including indentation. Transforms that rewrite a
  // statement regenerate it; render() emits it verbatim.
  std::string raw;
  int indent = 0;  // leading width after tab normalization (tab = 4)

  // Comment: text after the first '#' (leading space stripped); Opaque: the
  // trimmed line content.
  std::string text;

  // Assign / RuleDef
  ExprPtr target;  // identifier or predicate application
  ExprPtr value;   // RuleDef value is an implication ("=>") expression
  std::string trailing_comment;  // without the '#'
  bool question_marker = false;

  // If
  ExprPtr condition;
  std::vector<Statement> body;

  Statement() = default;
  Statement(Statement&&) = default;
  Statement& operator=(Statement&&) = default;
  Statement(const Statement& other);
  Statement& operator=(const Statement& other);
};

enum class Severity { Info, Warning, Fatal };

struct Diagnostic {
  Severity severity = Severity::Warning;
  int line = 0;  // 1-based
  std::string message;
};

enum class VarKind { Boolean, String, Number, StringList, None };

struct PseudoProgram {
  std::vector<Statement> statements;
  std::vector<Diagnostic> diagnostics;
  std::optional<std::string> question_variable;

  bool has_fatal_diagnostics() const;
};

// name -> kind, from the first literal assignment seen for each name.
std::map<std::string, VarKind> variable_table(const PseudoProgram& program);

// First top-level literal assigned to each variable, in statement order.
// Used as probe expected values; the question variable's None is included.
struct VariableValue {
  std::string name;
  LiteralKind kind;
  std::string spelling;  // literal text as written, quotes stripped for strings
};
std::vector<VariableValue> initial_values(const PseudoProgram& program);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Line-oriented, lenient parse. Never rejects: unrecognized lines become
// Opaque statements and problems surface as diagnostics. Forbidden constructs
// (loops, function and class definitions) are fatal diagnostics but still
// produce Opaque statements.
PseudoProgram parse(const std::string& text);

// Inverse of parse up to structure: parse(render(parse(t))) equals parse(t),
// and untransformed statements round-trip byte-exactly.
std::string render(const PseudoProgram& program);

struct AnonymizeResult {
  PseudoProgram program;
  // original name -> var_k, in first-occurrence order
  std::vector<std::pair<std::string, std::string>> mapping;
};

// Replaces every distinct variable/predicate identifier with var_1, var_2...
// in first-occurrence order. Comments are untouched; the statement-kind
// sequence is preserved.
AnonymizeResult anonymize(const PseudoProgram& program);

// Drops Comment statements and trailing comments. The question-variable
// designation survives even though its marker comment text is removed.
PseudoProgram strip_comments(const PseudoProgram& program);

// Replaces each run of code statements with a donor code run while keeping
// comments byte-exact in place, so comments and code mismatch (the random
// code ablation). Donor runs are dealt by a seeded shuffle, one pass per
// cycle, so a donor equal to the program reproduces its own code runs as a
// multiset. Throws if the donor has no code statements.
PseudoProgram splice_random(const PseudoProgram& program, const PseudoProgram& donor,
                            std::uint64_t seed);

// if-lines / non-blank code lines (comments excluded from both counts);
// 0 for code-free programs.
double reasoning_op_ratio(const PseudoProgram& program);

// Counts used by reasoning_op_ratio and the corpus complexity stats.
struct LineCounts {
  int if_lines = 0;
  int code_lines = 0;      // non-blank, non-comment
  int non_blank_lines = 0; // includes comments
};
LineCounts count_lines(const PseudoProgram& program);

// "husband_pass_away" -> "Key entity: husband pass away". Throws on empty.
std::string desnake(const std::string& variable_name);

// Pre-order statement kinds (If bodies flattened); transform invariants are
// phrased against this sequence.
std::vector<StatementKind> kind_sequence(const PseudoProgram& program);

// Comment texts in order, including trailing comments (structure checks).
std::vector<std::string> comment_texts(const PseudoProgram& program);

}  // namespace codeprompt::pseudo
