#include "codeprompt/pseudocode.hpp"

#include <algorithm>
#include <cctype>

#include "codeprompt/util.hpp"

namespace codeprompt::pseudo {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// ---------------------------------------------------------------------------
// Expression tokenizer
// ---------------------------------------------------------------------------

enum class TokKind { Ident, Number, String, LParen, RParen, LBracket, RBracket, Comma, Op, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
};

struct Lexer {
  std::string_view src;
  std::size_t pos = 0;
  bool failed = false;

  void skip_ws() {
    while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
  }

  Token next() {
    skip_ws();
    if (pos >= src.size()) return {TokKind::End, ""};
    char c = src[pos];
    if (is_ident_start(c)) {
      std::size_t start = pos;
      while (pos < src.size() && is_ident_char(src[pos])) ++pos;
      return {TokKind::Ident, std::string(src.substr(start, pos - start))};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
      std::size_t start = pos;
      if (c == '-') ++pos;
      while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.')) ++pos;
      return {TokKind::Number, std::string(src.substr(start, pos - start))};
    }
    if (c == '"' || c == '\'') {
      std::size_t start = pos;
      ++pos;
      while (pos < src.size() && src[pos] != c) ++pos;
      if (pos >= src.size()) {
        failed = true;
        return {TokKind::End, ""};
      }
      ++pos;
      return {TokKind::String, std::string(src.substr(start, pos - start))};
    }
    switch (c) {
      case '(': ++pos; return {TokKind::LParen, "("};
      case ')': ++pos; return {TokKind::RParen, ")"};
      case '[': ++pos; return {TokKind::LBracket, "["};
      case ']': ++pos; return {TokKind::RBracket, "]"};
      case ',': ++pos; return {TokKind::Comma, ","};
      default: break;
    }
    // Multi-char operators first.
    static const char* two_char[] = {"==", ">=", "<=", "!=", "=>"};
    for (const char* op : two_char) {
      if (src.substr(pos, 2) == op) {
        pos += 2;
        return {TokKind::Op, op};
      }
    }
    if (c == '>' || c == '<' || c == '&' || c == '|' || c == '!') {
      ++pos;
      return {TokKind::Op, std::string(1, c)};
    }
    failed = true;
    return {TokKind::End, ""};
  }
};

// ---------------------------------------------------------------------------
// Expression parser. Precedence: not > comparison > and > or > "=>".
// ---------------------------------------------------------------------------

struct ExprParser {
  std::vector<Token> toks;
  std::size_t idx = 0;
  bool ok = true;

  explicit ExprParser(std::string_view src) {
    Lexer lex{src};
    while (true) {
      Token t = lex.next();
      if (lex.failed) {
        ok = false;
        break;
      }
      toks.push_back(t);
      if (t.kind == TokKind::End) break;
    }
  }

  const Token& peek() const { return toks[std::min(idx, toks.size() - 1)]; }
  Token take() { return toks[std::min(idx++, toks.size() - 1)]; }
  bool at_op(std::string_view text) const {
    return peek().kind == TokKind::Op && peek().text == text;
  }
  bool at_word(std::string_view text) const {
    return peek().kind == TokKind::Ident && peek().text == text;
  }

  ExprPtr fail() {
    ok = false;
    return nullptr;
  }

  static ExprPtr make_literal(LiteralKind kind, std::string spelling) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Literal;
    e->literal_kind = kind;
    e->spelling = std::move(spelling);
    return e;
  }

  ExprPtr parse_primary() {
    const Token t = peek();
    switch (t.kind) {
      case TokKind::Number: {
        take();
        return make_literal(LiteralKind::Number, t.text);
      }
      case TokKind::String: {
        take();
        return make_literal(LiteralKind::String, t.text);
      }
      case TokKind::LParen: {
        take();
        ExprPtr inner = parse_expr();
        if (!ok || peek().kind != TokKind::RParen) return fail();
        take();
        inner->parenthesized = true;
        return inner;
      }
      case TokKind::LBracket: {
        take();
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Literal;
        e->literal_kind = LiteralKind::StringList;
        while (peek().kind != TokKind::RBracket) {
          if (peek().kind != TokKind::String) return fail();
          e->list_items.push_back(take().text);
          if (peek().kind == TokKind::Comma) take();
        }
        take();
        return e;
      }
      case TokKind::Ident: {
        take();
        if (t.text == "True" || t.text == "true")
          return make_literal(LiteralKind::True, t.text);
        if (t.text == "False" || t.text == "false")
          return make_literal(LiteralKind::False, t.text);
        if (t.text == "None" || t.text == "none")
          return make_literal(LiteralKind::None, t.text);
        auto e = std::make_unique<Expr>();
        e->name = t.text;
        if (peek().kind == TokKind::LParen) {
          take();
          e->kind = ExprKind::Call;
          while (peek().kind != TokKind::RParen) {
            if (peek().kind == TokKind::End) return fail();
            ExprPtr arg = parse_expr();
            if (!ok) return nullptr;
            e->args.push_back(std::move(arg));
            if (peek().kind == TokKind::Comma) take();
          }
          take();
        } else {
          e->kind = ExprKind::Identifier;
        }
        return e;
      }
      default:
        return fail();
    }
  }

  ExprPtr parse_not() {
    if (at_word("not") || at_op("!")) {
      Token t = take();
      ExprPtr operand = parse_not();
      if (!ok) return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->op = t.text;
      e->args.push_back(std::move(operand));
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_not();
    if (!ok) return nullptr;
    static const char* cmp_ops[] = {"==", ">=", "<=", ">", "<", "!="};
    for (const char* op : cmp_ops) {
      if (at_op(op)) {
        take();
        ExprPtr rhs = parse_not();
        if (!ok) return nullptr;
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Binary;
        e->op = op;
        e->args.push_back(std::move(lhs));
        e->args.push_back(std::move(rhs));
        return e;
      }
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_comparison();
    if (!ok) return nullptr;
    while (at_word("and") || at_op("&")) {
      Token t = take();
      ExprPtr rhs = parse_comparison();
      if (!ok) return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Binary;
      e->op = t.text;
      e->args.push_back(std::move(lhs));
      e->args.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    if (!ok) return nullptr;
    while (at_word("or") || at_op("|")) {
      Token t = take();
      ExprPtr rhs = parse_and();
      if (!ok) return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Binary;
      e->op = t.text;
      e->args.push_back(std::move(lhs));
      e->args.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_or();
    if (!ok) return nullptr;
    if (at_op("=>")) {
      take();
      ExprPtr rhs = parse_or();
      if (!ok) return nullptr;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Binary;
      e->op = "=>";
      e->args.push_back(std::move(lhs));
      e->args.push_back(std::move(rhs));
      lhs = std::move(e);
    }
    return lhs;
  }

  // Parses the whole input as a single expression; fails on leftovers.
  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    if (!ok || peek().kind != TokKind::End) return fail();
    return e;
  }
};

ExprPtr try_parse_expr(std::string_view src) {
  ExprParser p(src);
  if (!p.ok) return nullptr;
  return p.parse_all();
}

// ---------------------------------------------------------------------------
// Line helpers
// ---------------------------------------------------------------------------

int measure_indent(std::string_view line, std::size_t* content_start) {
  int width = 0;
  std::size_t i = 0;
  for (; i < line.size(); ++i) {
    if (line[i] == ' ')
      ++width;
    else if (line[i] == '\t')
      width += 4;
    else
      break;
  }
  *content_start = i;
  return width;
}

// First '#' outside quotes, or npos.
std::size_t find_comment_start(std::string_view s) {
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return i;
    }
  }
  return std::string_view::npos;
}

// Position of the assignment '=' at top level (outside quotes/parens), or
// npos. Skips '==', '>=', '<=', '!=' and '=>'.
std::size_t find_assign_eq(std::string_view s) {
  char quote = 0;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '(' || c == '[') {
      ++depth;
    } else if (c == ')' || c == ']') {
      --depth;
    } else if (c == '=' && depth == 0) {
      char prev = i > 0 ? s[i - 1] : 0;
      char next = i + 1 < s.size() ? s[i + 1] : 0;
      if (prev == '=' || prev == '!' || prev == '<' || prev == '>') continue;
      if (next == '=' || next == '>') {
        ++i;  // skip the second char of "==" / "=>"
        continue;
      }
      return i;
    }
  }
  return std::string_view::npos;
}

bool is_question_marker(std::string_view comment_text) {
  std::string lowered = util::to_lower(comment_text);
  return util::contains(lowered, "variable that answers the question");
}

const char* forbidden_keyword(std::string_view content) {
  static const char* keywords[] = {"for", "while", "def", "class", "lambda"};
  for (const char* kw : keywords) {
    std::string_view k(kw);
    if (content.substr(0, k.size()) == k) {
      char after = content.size() > k.size() ? content[k.size()] : 0;
      if (after == 0 || after == ' ' || after == '(' || after == ':') return kw;
    }
  }
  return nullptr;
}

std::string indent_spaces(int width) { return std::string(std::size_t(std::max(width, 0)), ' '); }

std::string synthesize_line(const Statement& stmt);

std::string synthesize_comment_body(const std::string& text) {
  if (text.empty() || text[0] == ' ' || text[0] == '#') return "#" + text;
  return "# " + text;
}

std::string synthesize_line(const Statement& stmt) {
  const std::string ind = indent_spaces(stmt.indent);
  switch (stmt.kind) {
    case StatementKind::Blank:
      return "";
    case StatementKind::Comment:
      return ind + synthesize_comment_body(stmt.text);
    case StatementKind::Opaque:
      return stmt.raw;  // opaque lines are never synthesized
    case StatementKind::If: {
      std::string line = ind + "if " + render_expr(*stmt.condition) + ":";
      if (!stmt.trailing_comment.empty()) line += " " + synthesize_comment_body(stmt.trailing_comment);
      return line;
    }
    case StatementKind::Assign:
    case StatementKind::RuleDef: {
      std::string line = ind + render_expr(*stmt.target) + " = " + render_expr(*stmt.value);
      if (!stmt.trailing_comment.empty()) line += " " + synthesize_comment_body(stmt.trailing_comment);
      return line;
    }
  }
  return "";
}

void refresh_raw(Statement& stmt) { stmt.raw = synthesize_line(stmt); }

}  // namespace

// ---------------------------------------------------------------------------
// Expr / Statement structure
// ---------------------------------------------------------------------------

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->literal_kind = literal_kind;
  e->spelling = spelling;
  e->list_items = list_items;
  e->name = name;
  e->op = op;
  e->parenthesized = parenthesized;
  e->args.reserve(args.size());
  for (const auto& a : args) e->args.push_back(a->clone());
  return e;
}

Statement::Statement(const Statement& other)
    : kind(other.kind),
      raw(other.raw),
      indent(other.indent),
      text(other.text),
      target(other.target ? other.target->clone() : nullptr),
      value(other.value ? other.value->clone() : nullptr),
      trailing_comment(other.trailing_comment),
      question_marker(other.question_marker),
      condition(other.condition ? other.condition->clone() : nullptr),
      body(other.body) {}

Statement& Statement::operator=(const Statement& other) {
  if (this != &other) *this = Statement(other);
  return *this;
}

std::string render_expr(const Expr& expr) {
  std::string out;
  switch (expr.kind) {
    case ExprKind::Literal:
      if (expr.literal_kind == LiteralKind::StringList) {
        out = "[";
        for (std::size_t i = 0; i < expr.list_items.size(); ++i) {
          if (i) out += ", ";
          out += expr.list_items[i];
        }
        out += "]";
      } else {
        out = expr.spelling;
      }
      break;
    case ExprKind::Identifier:
      out = expr.name;
      break;
    case ExprKind::Call: {
      out = expr.name + "(";
      for (std::size_t i = 0; i < expr.args.size(); ++i) {
        if (i) out += ", ";
        out += render_expr(*expr.args[i]);
      }
      out += ")";
      break;
    }
    case ExprKind::Unary:
      out = expr.op == "not" ? "not " + render_expr(*expr.args[0]) : expr.op + render_expr(*expr.args[0]);
      break;
    case ExprKind::Binary:
      out = render_expr(*expr.args[0]) + " " + expr.op + " " + render_expr(*expr.args[1]);
      break;
  }
  if (expr.parenthesized) out = "(" + out + ")";
  return out;
}

std::vector<const Expr*> conjuncts(const Expr& expr) {
  std::vector<const Expr*> out;
  if (expr.kind == ExprKind::Binary && (expr.op == "and" || expr.op == "&") && !expr.parenthesized) {
    auto lhs = conjuncts(*expr.args[0]);
    out.insert(out.end(), lhs.begin(), lhs.end());
    auto rhs = conjuncts(*expr.args[1]);
    out.insert(out.end(), rhs.begin(), rhs.end());
  } else {
    out.push_back(&expr);
  }
  return out;
}

bool PseudoProgram::has_fatal_diagnostics() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Fatal; });
}

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

PseudoProgram parse(const std::string& text) {
  PseudoProgram program;
  std::vector<std::string> lines = util::split_lines(text);

  // Stack of open if statements, addressed as paths into the statement tree
  // (indices), so reallocation of vectors never invalidates them.
  struct OpenIf {
    std::vector<std::size_t> path;  // path to the if statement
    int header_indent;
  };
  std::vector<OpenIf> stack;
  std::vector<Statement> pending_blanks;

  auto container_for = [&](std::vector<std::size_t> path) -> std::vector<Statement>* {
    std::vector<Statement>* stmts = &program.statements;
    for (std::size_t idx : path) {
      stmts = &(*stmts)[idx].body;
    }
    return stmts;
  };

  auto current_container = [&]() -> std::vector<Statement>* {
    if (stack.empty()) return &program.statements;
    std::vector<Statement>* stmts = container_for(stack.back().path);
    return stmts;
  };

  auto current_path = [&]() -> std::vector<std::size_t> {
    return stack.empty() ? std::vector<std::size_t>{} : stack.back().path;
  };

  for (std::size_t line_no = 0; line_no < lines.size(); ++line_no) {
    const std::string& line = lines[line_no];
    int diag_line = int(line_no) + 1;

    std::size_t content_start = 0;
    int indent = measure_indent(line, &content_start);
    std::string content = line.substr(content_start);

    if (content.empty()) {
      Statement blank;
      blank.kind = StatementKind::Blank;
      blank.raw = line;
      pending_blanks.push_back(std::move(blank));
      continue;
    }

    // Close if-bodies the new indentation no longer belongs to.
    while (!stack.empty() && indent <= stack.back().header_indent) stack.pop_back();

    Statement stmt;
    stmt.raw = line;
    stmt.indent = indent;

    if (content[0] == '#') {
      stmt.kind = StatementKind::Comment;
      stmt.text = content.substr(1);
      if (is_question_marker(stmt.text)) {
        program.diagnostics.push_back(
            {Severity::Warning, diag_line, "question marker comment is not attached to an assignment"});
      }
    } else if (const char* kw = forbidden_keyword(content)) {
      stmt.kind = StatementKind::Opaque;
      stmt.text = content;
      program.diagnostics.push_back(
          {Severity::Fatal, diag_line, std::string("forbidden construct '") + kw + "' (loops, functions and classes are outside the dialect)"});
    } else if (content.rfind("if", 0) == 0 &&
               (content.size() == 2 || content[2] == ' ' || content[2] == '(')) {
      std::string cond_src = content.substr(2);
      std::size_t comment_pos = find_comment_start(cond_src);
      std::string header_comment;
      if (comment_pos != std::string::npos) {
        header_comment = cond_src.substr(comment_pos + 1);
        cond_src = cond_src.substr(0, comment_pos);
      }
      bool has_colon = false;
      std::string trimmed = util::trim(cond_src);
      if (!trimmed.empty() && trimmed.back() == ':') {
        has_colon = true;
        trimmed.pop_back();
      }
      ExprPtr cond = try_parse_expr(trimmed);
      if (cond) stmt.trailing_comment = header_comment;
      if (cond) {
        stmt.kind = StatementKind::If;
        stmt.condition = std::move(cond);
        if (!has_colon) {
          program.diagnostics.push_back({Severity::Info, diag_line, "if header missing ':'"});
        }
      } else {
        stmt.kind = StatementKind::Opaque;
        stmt.text = content;
        program.diagnostics.push_back({Severity::Warning, diag_line, "unparseable if condition"});
      }
    } else if (content.rfind("elif", 0) == 0 || content.rfind("else", 0) == 0) {
      stmt.kind = StatementKind::Opaque;
      stmt.text = content;
      program.diagnostics.push_back({Severity::Warning, diag_line, "elif/else is outside the dialect"});
    } else {
      std::size_t comment_pos = find_comment_start(content);
      std::string code_part = comment_pos == std::string::npos ? content : content.substr(0, comment_pos);
      std::string comment_part = comment_pos == std::string::npos ? "" : content.substr(comment_pos + 1);

      std::size_t eq = find_assign_eq(code_part);
      bool parsed = false;
      if (eq != std::string::npos) {
        ExprPtr target = try_parse_expr(code_part.substr(0, eq));
        ExprPtr value = try_parse_expr(code_part.substr(eq + 1));
        if (target && value &&
            (target->kind == ExprKind::Identifier || target->kind == ExprKind::Call)) {
          bool is_rule = value->kind == ExprKind::Binary && value->op == "=>";
          stmt.kind = is_rule ? StatementKind::RuleDef : StatementKind::Assign;
          stmt.target = std::move(target);
          stmt.value = std::move(value);
          stmt.trailing_comment = comment_part;
          if (!comment_part.empty() && is_question_marker(comment_part)) {
            stmt.question_marker = true;
            program.question_variable = render_expr(*stmt.target);
          }
          parsed = true;
        }
      }
      if (!parsed) {
        stmt.kind = StatementKind::Opaque;
        stmt.text = content;
        program.diagnostics.push_back({Severity::Warning, diag_line, "line outside dialect grammar"});
      }
    }

    // Identifier style note: a camel hump inside a name breaks snake case.
    if (stmt.kind == StatementKind::Assign || stmt.kind == StatementKind::RuleDef ||
        stmt.kind == StatementKind::If) {
      for (std::size_t i = 1; i < content.size(); ++i) {
        if (std::islower(static_cast<unsigned char>(content[i - 1])) &&
            std::isupper(static_cast<unsigned char>(content[i]))) {
          program.diagnostics.push_back({Severity::Info, diag_line, "identifier is not snake_case"});
          break;
        }
      }
    }

    std::vector<Statement>* container = current_container();
    for (auto& blank : pending_blanks) container->push_back(std::move(blank));
    pending_blanks.clear();

    bool opens_body = stmt.kind == StatementKind::If;
    container->push_back(std::move(stmt));
    if (opens_body) {
      std::vector<std::size_t> path = current_path();
      path.push_back(container->size() - 1);
      stack.push_back({std::move(path), indent});
    }
  }

  // Trailing blank lines are dropped: render() never emits a trailing
  // newline, so keeping them would break the parse/render fixpoint.
  pending_blanks.clear();

  // Empty if-bodies are kept but noted.
  struct Walker {
    PseudoProgram* prog;
    void walk(const std::vector<Statement>& stmts) {
      for (const auto& s : stmts) {
        if (s.kind == StatementKind::If) {
          bool any_code = std::any_of(s.body.begin(), s.body.end(), [](const Statement& b) {
            return b.kind != StatementKind::Blank;
          });
          if (!any_code)
            prog->diagnostics.push_back({Severity::Warning, 0, "if statement has an empty body"});
          walk(s.body);
        }
      }
    }
  };
  Walker{&program}.walk(program.statements);

  return program;
}

// ---------------------------------------------------------------------------
// render
// ---------------------------------------------------------------------------

namespace {

void render_statements(const std::vector<Statement>& stmts, std::vector<std::string>* lines) {
  for (const auto& s : stmts) {
    lines->push_back(s.raw.empty() && s.kind != StatementKind::Blank ? synthesize_line(s) : s.raw);
    if (s.kind == StatementKind::If) render_statements(s.body, lines);
  }
}

}  // namespace

std::string render(const PseudoProgram& program) {
  std::vector<std::string> lines;
  render_statements(program.statements, &lines);
  return util::join(lines, "\n");
}

// ---------------------------------------------------------------------------
// Derived tables
// ---------------------------------------------------------------------------

namespace {

VarKind kind_of_literal(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::True:
    case LiteralKind::False: return VarKind::Boolean;
    case LiteralKind::String: return VarKind::String;
    case LiteralKind::Number: return VarKind::Number;
    case LiteralKind::StringList: return VarKind::StringList;
    case LiteralKind::None: return VarKind::None;
  }
  return VarKind::None;
}

void collect_variables(const std::vector<Statement>& stmts, std::map<std::string, VarKind>* table) {
  for (const auto& s : stmts) {
    if ((s.kind == StatementKind::Assign) && s.value->kind == ExprKind::Literal) {
      std::string name = render_expr(*s.target);
      table->emplace(name, kind_of_literal(s.value->literal_kind));
    }
    if (s.kind == StatementKind::If) collect_variables(s.body, table);
  }
}

}  // namespace

std::map<std::string, VarKind> variable_table(const PseudoProgram& program) {
  std::map<std::string, VarKind> table;
  collect_variables(program.statements, &table);
  return table;
}

std::vector<VariableValue> initial_values(const PseudoProgram& program) {
  std::vector<VariableValue> values;
  std::map<std::string, bool> seen;
  for (const auto& s : program.statements) {
    if (s.kind != StatementKind::Assign || s.value->kind != ExprKind::Literal) continue;
    std::string name = render_expr(*s.target);
    if (seen.count(name)) continue;
    seen[name] = true;
    std::string spelling = s.value->literal_kind == LiteralKind::StringList
                               ? render_expr(*s.value)
                               : s.value->spelling;
    if (s.value->literal_kind == LiteralKind::String && spelling.size() >= 2) {
      spelling = spelling.substr(1, spelling.size() - 2);
    }
    values.push_back({std::move(name), s.value->literal_kind, std::move(spelling)});
  }
  return values;
}

// ---------------------------------------------------------------------------
// anonymize
// ---------------------------------------------------------------------------

namespace {

class NameMapper {
 public:
  std::string rename(const std::string& name) {
    auto it = map_.find(name);
    if (it != map_.end()) return it->second;
    std::string fresh = "var_" + std::to_string(map_.size() + 1);
    map_.emplace(name, fresh);
    order_.emplace_back(name, fresh);
    return fresh;
  }

  std::vector<std::pair<std::string, std::string>> take_order() { return std::move(order_); }

 private:
  std::map<std::string, std::string> map_;
  std::vector<std::pair<std::string, std::string>> order_;
};

void rename_expr(Expr& expr, NameMapper* mapper) {
  if (expr.kind == ExprKind::Identifier || expr.kind == ExprKind::Call) {
    expr.name = mapper->rename(expr.name);
  }
  for (auto& arg : expr.args) rename_expr(*arg, mapper);
}

void rename_statements(std::vector<Statement>& stmts, NameMapper* mapper) {
  for (auto& s : stmts) {
    switch (s.kind) {
      case StatementKind::Assign:
      case StatementKind::RuleDef:
        rename_expr(*s.target, mapper);
        rename_expr(*s.value, mapper);
        refresh_raw(s);
        break;
      case StatementKind::If:
        rename_expr(*s.condition, mapper);
        refresh_raw(s);
        rename_statements(s.body, mapper);
        break;
      default:
        break;  // comments, blanks and opaque lines stay byte-identical
    }
  }
}

}  // namespace

AnonymizeResult anonymize(const PseudoProgram& program) {
  AnonymizeResult result;
  result.program.statements = program.statements;
  result.program.diagnostics = program.diagnostics;
  NameMapper mapper;
  rename_statements(result.program.statements, &mapper);
  result.mapping = mapper.take_order();
  if (program.question_variable) {
    ExprPtr target = try_parse_expr(*program.question_variable);
    if (target) {
      rename_expr(*target, &mapper);
      result.program.question_variable = render_expr(*target);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// strip_comments
// ---------------------------------------------------------------------------

namespace {

std::vector<Statement> strip_comment_statements(const std::vector<Statement>& stmts) {
  std::vector<Statement> out;
  for (const auto& s : stmts) {
    if (s.kind == StatementKind::Comment) continue;
    Statement copy = s;
    if (!copy.trailing_comment.empty()) {
      copy.trailing_comment.clear();
      refresh_raw(copy);
    }
    if (copy.kind == StatementKind::If) copy.body = strip_comment_statements(copy.body);
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

PseudoProgram strip_comments(const PseudoProgram& program) {
  PseudoProgram out;
  out.statements = strip_comment_statements(program.statements);
  out.diagnostics = program.diagnostics;
  out.question_variable = program.question_variable;
  return out;
}

// ---------------------------------------------------------------------------
// splice_random
// ---------------------------------------------------------------------------

namespace {

bool is_code_kind(StatementKind kind) {
  return kind == StatementKind::Assign || kind == StatementKind::If || kind == StatementKind::RuleDef;
}

// Maximal runs of consecutive top-level code statements.
std::vector<std::vector<Statement>> code_runs(const PseudoProgram& program) {
  std::vector<std::vector<Statement>> runs;
  std::vector<Statement> current;
  for (const auto& s : program.statements) {
    if (is_code_kind(s.kind)) {
      current.push_back(s);
    } else if (!current.empty()) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) runs.push_back(std::move(current));
  return runs;
}

}  // namespace

PseudoProgram splice_random(const PseudoProgram& program, const PseudoProgram& donor,
                            std::uint64_t seed) {
  std::vector<std::vector<Statement>> donor_runs = code_runs(donor);
  if (donor_runs.empty()) throw Error("splice_random: donor has no code statements");

  util::CounterRng rng(seed, "splice_random");
  std::vector<std::size_t> deal;
  std::size_t deal_pos = 0;
  auto next_donor = [&]() -> const std::vector<Statement>& {
    if (deal_pos == deal.size()) {
      deal.resize(donor_runs.size());
      for (std::size_t i = 0; i < deal.size(); ++i) deal[i] = i;
      for (std::size_t i = deal.size(); i > 1; --i) {
        std::size_t j = std::size_t(rng.next_below(i));
        std::swap(deal[i - 1], deal[j]);
      }
      deal_pos = 0;
    }
    return donor_runs[deal[deal_pos++]];
  };

  PseudoProgram out;
  bool in_run = false;
  for (const auto& s : program.statements) {
    if (is_code_kind(s.kind)) {
      if (!in_run) {
        in_run = true;
        for (const auto& donor_stmt : next_donor()) out.statements.push_back(donor_stmt);
      }
      continue;  // original code statements are dropped
    }
    in_run = false;
    out.statements.push_back(s);
  }

  for (const auto& s : out.statements) {
    if (s.question_marker) out.question_variable = render_expr(*s.target);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

namespace {

void count_statements(const std::vector<Statement>& stmts, LineCounts* counts) {
  for (const auto& s : stmts) {
    switch (s.kind) {
      case StatementKind::Blank:
        break;
      case StatementKind::Comment:
        ++counts->non_blank_lines;
        break;
      case StatementKind::If:
        ++counts->non_blank_lines;
        ++counts->code_lines;
        ++counts->if_lines;
        count_statements(s.body, counts);
        break;
      default:
        ++counts->non_blank_lines;
        ++counts->code_lines;
        break;
    }
  }
}

}  // namespace

LineCounts count_lines(const PseudoProgram& program) {
  LineCounts counts;
  count_statements(program.statements, &counts);
  return counts;
}

double reasoning_op_ratio(const PseudoProgram& program) {
  LineCounts counts = count_lines(program);
  if (counts.code_lines == 0) return 0.0;
  return double(counts.if_lines) / double(counts.code_lines);
}

std::string desnake(const std::string& variable_name) {
  if (variable_name.empty()) throw Error("desnake: empty variable name");
  return "Key entity: " + util::replace_all(variable_name, "_", " ");
}

namespace {

void collect_kinds(const std::vector<Statement>& stmts, std::vector<StatementKind>* kinds) {
  for (const auto& s : stmts) {
    kinds->push_back(s.kind);
    if (s.kind == StatementKind::If) collect_kinds(s.body, kinds);
  }
}

void collect_comments(const std::vector<Statement>& stmts, std::vector<std::string>* out) {
  for (const auto& s : stmts) {
    if (s.kind == StatementKind::Comment) out->push_back(s.text);
    if (!s.trailing_comment.empty()) out->push_back(s.trailing_comment);
    if (s.kind == StatementKind::If) collect_comments(s.body, out);
  }
}

}  // namespace

std::vector<StatementKind> kind_sequence(const PseudoProgram& program) {
  std::vector<StatementKind> kinds;
  collect_kinds(program.statements, &kinds);
  return kinds;
}

std::vector<std::string> comment_texts(const PseudoProgram& program) {
  std::vector<std::string> out;
  collect_comments(program.statements, &out);
  return out;
}

}  // namespace codeprompt::pseudo
