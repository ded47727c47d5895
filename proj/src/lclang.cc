// Copyright 2026 The Declearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "declearn/lclang.h"

#include <cctype>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace declearn {

bool operator==(const LcExpr& a, const LcExpr& b) {
  return a.kind == b.kind && a.concept_name == b.concept_name &&
         a.var == b.var && a.path == b.path && a.k == b.k &&
         a.children == b.children && a.concepts == b.concepts;
}

LcExpr Atom(std::string concept_name, std::optional<std::string> var,
            std::optional<Path> path) {
  LcExpr e;
  e.kind = ExprKind::kAtom;
  e.concept_name = std::move(concept_name);
  e.var = std::move(var);
  e.path = std::move(path);
  return e;
}

namespace {

LcExpr Node(ExprKind kind, std::vector<LcExpr> children) {
  LcExpr e;
  e.kind = kind;
  e.children = std::move(children);
  return e;
}

}  // namespace

LcExpr NotL(LcExpr child) { return Node(ExprKind::kNot, {std::move(child)}); }
LcExpr AndL(std::vector<LcExpr> children) {
  return Node(ExprKind::kAnd, std::move(children));
}
LcExpr OrL(std::vector<LcExpr> children) {
  return Node(ExprKind::kOr, std::move(children));
}
LcExpr IfL(LcExpr antecedent, LcExpr consequent) {
  return Node(ExprKind::kIf, {std::move(antecedent), std::move(consequent)});
}
LcExpr ExistsL(LcExpr child) {
  return Node(ExprKind::kExists, {std::move(child)});
}
LcExpr AtMostL(int k, std::vector<LcExpr> children) {
  LcExpr e = Node(ExprKind::kAtMost, std::move(children));
  e.k = k;
  return e;
}
LcExpr Disjoint(std::vector<std::string> concepts) {
  LcExpr e;
  e.kind = ExprKind::kDisjoint;
  e.concepts = std::move(concepts);
  return e;
}

const Constraint& ConstraintSet::add(LcExpr expr) {
  constraints.push_back(
      Constraint{fmt::format("lc{}", constraints.size()), std::move(expr)});
  return constraints.back();
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kIdent,
  kString,
  kInt,
  kLParen,
  kRParen,
  kComma,
  kEquals,
  kSemi,
  kColon,
  kDot,
  kEnd
};

struct Token {
  Tok type = Tok::kEnd;
  std::string text;
  SourceLoc loc;
};

const std::set<std::string, std::less<>> kKeywords = {
    "concept", "has_a", "contains", "path",    "ifL",
    "andL",    "orL",   "notL",     "existsL", "atMostL", "disjoint"};

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_')) {
        ++j;
      }
      out.push_back(Token{Tok::kIdent, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      out.push_back(Token{Tok::kInt, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (c == '\'' || c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != c && src[j] != '\n') ++j;
      if (j >= src.size() || src[j] != c) {
        throw Error(ErrorCode::kSyntaxError, "unterminated string", loc);
      }
      out.push_back(
          Token{Tok::kString, std::string(src.substr(i + 1, j - i - 1)), loc});
      advance(j - i + 1);
      continue;
    }
    Tok type;
    switch (c) {
      case '(': type = Tok::kLParen; break;
      case ')': type = Tok::kRParen; break;
      case ',': type = Tok::kComma; break;
      case '=': type = Tok::kEquals; break;
      case ';': type = Tok::kSemi; break;
      case ':': type = Tok::kColon; break;
      case '.': type = Tok::kDot; break;
      default:
        throw Error(ErrorCode::kSyntaxError,
                    fmt::format("unexpected character '{}'", c), loc);
    }
    out.push_back(Token{type, std::string(1, c), loc});
    advance(1);
  }
  out.push_back(Token{Tok::kEnd, "", SourceLoc{line, col}});
  return out;
}

std::string_view TokName(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kString: return "string";
    case Tok::kInt: return "integer";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kEquals: return "'='";
    case Tok::kSemi: return "';'";
    case Tok::kColon: return "':'";
    case Tok::kDot: return "'.'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(Lex(src)) {}

  Document ParseDocument() {
    Document doc;
    while (!At(Tok::kEnd)) {
      if (Accept(Tok::kSemi)) continue;
      if (AtIdent("concept")) {
        ParseConceptDecl(doc.graph);
      } else if (AtEdgeDecl()) {
        ParseEdgeDecl(doc.graph);
      } else {
        const SourceLoc loc = Peek().loc;
        LcExpr e = ParseExpr();
        e.loc = loc;
        doc.constraints.add(std::move(e));
      }
      if (!At(Tok::kEnd) && !Accept(Tok::kSemi) &&
          Peek().loc.line == Prev().loc.line) {
        Fail(fmt::format("expected end of statement, found {}",
                         Describe(Peek())));
      }
    }
    return doc;
  }

  LcExpr ParseSingleExpr() {
    LcExpr e = ParseExpr();
    Accept(Tok::kSemi);
    if (!At(Tok::kEnd)) {
      Fail(fmt::format("trailing input: {}", Describe(Peek())));
    }
    return e;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& Prev() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool At(Tok t) const { return Peek().type == t; }
  bool AtIdent(std::string_view text) const {
    return At(Tok::kIdent) && Peek().text == text;
  }
  bool Accept(Tok t) {
    if (!At(t)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    throw Error(ErrorCode::kSyntaxError, msg, Peek().loc);
  }
  static std::string Describe(const Token& t) {
    if (t.type == Tok::kIdent || t.type == Tok::kInt) {
      return fmt::format("'{}'", t.text);
    }
    if (t.type == Tok::kString) return fmt::format("string '{}'", t.text);
    return std::string(TokName(t.type));
  }
  const Token& Expect(Tok t) {
    if (!At(t)) {
      Fail(fmt::format("expected {}, found {}", TokName(t), Describe(Peek())));
    }
    return tokens_[pos_++];
  }
  std::string ExpectName() {
    const Token& t = Expect(Tok::kIdent);
    if (kKeywords.count(t.text)) {
      throw Error(ErrorCode::kSyntaxError,
                  fmt::format("'{}' is a reserved word", t.text), t.loc);
    }
    return t.text;
  }

  bool AtEdgeDecl() const {
    if (!At(Tok::kIdent) || kKeywords.count(Peek().text)) return false;
    auto edge_word = [](const Token& t) {
      return t.type == Tok::kIdent &&
             (t.text == "has_a" || t.text == "contains");
    };
    return edge_word(Peek(1)) ||
           (Peek(1).type == Tok::kDot && edge_word(Peek(2)));
  }

  // Re-throws graph builder errors with the statement location attached.
  template <typename Fn>
  void AtLoc(SourceLoc loc, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.loc().line > 0) throw;
      throw Error(e.code(), e.message(), loc);
    }
  }

  void ParseConceptDecl(ConceptGraph& graph) {
    Expect(Tok::kIdent);  // concept
    const SourceLoc loc = Peek().loc;
    std::string name = ExpectName();
    std::optional<std::string> parent;
    if (Accept(Tok::kColon)) parent = ExpectName();
    AtLoc(loc, [&] {
      graph.add_concept(name,
                        parent ? ConceptKind::kDecision : ConceptKind::kBasic,
                        parent);
    });
  }

  void ParseEdgeDecl(ConceptGraph& graph) {
    const SourceLoc loc = Peek().loc;
    std::string source = ExpectName();
    Accept(Tok::kDot);
    const std::string word = Expect(Tok::kIdent).text;
    if (word == "has_a") {
      Expect(Tok::kLParen);
      std::vector<NamedArg> args;
      do {
        std::string arg = ExpectName();
        Expect(Tok::kEquals);
        args.push_back(NamedArg{std::move(arg), ExpectName()});
      } while (Accept(Tok::kComma));
      Expect(Tok::kRParen);
      AtLoc(loc, [&] { graph.add_has_a(source, args); });
      return;
    }
    // contains: `A contains B, C` or `A.contains(B, C)`.
    const bool call = Accept(Tok::kLParen);
    std::vector<std::pair<SourceLoc, std::string>> children;
    do {
      const SourceLoc child_loc = Peek().loc;
      children.emplace_back(child_loc, ExpectName());
    } while (Accept(Tok::kComma));
    if (call) Expect(Tok::kRParen);
    for (const auto& [child_loc, child] : children) {
      AtLoc(child_loc, [&] { graph.add_contains(source, child); });
    }
  }

  LcExpr ParseExpr() {
    const SourceLoc loc = Peek().loc;
    const Token& head = Expect(Tok::kIdent);
    LcExpr e;
    if (head.text == "ifL") {
      Expect(Tok::kLParen);
      LcExpr a = ParseExpr();
      Expect(Tok::kComma);
      LcExpr b = ParseExpr();
      Expect(Tok::kRParen);
      e = IfL(std::move(a), std::move(b));
    } else if (head.text == "andL" || head.text == "orL") {
      std::vector<LcExpr> children = ParseExprList();
      e = head.text == "andL" ? AndL(std::move(children))
                              : OrL(std::move(children));
    } else if (head.text == "notL" || head.text == "existsL") {
      Expect(Tok::kLParen);
      LcExpr child = ParseExpr();
      Expect(Tok::kRParen);
      e = head.text == "notL" ? NotL(std::move(child))
                              : ExistsL(std::move(child));
    } else if (head.text == "atMostL") {
      Expect(Tok::kLParen);
      const Token& k = Expect(Tok::kInt);
      if (k.text.size() > 9) {
        throw Error(ErrorCode::kSyntaxError, "atMostL bound too large", k.loc);
      }
      std::vector<LcExpr> children;
      while (Accept(Tok::kComma)) children.push_back(ParseExpr());
      Expect(Tok::kRParen);
      e = AtMostL(std::stoi(k.text), std::move(children));
    } else if (head.text == "disjoint") {
      Expect(Tok::kLParen);
      std::vector<std::string> names;
      do {
        names.push_back(ExpectName());
      } while (Accept(Tok::kComma));
      Expect(Tok::kRParen);
      e = Disjoint(std::move(names));
    } else if (kKeywords.count(head.text)) {
      throw Error(ErrorCode::kSyntaxError,
                  fmt::format("unexpected '{}' in expression", head.text),
                  head.loc);
    } else {
      e = ParseAtom(head.text);
    }
    e.loc = loc;
    return e;
  }

  std::vector<LcExpr> ParseExprList() {
    Expect(Tok::kLParen);
    std::vector<LcExpr> out;
    do {
      out.push_back(ParseExpr());
    } while (Accept(Tok::kComma));
    Expect(Tok::kRParen);
    return out;
  }

  LcExpr ParseAtom(const std::string& name) {
    LcExpr atom = Atom(name);
    if (!Accept(Tok::kLParen)) return atom;
    if (Accept(Tok::kRParen)) return atom;
    if (At(Tok::kString)) {
      atom.var = Expect(Tok::kString).text;
      if (Accept(Tok::kRParen)) return atom;
      Expect(Tok::kComma);
    }
    if (!AtIdent("path")) {
      Fail(fmt::format("expected 'path=' or ')', found {}", Describe(Peek())));
    }
    ++pos_;
    Expect(Tok::kEquals);
    atom.path = ParsePath();
    Expect(Tok::kRParen);
    return atom;
  }

  Path ParsePath() {
    Path path;
    if (At(Tok::kString)) {
      path.root_var = Expect(Tok::kString).text;
      return path;
    }
    Expect(Tok::kLParen);
    path.root_var = Expect(Tok::kString).text;
    while (Accept(Tok::kComma)) {
      PathStep step;
      step.name = ExpectName();
      if (Accept(Tok::kDot)) {
        step.via = std::move(step.name);
        step.name = ExpectName();
      }
      path.steps.push_back(std::move(step));
    }
    Expect(Tok::kRParen);
    return path;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Well-formedness

class Checker {
 public:
  Checker(const ConceptGraph& graph, ValidationReport& report)
      : graph_(graph), report_(report) {}

  void Check(const LcExpr& e, bool top_level, bool under_exists) {
    switch (e.kind) {
      case ExprKind::kAtom:
        CheckAtom(e, under_exists);
        return;
      case ExprKind::kDisjoint:
        CheckDisjoint(e, top_level);
        return;
      case ExprKind::kNot:
        Arity(e, "notL", e.children.size() == 1, "exactly 1");
        break;
      case ExprKind::kIf:
        Arity(e, "ifL", e.children.size() == 2, "exactly 2");
        break;
      case ExprKind::kExists:
        Arity(e, "existsL", e.children.size() == 1, "exactly 1");
        break;
      case ExprKind::kAnd:
        Arity(e, "andL", e.children.size() >= 2, "at least 2");
        break;
      case ExprKind::kOr:
        Arity(e, "orL", e.children.size() >= 2, "at least 2");
        break;
      case ExprKind::kAtMost:
        Arity(e, "atMostL", !e.children.empty(), "at least 1");
        if (e.k < 1) {
          report_.add(Severity::kError, "arity",
                      fmt::format("atMostL bound must be positive, got {}", e.k),
                      e.loc);
        }
        break;
    }
    const std::size_t scope_mark = scope_.size();
    const bool exists = e.kind == ExprKind::kExists;
    for (const LcExpr& child : e.children) {
      Check(child, false, exists);
    }
    // Variables bound under existsL are local to it.
    if (exists) scope_.resize(scope_mark);
  }

 private:
  void Arity(const LcExpr& e, std::string_view op, bool ok,
             std::string_view want) {
    if (!ok) {
      report_.add(Severity::kError, "arity",
                  fmt::format("{} takes {} operands, got {}", op, want,
                              e.children.size()),
                  e.loc);
    }
  }

  const std::string* Lookup(const std::string& var) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == var) return &it->second;
    }
    return nullptr;
  }

  void CheckAtom(const LcExpr& e, bool direct_exists_child) {
    if (!graph_.has_concept(e.concept_name)) {
      report_.add(Severity::kError, "unknown_concept",
                  fmt::format("unknown concept '{}'", e.concept_name), e.loc);
      return;
    }
    const std::string atom_root = graph_.root(e.concept_name);
    if (e.path) {
      const std::string* start = Lookup(e.path->root_var);
      if (start == nullptr) {
        report_.add(Severity::kError, "unbound_variable",
                    fmt::format("path of '{}' starts at unbound variable '{}'",
                                e.concept_name, e.path->root_var),
                    e.loc);
        return;
      }
      std::string current = *start;
      for (const PathStep& step : e.path->steps) {
        std::optional<ResolvedStep> r = ResolveStep(graph_, current, step);
        if (!r) {
          report_.add(
              Severity::kError, "bad_path",
              fmt::format("step '{}' does not lead anywhere from '{}' in "
                          "path {}",
                          step.via.empty() ? step.name
                                           : step.via + "." + step.name,
                          current, Pretty(*e.path)),
              e.loc);
          return;
        }
        current = r->target;
      }
      if (graph_.root(current) != atom_root) {
        report_.add(Severity::kError, "bad_path",
                    fmt::format("path {} reaches '{}' which is not a '{}'",
                                Pretty(*e.path), current, e.concept_name),
                    e.loc);
        return;
      }
      if (e.var) {
        if (Lookup(*e.var)) {
          report_.add(Severity::kError, "rebound_variable",
                      fmt::format("variable '{}' is already bound", *e.var),
                      e.loc);
          return;
        }
        scope_.emplace_back(*e.var, e.concept_name);
      }
      return;
    }
    if (e.var) {
      if (const std::string* bound = Lookup(*e.var)) {
        if (graph_.root(*bound) != atom_root) {
          report_.add(Severity::kError, "bad_path",
                      fmt::format("variable '{}' holds a '{}', not a '{}'",
                                  *e.var, graph_.root(*bound), e.concept_name),
                      e.loc);
        }
        return;
      }
      scope_.emplace_back(*e.var, e.concept_name);
      return;
    }
    if (!direct_exists_child) {
      report_.add(Severity::kError, "bare_atom",
                  fmt::format("'{}' needs a variable or a path outside existsL",
                              e.concept_name),
                  e.loc);
    }
  }

  void CheckDisjoint(const LcExpr& e, bool top_level) {
    if (!top_level) {
      report_.add(Severity::kError, "disjoint_nested",
                  "disjoint is only allowed as a top-level constraint", e.loc);
    }
    if (e.concepts.size() < 2) {
      report_.add(Severity::kError, "arity",
                  fmt::format("disjoint takes at least 2 concepts, got {}",
                              e.concepts.size()),
                  e.loc);
    }
    bool known = true;
    std::set<std::string> seen;
    for (const std::string& c : e.concepts) {
      if (!graph_.has_concept(c)) {
        report_.add(Severity::kError, "unknown_concept",
                    fmt::format("unknown concept '{}'", c), e.loc);
        known = false;
      } else if (!seen.insert(c).second) {
        report_.add(Severity::kError, "arity",
                    fmt::format("disjoint lists '{}' twice", c), e.loc);
      }
    }
    if (known && e.concepts.size() >= 2 &&
        !graph_.common_ancestor(e.concepts)) {
      report_.add(Severity::kError, "disjoint_ancestor",
                  "disjoint concepts share no common is_a ancestor", e.loc);
    }
  }

  const ConceptGraph& graph_;
  ValidationReport& report_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

std::optional<ResolvedStep> ResolveStep(const ConceptGraph& graph,
                                        std::string_view from,
                                        const PathStep& step) {
  if (!graph.has_concept(from)) return std::nullopt;
  const std::string from_root = graph.root(from);
  if (!step.via.empty()) {
    if (!graph.has_concept(step.via)) return std::nullopt;
    std::optional<std::string> target = graph.arg_target(step.via, step.name);
    if (!target) return std::nullopt;
    for (const NamedArg& a : graph.has_a_args(step.via)) {
      if (a.arg_name != step.name && graph.root(a.concept_name) == from_root) {
        return ResolvedStep{StepKind::kVia, *target};
      }
    }
    return std::nullopt;
  }
  if (std::optional<std::string> target = graph.arg_target(from_root, step.name)) {
    return ResolvedStep{StepKind::kArg, *target};
  }
  if (graph.has_concept(step.name)) {
    if (graph.has_contains(from_root, step.name)) {
      return ResolvedStep{StepKind::kContainsDown, step.name};
    }
    if (graph.has_contains(step.name, from_root)) {
      return ResolvedStep{StepKind::kContainsUp, step.name};
    }
  }
  return std::nullopt;
}

Document ParseSyntax(std::string_view source) {
  return Parser(source).ParseDocument();
}

Document Parse(std::string_view source) {
  Document doc = ParseSyntax(source);
  for (const Constraint& c : doc.constraints.constraints) {
    ValidationReport report = CheckWellFormed(c.expr, doc.graph);
    if (!report.ok()) {
      const Issue& first = report.issues.front();
      throw Error(IssueErrorCode(first.code), first.message,
                  first.loc.line > 0 ? first.loc : c.expr.loc);
    }
  }
  return doc;
}

LcExpr ParseExpr(std::string_view source) {
  return Parser(source).ParseSingleExpr();
}

ValidationReport CheckWellFormed(const LcExpr& expr,
                                 const ConceptGraph& graph) {
  ValidationReport report;
  Checker(graph, report).Check(expr, true, false);
  return report;
}

ErrorCode IssueErrorCode(std::string_view issue_code) {
  if (issue_code == "unknown_concept") return ErrorCode::kUnknownConcept;
  if (issue_code == "unbound_variable") return ErrorCode::kUnboundVariable;
  if (issue_code == "bad_path") return ErrorCode::kBadPath;
  if (issue_code == "arity") return ErrorCode::kSyntaxError;
  return ErrorCode::kSchemaError;
}

// ---------------------------------------------------------------------------
// Printer

std::string Pretty(const Path& path) {
  std::string out = fmt::format("('{}'", path.root_var);
  for (const PathStep& s : path.steps) {
    out += ", ";
    if (!s.via.empty()) out += s.via + ".";
    out += s.name;
  }
  return out + ")";
}

std::string Pretty(const LcExpr& e) {
  auto list = [](std::string_view head, const std::vector<LcExpr>& xs,
                 std::string prefix = "") {
    std::string out = std::string(head) + "(" + prefix;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0 || !prefix.empty()) out += ", ";
      out += Pretty(xs[i]);
    }
    return out + ")";
  };
  switch (e.kind) {
    case ExprKind::kAtom: {
      if (!e.var && !e.path) return e.concept_name;
      std::string out = e.concept_name + "(";
      if (e.var) out += fmt::format("'{}'", *e.var);
      if (e.var && e.path) out += ", ";
      if (e.path) out += "path=" + Pretty(*e.path);
      return out + ")";
    }
    case ExprKind::kNot: return list("notL", e.children);
    case ExprKind::kAnd: return list("andL", e.children);
    case ExprKind::kOr: return list("orL", e.children);
    case ExprKind::kIf: return list("ifL", e.children);
    case ExprKind::kExists: return list("existsL", e.children);
    case ExprKind::kAtMost:
      return list("atMostL", e.children, std::to_string(e.k));
    case ExprKind::kDisjoint: {
      std::string out = "disjoint(";
      for (std::size_t i = 0; i < e.concepts.size(); ++i) {
        if (i > 0) out += ", ";
        out += e.concepts[i];
      }
      return out + ")";
    }
  }
  return "";
}

std::string PrettyGraph(const ConceptGraph& graph) {
  std::string out;
  for (const Concept& c : graph.concepts()) {
    out += "concept " + c.name;
    if (c.kind == ConceptKind::kDecision && c.parent) out += " : " + *c.parent;
    out += ";\n";
  }
  std::map<std::string, std::vector<NamedArg>> has_a;
  std::vector<std::string> order;
  for (const Edge& e : graph.edges()) {
    if (e.kind == EdgeKind::kHasA) {
      if (!has_a.count(e.src)) order.push_back(e.src);
      has_a[e.src].push_back(NamedArg{e.arg_name, e.dst});
    }
  }
  for (const std::string& src : order) {
    out += src + " has_a (";
    const auto& args = has_a[src];
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) out += ", ";
      out += args[i].arg_name + "=" + args[i].concept_name;
    }
    out += ");\n";
  }
  for (const Edge& e : graph.edges()) {
    if (e.kind == EdgeKind::kContains) {
      out += e.src + " contains " + e.dst + ";\n";
    }
  }
  return out;
}

}  // namespace declearn
