#include "tml/parser.hpp"

#include <utility>

#include "tml/token.hpp"

namespace tml {

namespace {

bool is_decl_keyword(const Token& t) {
  return t.kind == TokenKind::Keyword &&
         (t.text == "machine" || t.text == "flow" || t.text == "trigger" ||
          t.text == "event" || t.text == "behavior");
}

// Thrown to unwind to the nearest recovery point; the diagnostic has already
// been recorded by then.
struct SyntaxError {};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic> diags)
      : diags_(std::move(diags)) {
    tokens_.reserve(tokens.size());
    for (auto& t : tokens)
      if (t.kind != TokenKind::Comment) tokens_.push_back(std::move(t));
  }

  Ast run() {
    Ast ast;
    while (!at_end()) {
      if (!is_decl_keyword(peek())) {
        error_here("expected a declaration (machine, flow, trigger, event or "
                   "behavior), found " + describe(peek()));
        synchronize(/*advance_first=*/true);
        continue;
      }
      try {
        const std::string& kw = peek().text;
        if (kw == "machine") {
          ast.decls.emplace_back(parse_machine());
        } else if (kw == "flow" || kw == "trigger") {
          ast.decls.emplace_back(parse_arc());
        } else if (kw == "event") {
          ast.decls.emplace_back(parse_event());
        } else {
          ast.decls.emplace_back(parse_behavior());
        }
      } catch (const SyntaxError&) {
        synchronize(/*advance_first=*/false);
      }
    }
    ast.diagnostics = std::move(diags_);
    return ast;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const { return tokens_[pos_]; }

  const Token& previous() const { return tokens_[pos_ - 1]; }

  const Token& advance() { return tokens_[pos_++]; }

  bool check_punct(char c) const { return !at_end() && peek().is_punct(c); }

  bool match_punct(char c) {
    if (!check_punct(c)) return false;
    ++pos_;
    return true;
  }

  Span here() const {
    if (!at_end()) return peek().span;
    if (!tokens_.empty()) return tokens_.back().span;
    return Span::at(1, 1);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::Str: return "a string literal";
      default: return "'" + t.text + "'";
    }
  }

  void error_here(std::string message) {
    diags_.push_back(
        Diagnostic{Severity::Error, "P1", std::move(message), here(), {}});
  }

  [[noreturn]] void fail(std::string message) {
    error_here(std::move(message));
    throw SyntaxError{};
  }

  const Token& expect_ident(const char* what) {
    if (!at_end() && peek().kind == TokenKind::Ident) return advance();
    fail(std::string("expected ") + what +
         (at_end() ? " at end of file" : ", found " + describe(peek())));
  }

  void expect_punct(char c, const char* context) {
    if (match_punct(c)) return;
    fail(std::string("expected '") + c + "' " + context +
         (at_end() ? " at end of file" : ", found " + describe(peek())));
  }

  std::optional<std::string> optional_string() {
    if (!at_end() && peek().kind == TokenKind::Str) return advance().value;
    return std::nullopt;
  }

  // Skips to the next top-level declaration keyword, balancing braces so a
  // keyword inside a half-parsed block does not end recovery early.
  void synchronize(bool advance_first) {
    int depth = 0;
    if (advance_first && !at_end()) {
      if (peek().is_punct('{')) ++depth;
      ++pos_;
    }
    while (!at_end()) {
      const Token& t = peek();
      if (t.is_punct('{')) {
        ++depth;
      } else if (t.is_punct('}')) {
        if (depth > 0) --depth;
      } else if (depth == 0 && is_decl_keyword(t)) {
        return;
      }
      ++pos_;
    }
  }

  AstMachine parse_machine() {
    Span start = peek().span;
    advance();  // machine
    AstMachine m;
    m.name = expect_ident("a machine name after 'machine'").text;
    m.label = optional_string();
    expect_punct('{', "to open the machine body");
    while (!at_end() && !check_punct('}')) {
      const Token& t = peek();
      if (t.kind == TokenKind::Keyword && is_stage_keyword(t.text)) {
        AstStage stage;
        stage.kind = *stage_kind_from(t.text);
        stage.span = t.span;
        advance();
        stage.label = optional_string();
        m.items.push_back(AstMachineItem{std::move(stage)});
      } else if (t.is_keyword("store")) {
        Span sspan = t.span;
        advance();
        AstStore store;
        store.name = expect_ident("a store name after 'store'").text;
        store.span = sspan;
        m.items.push_back(AstMachineItem{std::move(store)});
      } else if (t.is_keyword("machine")) {
        m.items.push_back(AstMachineItem{parse_machine()});
      } else {
        fail("expected a stage keyword, 'store', 'machine' or '}' in machine "
             "body, found " + describe(t));
      }
    }
    expect_punct('}', "to close the machine body");
    m.span = Span{start.line, start.col, previous().span.end_line,
                  previous().span.end_col};
    return m;
  }

  // Accepts any dotted identifier/stage-keyword sequence; whether the tail is
  // a stage keyword is a resolution question, which keeps errors like
  // `Dragon.fly` out of the parser.
  AstPath parse_path(const char* what) {
    AstPath p;
    for (;;) {
      if (at_end() || (peek().kind != TokenKind::Ident &&
                       !(peek().kind == TokenKind::Keyword &&
                         is_stage_keyword(peek().text)))) {
        fail(std::string("expected ") + what +
             (at_end() ? " at end of file" : ", found " + describe(peek())));
      }
      const Token& seg = advance();
      p.segments.push_back(AstPathSegment{seg.text, seg.span});
      if (!match_punct('.')) break;
    }
    p.span = Span{p.segments.front().span.line, p.segments.front().span.col,
                  p.segments.back().span.end_line,
                  p.segments.back().span.end_col};
    return p;
  }

  AstArc parse_arc() {
    Span start = peek().span;
    AstArc arc;
    arc.trigger = peek().text == "trigger";
    advance();  // flow | trigger
    arc.src = parse_path("a source path");
    if (arc.trigger) {
      if (!at_end() && peek().kind == TokenKind::Arrow) {
        error_here("triggers use '=>', not '->'");
        advance();
      } else if (at_end() || peek().kind != TokenKind::TriggerArrow) {
        fail("expected '=>' after the trigger source");
      } else {
        advance();
      }
    } else {
      if (!at_end() && peek().kind == TokenKind::TriggerArrow) {
        error_here("flows use '->', not '=>'");
        advance();
      } else if (at_end() || peek().kind != TokenKind::Arrow) {
        fail("expected '->' after the flow source");
      } else {
        advance();
      }
    }
    arc.dst = parse_path("a destination path");
    if (!at_end() && peek().is_keyword("as")) {
      advance();
      arc.name = expect_ident("an arc name after 'as'").text;
    }
    arc.label = optional_string();
    arc.span = Span{start.line, start.col, previous().span.end_line,
                    previous().span.end_col};
    return arc;
  }

  AstEvent parse_event() {
    Span start = peek().span;
    advance();  // event
    AstEvent ev;
    const Token& id = expect_ident("an event id after 'event'");
    ev.id = id.text;
    ev.id_span = id.span;
    ev.label = optional_string();
    expect_punct('{', "to open the event body");
    if (at_end() || !peek().is_keyword("region"))
      fail("expected 'region' in event body");
    advance();
    expect_punct(':', "after 'region'");
    expect_punct('[', "to open the region list");
    for (;;) {
      ev.region.push_back(parse_path("a region member"));
      if (!match_punct(',')) break;
    }
    expect_punct(']', "to close the region list");
    if (!at_end() && peek().is_keyword("time")) {
      advance();
      expect_punct(':', "after 'time'");
      if (at_end() || peek().kind != TokenKind::Str)
        fail("expected a string literal after 'time:'");
      ev.time = advance().value;
    }
    expect_punct('}', "to close the event body");
    ev.span = Span{start.line, start.col, previous().span.end_line,
                   previous().span.end_col};
    return ev;
  }

  AstBehavior parse_behavior() {
    Span start = peek().span;
    advance();  // behavior
    AstBehavior b;
    expect_punct('{', "to open the behavior body");
    while (!at_end() && !check_punct('}')) {
      const Token& from = expect_ident("an event id in behavior body");
      if (at_end() || peek().kind != TokenKind::Arrow)
        fail("expected '->' between behavior events");
      advance();
      const Token& to = expect_ident("an event id after '->'");
      b.edges.push_back(AstBehaviorEdge{
          from.text, to.text,
          Span{from.span.line, from.span.col, to.span.end_line,
               to.span.end_col}});
    }
    expect_punct('}', "to close the behavior body");
    b.span = Span{start.line, start.col, previous().span.end_line,
                  previous().span.end_col};
    return b;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

Ast parse(std::string_view source) {
  LexResult lexed = tokenize(source);
  Ast ast = Parser(std::move(lexed.tokens), std::move(lexed.diagnostics)).run();
  sort_diagnostics(ast.diagnostics);
  return ast;
}

}  // namespace tml
