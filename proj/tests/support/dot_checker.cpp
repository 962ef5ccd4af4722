#include "support/dot_checker.hpp"

#include <cctype>
#include <vector>

namespace tml::test {

namespace {

// Token kinds: identifiers/strings/numbers collapse to Id; structure is
// punctuation plus the arrow.
enum class Kind { Id, Punct, Arrow, End };

struct Tok {
  Kind kind;
  std::string text;
};

struct Lexer {
  const std::string& src;
  std::size_t at = 0;
  std::string error;

  Tok next() {
    while (at < src.size() && std::isspace(static_cast<unsigned char>(src[at])))
      ++at;
    if (at >= src.size()) return {Kind::End, ""};
    char c = src[at];
    if (c == '"') {
      std::string text;
      ++at;
      while (at < src.size() && src[at] != '"') {
        if (src[at] == '\\') {
          if (at + 1 >= src.size()) break;
          text += src[at + 1];
          at += 2;
          continue;
        }
        text += src[at++];
      }
      if (at >= src.size()) {
        error = "unterminated string";
        return {Kind::End, ""};
      }
      ++at;  // closing quote
      return {Kind::Id, text};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = at;
      while (at < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[at])) ||
              src[at] == '_'))
        ++at;
      return {Kind::Id, src.substr(start, at - start)};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      if (c == '-' && at + 1 < src.size() && src[at + 1] == '>') {
        at += 2;
        return {Kind::Arrow, "->"};
      }
      std::size_t start = at;
      if (c == '-' || c == '.') ++at;
      while (at < src.size() &&
             (std::isdigit(static_cast<unsigned char>(src[at])) ||
              src[at] == '.'))
        ++at;
      if (at == start) {
        error = std::string("stray character '") + c + "'";
        return {Kind::End, ""};
      }
      return {Kind::Id, src.substr(start, at - start)};
    }
    if (c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == ',' ||
        c == '=') {
      ++at;
      return {Kind::Punct, std::string(1, c)};
    }
    error = std::string("stray character '") + c + "'";
    return {Kind::End, ""};
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_{text, 0, ""} {
    advance();
  }

  DotCheck run() {
    if (!expect_id("digraph")) return fail();
    if (tok_.kind == Kind::Id) advance();  // optional graph name
    if (!expect_punct("{")) return fail();
    if (!statements()) return fail();
    if (!expect_punct("}")) return fail();
    if (tok_.kind != Kind::End) {
      error_ = "trailing content after closing brace";
      return fail();
    }
    if (!lexer_.error.empty()) {
      error_ = lexer_.error;
      return fail();
    }
    DotCheck out;
    out.ok = true;
    out.nodes = nodes_;
    out.edges = edges_;
    out.clusters = clusters_;
    return out;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  bool at_punct(const std::string& p) const {
    return tok_.kind == Kind::Punct && tok_.text == p;
  }

  bool expect_punct(const std::string& p) {
    if (!at_punct(p)) {
      error_ = "expected '" + p + "'";
      return false;
    }
    advance();
    return true;
  }

  bool expect_id(const std::string& word) {
    if (tok_.kind != Kind::Id || tok_.text != word) {
      error_ = "expected '" + word + "'";
      return false;
    }
    advance();
    return true;
  }

  DotCheck fail() {
    DotCheck out;
    out.error = error_.empty() ? lexer_.error : error_;
    if (out.error.empty()) out.error = "malformed DOT";
    return out;
  }

  // Statement list inside braces.
  bool statements() {
    while (!at_punct("}") && tok_.kind != Kind::End) {
      if (!statement()) return false;
      while (at_punct(";")) advance();
    }
    return true;
  }

  bool statement() {
    if (tok_.kind != Kind::Id) {
      error_ = "expected statement";
      return false;
    }
    std::string head = tok_.text;
    if (head == "subgraph") {
      advance();
      std::string name;
      if (tok_.kind == Kind::Id) {
        name = tok_.text;
        advance();
      }
      if (name.rfind("cluster", 0) == 0) ++clusters_;
      if (!expect_punct("{")) return false;
      if (!statements()) return false;
      return expect_punct("}");
    }
    advance();
    if (at_punct("=")) {  // graph attribute: ID = ID
      advance();
      if (tok_.kind != Kind::Id) {
        error_ = "expected value after '='";
        return false;
      }
      advance();
      return true;
    }
    if (head == "graph" || head == "node" || head == "edge") {
      return attr_list();  // default-attribute statement
    }
    // Node or edge statement.
    bool had_attrs = false;
    if (at_punct("[")) {
      if (!attr_list()) return false;
      had_attrs = true;
    }
    if (tok_.kind != Kind::Arrow) {
      ++nodes_;
      return true;
    }
    if (had_attrs) {
      error_ = "edge after attribute list";
      return false;
    }
    while (tok_.kind == Kind::Arrow) {
      advance();
      if (tok_.kind != Kind::Id) {
        error_ = "expected edge target";
        return false;
      }
      advance();
      ++edges_;
    }
    if (at_punct("[") && !attr_list()) return false;
    return true;
  }

  bool attr_list() {
    if (!expect_punct("[")) return false;
    while (!at_punct("]")) {
      if (tok_.kind != Kind::Id) {
        error_ = "expected attribute name";
        return false;
      }
      advance();
      if (!expect_punct("=")) return false;
      if (tok_.kind != Kind::Id) {
        error_ = "expected attribute value";
        return false;
      }
      advance();
      if (at_punct(",")) advance();
    }
    advance();  // ']'
    return true;
  }

  Lexer lexer_;
  Tok tok_{Kind::End, ""};
  std::string error_;
  int nodes_ = 0;
  int edges_ = 0;
  int clusters_ = 0;
};

}  // namespace

DotCheck check_dot(const std::string& text) { return Parser(text).run(); }

}  // namespace tml::test
