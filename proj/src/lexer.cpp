#include "tml/token.hpp"

#include <array>
#include <cctype>

namespace tml {

namespace {

constexpr std::array<std::string_view, 14> kKeywords = {
    "machine", "store",   "flow",     "trigger",  "event",   "behavior", "as",
    "region",  "time",    "create",   "process",  "release", "transfer",
    "receive",
};

bool ident_start(char c) {
  return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool ident_char(char c) {
  return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

// Byte length of the UTF-8 sequence starting at `c`, so a stray multi-byte
// character produces one diagnostic, not one per byte.
std::size_t utf8_len(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n' || c == '\r') {
        newline();
      } else if (c == ' ' || c == '\t') {
        advance(1);
      } else if (c == '/' && peek(1) == '/') {
        comment();
      } else if (c == '"') {
        string_literal();
      } else if (ident_start(c)) {
        word();
      } else if (c == '-' && peek(1) == '>') {
        push(TokenKind::Arrow, 2);
      } else if (c == '=' && peek(1) == '>') {
        push(TokenKind::TriggerArrow, 2);
      } else if (c == '{' || c == '}' || c == '[' || c == ']' || c == ',' ||
                 c == ':' || c == '.') {
        push(TokenKind::Punct, 1);
      } else {
        illegal_char();
      }
    }
    return LexResult{std::move(tokens_), std::move(diags_)};
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n) {
    pos_ += n;
    col_ += static_cast<uint32_t>(n);
  }

  void newline() {
    if (src_[pos_] == '\r' && peek(1) == '\n') ++pos_;
    ++pos_;
    ++line_;
    col_ = 1;
  }

  void push(TokenKind kind, std::size_t len) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(pos_, len));
    t.value = t.text;
    t.span = Span::at(line_, col_, static_cast<uint32_t>(len));
    t.offset = pos_;
    tokens_.push_back(std::move(t));
    advance(len);
  }

  void comment() {
    std::size_t start = pos_;
    uint32_t start_col = col_;
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r')
      advance(1);
    Token t;
    t.kind = TokenKind::Comment;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.value = t.text;
    t.span = Span{line_, start_col, line_, col_};
    t.offset = start;
    tokens_.push_back(std::move(t));
  }

  void word() {
    std::size_t start = pos_;
    uint32_t start_col = col_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance(1);
    Token t;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.value = t.text;
    t.kind = is_keyword_text(t.text) ? TokenKind::Keyword : TokenKind::Ident;
    t.span = Span{line_, start_col, line_, col_};
    t.offset = start;
    tokens_.push_back(std::move(t));
  }

  void string_literal() {
    std::size_t start = pos_;
    uint32_t start_line = line_;
    uint32_t start_col = col_;
    advance(1);  // opening quote
    std::string value;
    bool terminated = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '"') {
        advance(1);
        terminated = true;
        break;
      }
      if (c == '\n' || c == '\r') break;  // strings do not span lines
      if (c == '\\') {
        char esc = peek(1);
        switch (esc) {
          case '\\': value += '\\'; break;
          case '"': value += '"'; break;
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '\0':
            break;  // backslash at end of input; unterminated error below
          default:
            error("L3", std::string("unknown escape sequence '\\") + esc +
                            "' in string literal",
                  Span::at(line_, col_, 2));
            value += esc;
            break;
        }
        advance(esc == '\0' ? 1 : 2);
      } else {
        value += c;
        advance(1);
      }
    }
    if (!terminated) {
      error("L2", "unterminated string literal",
            Span{start_line, start_col, line_, col_});
    }
    Token t;
    t.kind = TokenKind::Str;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.value = std::move(value);
    t.span = Span{start_line, start_col, line_, col_};
    t.offset = start;
    tokens_.push_back(std::move(t));
  }

  void illegal_char() {
    std::size_t len = utf8_len(static_cast<unsigned char>(src_[pos_]));
    if (pos_ + len > src_.size()) len = src_.size() - pos_;
    error("L1",
          "illegal character '" + std::string(src_.substr(pos_, len)) + "'",
          Span::at(line_, col_, static_cast<uint32_t>(len)));
    advance(len);
  }

  void error(const char* code, std::string message, Span span) {
    diags_.push_back(Diagnostic{Severity::Error, code, std::move(message),
                                span, {}});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
  std::vector<Token> tokens_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

bool is_keyword_text(std::string_view text) {
  for (auto kw : kKeywords)
    if (kw == text) return true;
  return false;
}

bool is_stage_keyword(std::string_view text) {
  return text == "create" || text == "process" || text == "release" ||
         text == "transfer" || text == "receive";
}

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace tml
