#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tml/diagnostics.hpp"

namespace tml {

enum class TokenKind {
  Keyword,       // machine store flow trigger event behavior as region time
                 // create process release transfer receive
  Ident,
  Str,           // double-quoted literal; `value` holds the unescaped text
  Punct,         // one of { } [ ] , : .
  Arrow,         // ->
  TriggerArrow,  // =>
  Comment,       // // to end of line
};

struct Token {
  TokenKind kind;
  std::string text;   // exact source slice, including quotes for strings
  std::string value;  // unescaped payload for Str; == text otherwise
  Span span;
  std::size_t offset = 0;  // byte offset of `text` in the source

  bool is_punct(char c) const {
    return kind == TokenKind::Punct && text.size() == 1 && text[0] == c;
  }
  bool is_keyword(std::string_view kw) const {
    return kind == TokenKind::Keyword && text == kw;
  }
};

bool is_keyword_text(std::string_view text);
bool is_stage_keyword(std::string_view text);

struct LexResult {
  std::vector<Token> tokens;  // includes Comment tokens; whitespace is dropped
  std::vector<Diagnostic> diagnostics;
};

// Splits source text into tokens. CR/LF and LF line endings are both
// accepted. Lexical errors (illegal characters, unterminated strings, bad
// escapes) are reported and skipped so tokenization always completes.
LexResult tokenize(std::string_view source);

}  // namespace tml
