#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tml {

// Source range. Lines and columns are 1-based; columns count bytes. The end
// position is exclusive. A default-constructed span (line 0) means "no
// location" and sorts before everything else.
struct Span {
  uint32_t line = 0;
  uint32_t col = 0;
  uint32_t end_line = 0;
  uint32_t end_col = 0;

  bool valid() const { return line > 0; }

  static Span at(uint32_t line, uint32_t col, uint32_t len = 1) {
    return Span{line, col, line, col + len};
  }

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning };

struct RelatedNote {
  std::string message;
  Span span;
};

// One reported problem. `code` is the short rule identifier that appears in
// rendered output (L* lexical, P* parse, N* name resolution, R* validation,
// B* chronology, S* simulation).
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  Span span;
  std::vector<RelatedNote> related;
};

// Ordering used for all user-facing diagnostic lists: file position first,
// then rule code, so output is stable run to run.
bool diagnostic_before(const Diagnostic& a, const Diagnostic& b);
void sort_diagnostics(std::vector<Diagnostic>& diags);

bool has_errors(const std::vector<Diagnostic>& diags);
std::size_t count_errors(const std::vector<Diagnostic>& diags);
std::size_t count_warnings(const std::vector<Diagnostic>& diags);

// Renders "FILE:LINE:COL: severity[CODE]: message". Related notes are
// rendered by the caller (one per line, "note:" severity).
std::string render_diagnostic(std::string_view file, const Diagnostic& d,
                              bool color = false);

}  // namespace tml
