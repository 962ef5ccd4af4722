#include "tml/diagnostics.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace tml {

bool diagnostic_before(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.span.line, a.span.col, a.code, a.message) <
         std::tie(b.span.line, b.span.col, b.code, b.message);
}

void sort_diagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), diagnostic_before);
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return count_errors(diags) > 0;
}

std::size_t count_errors(const std::vector<Diagnostic>& diags) {
  std::size_t n = 0;
  for (const auto& d : diags)
    if (d.severity == Severity::Error) ++n;
  return n;
}

std::size_t count_warnings(const std::vector<Diagnostic>& diags) {
  std::size_t n = 0;
  for (const auto& d : diags)
    if (d.severity == Severity::Warning) ++n;
  return n;
}

std::string render_diagnostic(std::string_view file, const Diagnostic& d,
                              bool color) {
  std::ostringstream out;
  out << file << ':' << d.span.line << ':' << d.span.col << ": ";
  const char* name = d.severity == Severity::Error ? "error" : "warning";
  if (color) {
    const char* tint = d.severity == Severity::Error ? "\x1b[31;1m" : "\x1b[33;1m";
    out << tint << name << '[' << d.code << ']' << "\x1b[0m";
  } else {
    out << name << '[' << d.code << ']';
  }
  out << ": " << d.message;
  return out.str();
}

}  // namespace tml
