#pragma once

#include <optional>
#include <string>

#include "tml/ast.hpp"

namespace tml {

// Canonical text for an AST: one declaration per line, two-space indents,
// normalized string quoting, LF endings. Returns nullopt if the AST carries
// error diagnostics (formatting a broken parse would lose content).
// Formatting is deterministic, and formatting already-canonical text is a
// byte-for-byte fixed point.
std::optional<std::string> format(const Ast& ast);

// Quotes and escapes a string literal body for output.
std::string quote_string(std::string_view text);

}  // namespace tml
