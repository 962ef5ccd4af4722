#pragma once

#include <string_view>

#include "tml/ast.hpp"

namespace tml {

// Parses a model file. Never throws: lexical and syntax errors are collected
// in the returned Ast's diagnostics and the parser resynchronizes at the next
// top-level declaration keyword, so every well-formed declaration in a partly
// broken file still shows up in the AST.
Ast parse(std::string_view source);

}  // namespace tml
