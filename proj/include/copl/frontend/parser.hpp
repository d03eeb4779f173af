#pragma once

#include <string_view>
#include <vector>

#include "copl/frontend/ast.hpp"
#include "copl/frontend/token.hpp"

namespace copl::frontend {

// Recursive-descent parser over a token list ending in EndOfInput. Stops at
// the first error and throws CompileError carrying its location.
ast::ProgramAst parse(const std::vector<Token>& tokens);

// tokenize + parse.
ast::ProgramAst parseSource(std::string_view source);

} // namespace copl::frontend
