#pragma once

#include <string>

#include "copl/frontend/ast.hpp"

namespace copl::frontend {

// Canonical source rendering. Re-parsing the output yields a structurally
// identical tree; parentheses are emitted only where precedence needs them.
std::string prettyPrint(const ast::ProgramAst& program);
std::string prettyPrint(const ast::Expr& expr);

} // namespace copl::frontend
