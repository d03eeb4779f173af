#pragma once

#include <string_view>
#include <vector>

#include "copl/frontend/token.hpp"

namespace copl::frontend {

// Splits source text into tokens. `//` comments and whitespace are skipped
// and the result always ends with an EndOfInput token. Throws CompileError
// on an unterminated string, an unknown escape or an illegal character.
std::vector<Token> tokenize(std::string_view source);

} // namespace copl::frontend
