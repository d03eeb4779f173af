#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "copl/diagnostics.hpp"

namespace copl::frontend {

enum class TokenKind {
    Keyword,
    Identifier,
    IntegerLiteral,
    FloatingLiteral,
    StringLiteral,
    Punctuation,
    EndOfInput,
};

std::string toString(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    // Decoded text; for string literals the escapes are already resolved.
    std::string lexeme;
    int line = 1;
    int column = 1;
    // Byte span of the raw token in the source.
    std::size_t offset = 0;
    std::size_t length = 0;

    SourceLoc loc() const { return {line, column}; }
    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    bool isKeyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
    bool isPunct(std::string_view text) const { return is(TokenKind::Punctuation, text); }
};

bool isKeyword(std::string_view word);

} // namespace copl::frontend
