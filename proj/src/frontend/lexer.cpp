#include "copl/frontend/lexer.hpp"

#include <array>
#include <cctype>

namespace copl::frontend {

namespace {

constexpr std::array kKeywords = {
    std::string_view{"concept"}, std::string_view{"class"},  std::string_view{"reference"},
    std::string_view{"in"},      std::string_view{"static"}, std::string_view{"if"},
    std::string_view{"else"},    std::string_view{"return"}, std::string_view{"new"},
    std::string_view{"context"},
};

// Longest match first.
constexpr std::array kPunctuation = {
    std::string_view{"++"}, std::string_view{"--"}, std::string_view{"+="}, std::string_view{"-="},
    std::string_view{"=="}, std::string_view{"!="}, std::string_view{"{"},  std::string_view{"}"},
    std::string_view{"("},  std::string_view{")"},  std::string_view{";"},  std::string_view{","},
    std::string_view{"."},  std::string_view{"@"},  std::string_view{"="},  std::string_view{"+"},
    std::string_view{"-"},  std::string_view{"<"},  std::string_view{">"},
};

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipTrivia();
            if (pos_ >= src_.size()) {
                out.push_back(Token{TokenKind::EndOfInput, "", line_, column_, pos_, 0});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            // UTF-8 continuation bytes do not start a new column.
            ++column_;
        }
        ++pos_;
    }

    void skipTrivia() {
        while (pos_ < src_.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else {
                return;
            }
        }
    }

    Token next() {
        Token tok;
        tok.line = line_;
        tok.column = column_;
        tok.offset = pos_;
        char c = peek();

        if (isIdentStart(c)) {
            while (pos_ < src_.size() && isIdentChar(peek())) advance();
            tok.lexeme = std::string(src_.substr(tok.offset, pos_ - tok.offset));
            tok.kind = isKeyword(tok.lexeme) ? TokenKind::Keyword : TokenKind::Identifier;
        } else if (isDigit(c)) {
            lexNumber(tok);
        } else if (c == '"') {
            lexString(tok);
        } else {
            bool matched = false;
            for (auto p : kPunctuation) {
                if (src_.substr(pos_, p.size()) == p) {
                    for (std::size_t i = 0; i < p.size(); ++i) advance();
                    tok.kind = TokenKind::Punctuation;
                    tok.lexeme = std::string(p);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                std::string shown = std::isprint(static_cast<unsigned char>(c))
                                        ? std::string(1, c)
                                        : "\\x" + hexByte(static_cast<unsigned char>(c));
                throw CompileError(tok.loc(), "illegal character '" + shown + "'");
            }
        }
        tok.length = pos_ - tok.offset;
        return tok;
    }

    void lexNumber(Token& tok) {
        while (isDigit(peek())) advance();
        tok.kind = TokenKind::IntegerLiteral;
        if (peek() == '.' && isDigit(peek(1))) {
            advance();
            while (isDigit(peek())) advance();
            tok.kind = TokenKind::FloatingLiteral;
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (isDigit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && isDigit(peek(2))))) {
            advance();
            if (peek() == '+' || peek() == '-') advance();
            while (isDigit(peek())) advance();
            tok.kind = TokenKind::FloatingLiteral;
        }
        tok.lexeme = std::string(src_.substr(tok.offset, pos_ - tok.offset));
    }

    void lexString(Token& tok) {
        tok.kind = TokenKind::StringLiteral;
        advance(); // opening quote
        std::string text;
        for (;;) {
            if (pos_ >= src_.size() || peek() == '\n')
                throw CompileError(tok.loc(), "unterminated string literal");
            char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                SourceLoc escLoc{line_, column_};
                advance();
                if (pos_ >= src_.size()) throw CompileError(tok.loc(), "unterminated string literal");
                char e = peek();
                switch (e) {
                case 'n': text += '\n'; break;
                case 't': text += '\t'; break;
                case '"': text += '"'; break;
                case '\\': text += '\\'; break;
                default:
                    throw CompileError(escLoc, std::string("unknown escape sequence '\\") + e + "'");
                }
                advance();
                continue;
            }
            text += c;
            advance();
        }
        tok.lexeme = std::move(text);
    }

    static std::string hexByte(unsigned char b) {
        constexpr char digits[] = "0123456789abcdef";
        return {digits[b >> 4], digits[b & 0xF]};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

} // namespace

std::string toString(TokenKind kind) {
    switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::IntegerLiteral: return "integer-literal";
    case TokenKind::FloatingLiteral: return "floating-literal";
    case TokenKind::StringLiteral: return "string-literal";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::EndOfInput: return "end-of-input";
    }
    return "?";
}

bool isKeyword(std::string_view word) {
    for (auto k : kKeywords)
        if (k == word) return true;
    return false;
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

} // namespace copl::frontend
