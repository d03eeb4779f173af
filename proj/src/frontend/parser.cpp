#include "copl/frontend/parser.hpp"

#include <charconv>
#include <limits>
#include <set>

#include "copl/frontend/lexer.hpp"

namespace copl::frontend {

namespace {

using namespace copl::ast;

std::string describe(const Token& t) {
    switch (t.kind) {
    case TokenKind::EndOfInput: return "end of input";
    case TokenKind::StringLiteral: return "string literal";
    case TokenKind::IntegerLiteral:
    case TokenKind::FloatingLiteral: return "number '" + t.lexeme + "'";
    default: return "'" + t.lexeme + "'";
    }
}

ExprPtr makeExpr(SourceLoc loc, auto node) {
    auto e = std::make_unique<Expr>();
    e->loc = loc;
    e->node = std::move(node);
    return e;
}

StmtPtr makeStmt(SourceLoc loc, auto node) {
    auto s = std::make_unique<Stmt>();
    s->loc = loc;
    s->node = std::move(node);
    return s;
}

bool isAssignable(const Expr& e) { return e.as<NameExpr>() || e.as<FieldExpr>(); }

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {
        if (toks_.empty() || toks_.back().kind != TokenKind::EndOfInput)
            throw CompileError(SourceLoc{}, "token stream does not end with end-of-input");
    }

    ProgramAst program() {
        ProgramAst prog;
        while (!atEnd()) prog.declarations.push_back(declaration());
        return prog;
    }

private:
    // ---- token helpers ----

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool atEnd() const { return peek().kind == TokenKind::EndOfInput; }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (!atEnd()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string msg = "expected " + expected;
        if (pos_ > 0) msg += " after '" + toks_[pos_ - 1].lexeme + "'";
        msg += ", found " + describe(peek());
        throw CompileError(peek().loc(), msg);
    }

    bool acceptPunct(std::string_view p) {
        if (!peek().isPunct(p)) return false;
        advance();
        return true;
    }
    bool acceptKeyword(std::string_view k) {
        if (!peek().isKeyword(k)) return false;
        advance();
        return true;
    }
    const Token& expectPunct(std::string_view p) {
        if (!peek().isPunct(p)) fail("'" + std::string(p) + "'");
        return advance();
    }
    const Token& expectIdent() {
        if (peek().kind != TokenKind::Identifier) fail("identifier");
        return advance();
    }

    // ---- declarations ----

    Declaration declaration() {
        const Token& start = peek();
        if (acceptKeyword("concept")) {
            ConceptDecl c;
            c.loc = start.loc();
            c.name = expectIdent().lexeme;
            parentClause(c.parent, c.parentLoc);
            c.objectClass.loc = c.loc;
            c.referenceClass.loc = c.loc;
            bool sawClass = false;
            bool sawRef = false;
            for (;;) {
                if (peek().isKeyword("class") && peek(1).isPunct("{")) {
                    if (sawClass) throw CompileError(peek().loc(), "duplicate class section in concept '" + c.name + "'");
                    sawClass = true;
                    c.objectClass = sectionBody();
                } else if (peek().isKeyword("reference")) {
                    if (sawRef)
                        throw CompileError(peek().loc(), "duplicate reference section in concept '" + c.name + "'");
                    sawRef = true;
                    c.referenceClass = sectionBody();
                } else {
                    break;
                }
            }
            return c;
        }
        if (acceptKeyword("class")) {
            ClassDecl c;
            c.loc = start.loc();
            c.name = expectIdent().lexeme;
            parentClause(c.parent, c.parentLoc);
            c.body = classBody();
            return c;
        }
        fail("'concept' or 'class'");
    }

    void parentClause(std::optional<std::string>& parent, SourceLoc& loc) {
        if (!acceptKeyword("in")) return;
        loc = peek().loc();
        parent = expectIdent().lexeme;
    }

    // `class { ... }` or `reference { ... }` inside a concept.
    ClassBody sectionBody() {
        advance(); // 'class' or 'reference'
        return classBody();
    }

    ClassBody classBody() {
        ClassBody body;
        body.loc = expectPunct("{").loc();
        std::set<std::string> names;
        while (!peek().isPunct("}")) {
            if (atEnd()) fail("member declaration or '}'");
            member(body, names);
        }
        advance();
        return body;
    }

    void member(ClassBody& body, std::set<std::string>& names) {
        SourceLoc loc = peek().loc();
        bool isStatic = acceptKeyword("static");
        if (peek().kind != TokenKind::Identifier) fail("member type");
        const Token& typeTok = advance();
        TypeName type{typeTok.lexeme, typeTok.loc()};
        const Token& nameTok = expectIdent();
        if (!names.insert(nameTok.lexeme).second)
            throw CompileError(nameTok.loc(), "duplicate member '" + nameTok.lexeme + "'");

        if (peek().isPunct("(")) {
            if (isStatic) throw CompileError(loc, "method '" + nameTok.lexeme + "' cannot be static");
            MethodDecl m;
            m.loc = loc;
            m.returnType = std::move(type);
            m.name = nameTok.lexeme;
            m.params = params();
            if (!peek().isPunct("{")) fail("'{'");
            m.body = std::move(std::get<BlockStmt>(block()->node));
            if (m.name == "continue") {
                if (!m.params.empty())
                    throw CompileError(m.loc, "method 'continue' must not take parameters");
                if (m.returnType.name != "void")
                    throw CompileError(m.returnType.loc, "method 'continue' must return void");
            }
            body.methods.push_back(std::move(m));
            return;
        }

        FieldDecl f;
        f.loc = loc;
        f.isStatic = isStatic;
        f.type = std::move(type);
        f.name = nameTok.lexeme;
        if (acceptPunct("=")) {
            f.initKind = FieldInitKind::Value;
            f.init = expression();
        } else if (peek().isPunct(".")) {
            advance();
            const Token& c = peek();
            if (!c.is(TokenKind::Identifier, "create")) fail("'create'");
            advance();
            expectPunct("(");
            expectPunct(")");
            f.initKind = FieldInitKind::Create;
        }
        expectPunct(";");
        body.fields.push_back(std::move(f));
    }

    std::vector<Param> params() {
        std::vector<Param> out;
        expectPunct("(");
        if (acceptPunct(")")) return out;
        for (;;) {
            Param p;
            p.loc = peek().loc();
            if (peek().kind != TokenKind::Identifier) fail("parameter type");
            p.type = TypeName{advance().lexeme, p.loc};
            p.name = expectIdent().lexeme;
            for (const auto& q : out)
                if (q.name == p.name) throw CompileError(p.loc, "duplicate parameter '" + p.name + "'");
            out.push_back(std::move(p));
            if (acceptPunct(")")) return out;
            if (!peek().isPunct(",")) fail("',' or ')'");
            advance();
        }
    }

    // ---- statements ----

    StmtPtr block() {
        SourceLoc loc = expectPunct("{").loc();
        BlockStmt b;
        while (!peek().isPunct("}")) {
            if (atEnd()) fail("statement or '}'");
            b.statements.push_back(statement());
        }
        advance();
        return makeStmt(loc, std::move(b));
    }

    StmtPtr statement() {
        const Token& t = peek();
        SourceLoc loc = t.loc();
        if (t.isPunct("{")) return block();
        if (t.isPunct(";")) {
            advance();
            return makeStmt(loc, EmptyStmt{});
        }
        if (acceptKeyword("if")) {
            IfStmt s;
            expectPunct("(");
            s.cond = expression();
            expectPunct(")");
            s.thenBranch = statement();
            if (acceptKeyword("else")) s.elseBranch = statement();
            return makeStmt(loc, std::move(s));
        }
        if (acceptKeyword("return")) {
            ReturnStmt s;
            if (!peek().isPunct(";")) s.value = expression();
            expectPunct(";");
            return makeStmt(loc, std::move(s));
        }
        if (t.kind == TokenKind::Identifier && peek(1).kind == TokenKind::Identifier) {
            VarDeclStmt s;
            s.type = TypeName{advance().lexeme, loc};
            s.name = advance().lexeme;
            if (acceptPunct("=")) s.init = expression();
            expectPunct(";");
            return makeStmt(loc, std::move(s));
        }
        ExprStmt s{expression()};
        expectPunct(";");
        return makeStmt(loc, std::move(s));
    }

    // ---- expressions ----

    ExprPtr expression() { return assignment(); }

    ExprPtr assignment() {
        ExprPtr lhs = equality();
        const Token& t = peek();
        std::optional<AssignOp> op;
        if (t.isPunct("=")) op = AssignOp::Assign;
        else if (t.isPunct("+=")) op = AssignOp::AddAssign;
        else if (t.isPunct("-=")) op = AssignOp::SubAssign;
        if (!op) return lhs;
        if (!isAssignable(*lhs)) throw CompileError(t.loc(), "invalid assignment target");
        advance();
        SourceLoc loc = lhs->loc;
        return makeExpr(loc, AssignExpr{*op, std::move(lhs), assignment()});
    }

    ExprPtr equality() {
        ExprPtr e = relational();
        for (;;) {
            std::optional<BinaryOp> op;
            if (peek().isPunct("==")) op = BinaryOp::Eq;
            else if (peek().isPunct("!=")) op = BinaryOp::Ne;
            if (!op) return e;
            advance();
            SourceLoc loc = e->loc;
            e = makeExpr(loc, BinaryExpr{*op, std::move(e), relational()});
        }
    }

    ExprPtr relational() {
        ExprPtr e = additive();
        for (;;) {
            std::optional<BinaryOp> op;
            if (peek().isPunct("<")) op = BinaryOp::Lt;
            else if (peek().isPunct(">")) op = BinaryOp::Gt;
            if (!op) return e;
            advance();
            SourceLoc loc = e->loc;
            e = makeExpr(loc, BinaryExpr{*op, std::move(e), additive()});
        }
    }

    ExprPtr additive() {
        ExprPtr e = unary();
        for (;;) {
            std::optional<BinaryOp> op;
            if (peek().isPunct("+")) op = BinaryOp::Add;
            else if (peek().isPunct("-")) op = BinaryOp::Sub;
            if (!op) return e;
            advance();
            SourceLoc loc = e->loc;
            e = makeExpr(loc, BinaryExpr{*op, std::move(e), unary()});
        }
    }

    ExprPtr unary() {
        const Token& t = peek();
        SourceLoc loc = t.loc();
        if (t.isPunct("-")) {
            advance();
            return makeExpr(loc, NegateExpr{unary()});
        }
        if (t.isPunct("++") || t.isPunct("--")) {
            bool inc = t.lexeme == "++";
            advance();
            ExprPtr target = unary();
            if (!isAssignable(*target)) throw CompileError(target->loc, "invalid increment/decrement target");
            return makeExpr(loc, IncDecExpr{inc, true, std::move(target)});
        }
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr e = primary();
        for (;;) {
            const Token& t = peek();
            if (t.isPunct(".")) {
                advance();
                const Token& name = expectIdent();
                SourceLoc loc = e->loc;
                if (peek().isPunct("(")) {
                    e = makeExpr(loc, CallExpr{std::move(e), name.lexeme, arguments()});
                } else {
                    e = makeExpr(loc, FieldExpr{std::move(e), name.lexeme});
                }
            } else if (t.isPunct("++") || t.isPunct("--")) {
                if (!isAssignable(*e)) throw CompileError(t.loc(), "invalid increment/decrement target");
                bool inc = t.lexeme == "++";
                advance();
                SourceLoc loc = e->loc;
                e = makeExpr(loc, IncDecExpr{inc, false, std::move(e)});
            } else {
                return e;
            }
        }
    }

    std::vector<ExprPtr> arguments() {
        std::vector<ExprPtr> args;
        expectPunct("(");
        if (acceptPunct(")")) return args;
        for (;;) {
            args.push_back(expression());
            if (acceptPunct(")")) return args;
            if (!peek().isPunct(",")) fail("',' or ')'");
            advance();
        }
    }

    ExprPtr primary() {
        const Token& t = peek();
        SourceLoc loc = t.loc();
        switch (t.kind) {
        case TokenKind::IntegerLiteral: {
            advance();
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
            if (ec != std::errc{} || v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                throw CompileError(loc, "integer literal '" + t.lexeme + "' out of range");
            return makeExpr(loc, IntLiteral{static_cast<std::int64_t>(v)});
        }
        case TokenKind::FloatingLiteral: {
            advance();
            double v = 0;
            auto [p, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
            if (ec != std::errc{}) throw CompileError(loc, "floating literal '" + t.lexeme + "' out of range");
            return makeExpr(loc, FloatLiteral{v});
        }
        case TokenKind::StringLiteral:
            advance();
            return makeExpr(loc, StringLiteral{t.lexeme});
        case TokenKind::Keyword:
            if (acceptKeyword("context")) return makeExpr(loc, ContextExpr{});
            if (acceptKeyword("new")) {
                const Token& type = expectIdent();
                NewExpr n{TypeName{type.lexeme, type.loc()}, {}};
                if (!peek().isPunct("(")) fail("'('");
                n.args = arguments();
                return makeExpr(loc, std::move(n));
            }
            break;
        case TokenKind::Identifier: {
            advance();
            if (peek().isPunct("@")) {
                advance();
                RefExpr r{TypeName{t.lexeme, loc}, {}};
                if (!peek().isPunct("(")) fail("'('");
                r.args = arguments();
                return makeExpr(loc, std::move(r));
            }
            if (peek().isPunct("(")) return makeExpr(loc, CallExpr{nullptr, t.lexeme, arguments()});
            return makeExpr(loc, NameExpr{t.lexeme});
        }
        case TokenKind::Punctuation:
            if (acceptPunct("(")) {
                ExprPtr inner = expression();
                expectPunct(")");
                return inner;
            }
            break;
        default: break;
        }
        fail("expression");
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

} // namespace

ast::ProgramAst parse(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

ast::ProgramAst parseSource(std::string_view source) { return parse(tokenize(source)); }

} // namespace copl::frontend
