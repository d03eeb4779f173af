#include "copl/frontend/printer.hpp"

#include <charconv>
#include <sstream>

namespace copl::frontend {

namespace {

using namespace copl::ast;

// Binding strength, loosest first.
enum Prec { Assign = 1, Equality, Relational, Additive, Unary, Postfix, Primary };

int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AssignExpr>) return Assign;
            else if constexpr (std::is_same_v<T, BinaryExpr>) {
                switch (n.op) {
                case BinaryOp::Eq:
                case BinaryOp::Ne: return Equality;
                case BinaryOp::Lt:
                case BinaryOp::Gt: return Relational;
                default: return Additive;
                }
            } else if constexpr (std::is_same_v<T, NegateExpr>) return Unary;
            else if constexpr (std::is_same_v<T, IncDecExpr>) return n.prefix ? Unary : Postfix;
            else if constexpr (std::is_same_v<T, FieldExpr> || std::is_same_v<T, CallExpr>) return Postfix;
            else return Primary;
        },
        e.node);
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

std::string floatText(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, end);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string_view opText(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    }
    return "?";
}

class Printer {
public:
    std::string expr(const Expr& e, int minPrec = Assign) {
        std::string s = std::visit([this](const auto& n) { return render(n); }, e.node);
        return precedence(e) < minPrec ? "(" + s + ")" : s;
    }

    void program(const ProgramAst& p) {
        bool first = true;
        for (const auto& d : p.declarations) {
            if (!first) out_ << "\n";
            first = false;
            std::visit([this](const auto& x) { decl(x); }, d);
        }
    }

    std::string str() const { return out_.str(); }

private:
    std::string render(const IntLiteral& n) { return std::to_string(n.value); }
    std::string render(const FloatLiteral& n) { return floatText(n.value); }
    std::string render(const StringLiteral& n) { return quote(n.value); }
    std::string render(const NameExpr& n) { return n.name; }
    std::string render(const ContextExpr&) { return "context"; }
    std::string render(const FieldExpr& n) { return expr(*n.object, Postfix) + "." + n.field; }
    std::string render(const CallExpr& n) {
        std::string s = n.receiver ? expr(*n.receiver, Postfix) + "." : "";
        return s + n.method + args(n.args);
    }
    std::string render(const NewExpr& n) { return "new " + n.type.name + args(n.args); }
    std::string render(const RefExpr& n) { return n.type.name + "@" + args(n.args); }
    std::string render(const AssignExpr& n) {
        std::string_view op = n.op == AssignOp::Assign ? "=" : n.op == AssignOp::AddAssign ? "+=" : "-=";
        return expr(*n.target, Postfix) + " " + std::string(op) + " " + expr(*n.value, Assign);
    }
    std::string render(const IncDecExpr& n) {
        std::string op = n.increment ? "++" : "--";
        return n.prefix ? op + unaryOperand(*n.target) : expr(*n.target, Postfix) + op;
    }
    std::string render(const BinaryExpr& n) {
        int level = Additive;
        if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) level = Equality;
        else if (n.op == BinaryOp::Lt || n.op == BinaryOp::Gt) level = Relational;
        return expr(*n.lhs, level) + " " + std::string(opText(n.op)) + " " + expr(*n.rhs, level + 1);
    }
    std::string render(const NegateExpr& n) { return "-" + unaryOperand(*n.operand); }

    // `- -x` and `-(--x)` must not fuse into a decrement token.
    std::string unaryOperand(const Expr& e) {
        bool startsWithSign = e.as<NegateExpr>() || (e.as<IncDecExpr>() && e.as<IncDecExpr>()->prefix);
        return startsWithSign ? "(" + expr(e) + ")" : expr(e, Unary);
    }

    std::string args(const std::vector<ExprPtr>& a) {
        std::string s = "(";
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i) s += ", ";
            s += expr(*a[i]);
        }
        return s + ")";
    }

    void indent(int depth) {
        for (int i = 0; i < depth; ++i) out_ << "    ";
    }

    void stmt(const Stmt& s, int depth) {
        std::visit([&](const auto& n) { statement(n, depth); }, s.node);
    }

    void statement(const VarDeclStmt& n, int depth) {
        indent(depth);
        out_ << n.type.name << " " << n.name;
        if (n.init) out_ << " = " << expr(*n.init);
        out_ << ";\n";
    }
    void statement(const ExprStmt& n, int depth) {
        indent(depth);
        out_ << expr(*n.expr) << ";\n";
    }
    void statement(const IfStmt& n, int depth) {
        indent(depth);
        out_ << "if (" << expr(*n.cond) << ")";
        branch(*n.thenBranch, depth);
        if (n.elseBranch) {
            indent(depth);
            out_ << "else";
            branch(*n.elseBranch, depth);
        }
    }
    void statement(const ReturnStmt& n, int depth) {
        indent(depth);
        out_ << "return";
        if (n.value) out_ << " " << expr(*n.value);
        out_ << ";\n";
    }
    void statement(const BlockStmt& n, int depth) {
        indent(depth);
        out_ << "{\n";
        for (const auto& s : n.statements) stmt(*s, depth + 1);
        indent(depth);
        out_ << "}\n";
    }
    void statement(const EmptyStmt&, int depth) {
        indent(depth);
        out_ << ";\n";
    }

    void branch(const Stmt& s, int depth) {
        if (const auto* b = std::get_if<BlockStmt>(&s.node)) {
            out_ << " {\n";
            for (const auto& inner : b->statements) stmt(*inner, depth + 1);
            indent(depth);
            out_ << "}\n";
        } else {
            out_ << "\n";
            stmt(s, depth + 1);
        }
    }

    void body(const ClassBody& b, int depth) {
        for (const auto& f : b.fields) {
            indent(depth);
            if (f.isStatic) out_ << "static ";
            out_ << f.type.name << " " << f.name;
            if (f.initKind == FieldInitKind::Value) out_ << " = " << expr(*f.init);
            else if (f.initKind == FieldInitKind::Create) out_ << ".create()";
            out_ << ";\n";
        }
        for (const auto& m : b.methods) {
            indent(depth);
            out_ << m.returnType.name << " " << m.name << "(";
            for (std::size_t i = 0; i < m.params.size(); ++i) {
                if (i) out_ << ", ";
                out_ << m.params[i].type.name << " " << m.params[i].name;
            }
            out_ << ") {\n";
            for (const auto& s : m.body.statements) stmt(*s, depth + 1);
            indent(depth);
            out_ << "}\n";
        }
    }

    void header(std::string_view kw, const std::string& name, const std::optional<std::string>& parent) {
        out_ << kw << " " << name;
        if (parent) out_ << " in " << *parent;
    }

    void decl(const ConceptDecl& c) {
        header("concept", c.name, c.parent);
        out_ << "\n    class {\n";
        body(c.objectClass, 2);
        out_ << "    }\n    reference {\n";
        body(c.referenceClass, 2);
        out_ << "    }\n";
    }

    void decl(const ClassDecl& c) {
        header("class", c.name, c.parent);
        out_ << " {\n";
        body(c.body, 1);
        out_ << "}\n";
    }

    std::ostringstream out_;
};

} // namespace

std::string prettyPrint(const ast::ProgramAst& program) {
    Printer p;
    p.program(program);
    return p.str();
}

std::string prettyPrint(const ast::Expr& expr) { return Printer().expr(expr); }

} // namespace copl::frontend
