#include "copl/frontend/ast.hpp"

#include <cstring>

namespace copl::ast {

const FieldDecl* ClassBody::findField(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f;
    return nullptr;
}

const MethodDecl* ClassBody::findMethod(const std::string& name) const {
    for (const auto& m : methods)
        if (m.name == name) return &m;
    return nullptr;
}

const std::string& declName(const Declaration& d) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, d);
}

const std::optional<std::string>& declParent(const Declaration& d) {
    return std::visit([](const auto& x) -> const std::optional<std::string>& { return x.parent; }, d);
}

SourceLoc declLoc(const Declaration& d) {
    return std::visit([](const auto& x) { return x.loc; }, d);
}

const ClassBody& objectClassOf(const Declaration& d) {
    if (const auto* c = std::get_if<ConceptDecl>(&d)) return c->objectClass;
    return std::get<ClassDecl>(d).body;
}

const ClassBody* referenceClassOf(const Declaration& d) {
    if (const auto* c = std::get_if<ConceptDecl>(&d)) return &c->referenceClass;
    return nullptr;
}

namespace {

bool eq(const Expr* a, const Expr* b);
bool eq(const Stmt* a, const Stmt* b);

bool eq(const TypeName& a, const TypeName& b) { return a.name == b.name; }

bool eqList(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i].get(), b[i].get())) return false;
    return true;
}

bool eqList(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i].get(), b[i].get())) return false;
    return true;
}

struct ExprEq {
    const Expr& other;

    bool operator()(const IntLiteral& x) const { return std::get<IntLiteral>(other.node).value == x.value; }
    bool operator()(const FloatLiteral& x) const {
        double y = std::get<FloatLiteral>(other.node).value;
        return std::memcmp(&x.value, &y, sizeof y) == 0;
    }
    bool operator()(const StringLiteral& x) const { return std::get<StringLiteral>(other.node).value == x.value; }
    bool operator()(const NameExpr& x) const { return std::get<NameExpr>(other.node).name == x.name; }
    bool operator()(const ContextExpr&) const { return true; }
    bool operator()(const FieldExpr& x) const {
        const auto& y = std::get<FieldExpr>(other.node);
        return x.field == y.field && eq(x.object.get(), y.object.get());
    }
    bool operator()(const CallExpr& x) const {
        const auto& y = std::get<CallExpr>(other.node);
        return x.method == y.method && eq(x.receiver.get(), y.receiver.get()) && eqList(x.args, y.args);
    }
    bool operator()(const NewExpr& x) const {
        const auto& y = std::get<NewExpr>(other.node);
        return eq(x.type, y.type) && eqList(x.args, y.args);
    }
    bool operator()(const RefExpr& x) const {
        const auto& y = std::get<RefExpr>(other.node);
        return eq(x.type, y.type) && eqList(x.args, y.args);
    }
    bool operator()(const AssignExpr& x) const {
        const auto& y = std::get<AssignExpr>(other.node);
        return x.op == y.op && eq(x.target.get(), y.target.get()) && eq(x.value.get(), y.value.get());
    }
    bool operator()(const IncDecExpr& x) const {
        const auto& y = std::get<IncDecExpr>(other.node);
        return x.increment == y.increment && x.prefix == y.prefix && eq(x.target.get(), y.target.get());
    }
    bool operator()(const BinaryExpr& x) const {
        const auto& y = std::get<BinaryExpr>(other.node);
        return x.op == y.op && eq(x.lhs.get(), y.lhs.get()) && eq(x.rhs.get(), y.rhs.get());
    }
    bool operator()(const NegateExpr& x) const {
        return eq(x.operand.get(), std::get<NegateExpr>(other.node).operand.get());
    }
};

bool eq(const Expr* a, const Expr* b) {
    if (!a || !b) return a == b;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(ExprEq{*b}, a->node);
}

struct StmtEq {
    const Stmt& other;

    bool operator()(const VarDeclStmt& x) const {
        const auto& y = std::get<VarDeclStmt>(other.node);
        return eq(x.type, y.type) && x.name == y.name && eq(x.init.get(), y.init.get());
    }
    bool operator()(const ExprStmt& x) const { return eq(x.expr.get(), std::get<ExprStmt>(other.node).expr.get()); }
    bool operator()(const IfStmt& x) const {
        const auto& y = std::get<IfStmt>(other.node);
        return eq(x.cond.get(), y.cond.get()) && eq(x.thenBranch.get(), y.thenBranch.get()) &&
               eq(x.elseBranch.get(), y.elseBranch.get());
    }
    bool operator()(const ReturnStmt& x) const {
        return eq(x.value.get(), std::get<ReturnStmt>(other.node).value.get());
    }
    bool operator()(const BlockStmt& x) const {
        return eqList(x.statements, std::get<BlockStmt>(other.node).statements);
    }
    bool operator()(const EmptyStmt&) const { return true; }
};

bool eq(const Stmt* a, const Stmt* b) {
    if (!a || !b) return a == b;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(StmtEq{*b}, a->node);
}

bool eq(const ClassBody& a, const ClassBody& b) {
    if (a.fields.size() != b.fields.size() || a.methods.size() != b.methods.size()) return false;
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        const auto& x = a.fields[i];
        const auto& y = b.fields[i];
        if (x.isStatic != y.isStatic || !eq(x.type, y.type) || x.name != y.name || x.initKind != y.initKind ||
            !eq(x.init.get(), y.init.get()))
            return false;
    }
    for (std::size_t i = 0; i < a.methods.size(); ++i) {
        const auto& x = a.methods[i];
        const auto& y = b.methods[i];
        if (!eq(x.returnType, y.returnType) || x.name != y.name || x.params.size() != y.params.size() ||
            !eqList(x.body.statements, y.body.statements))
            return false;
        for (std::size_t p = 0; p < x.params.size(); ++p)
            if (!eq(x.params[p].type, y.params[p].type) || x.params[p].name != y.params[p].name) return false;
    }
    return true;
}

} // namespace

bool structurallyEqual(const ProgramAst& a, const ProgramAst& b) {
    if (a.declarations.size() != b.declarations.size()) return false;
    for (std::size_t i = 0; i < a.declarations.size(); ++i) {
        const auto& x = a.declarations[i];
        const auto& y = b.declarations[i];
        if (x.index() != y.index() || declName(x) != declName(y) || declParent(x) != declParent(y)) return false;
        if (!eq(objectClassOf(x), objectClassOf(y))) return false;
        const auto* rx = referenceClassOf(x);
        const auto* ry = referenceClassOf(y);
        if (rx && !eq(*rx, *ry)) return false;
    }
    return true;
}

} // namespace copl::ast
