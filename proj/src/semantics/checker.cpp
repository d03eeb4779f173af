#include "copl/semantics/checker.hpp"

#include <limits>
#include <stdexcept>

namespace copl::semantics {

using namespace copl::ast;
using K = Type::Kind;

std::vector<const FieldDecl*> DeclInfo::instanceFields() const {
    std::vector<const FieldDecl*> out;
    for (const auto& f : objectClass->fields)
        if (!f.isStatic) out.push_back(&f);
    return out;
}

const DeclInfo* CheckedProgram::findDecl(std::string_view name) const {
    auto it = declIndex_.find(std::string(name));
    return it == declIndex_.end() ? nullptr : &decls_[it->second];
}

const DeclInfo& CheckedProgram::decl(std::string_view name) const {
    if (const auto* d = findDecl(name)) return *d;
    throw std::out_of_range("unknown declaration '" + std::string(name) + "'");
}

const ExprInfo& CheckedProgram::info(const Expr& e) const {
    auto it = exprInfo_.find(&e);
    if (it == exprInfo_.end()) throw std::out_of_range("expression was not checked");
    return it->second;
}

class Checker {
public:
    Checker(std::shared_ptr<const ProgramAst> program, ConceptHierarchy h) {
        prog_.ast_ = std::move(program);
        prog_.hierarchy_ = std::move(h);
    }

    CheckedProgram run() {
        for (const auto& node : prog_.hierarchy_.nodes()) {
            DeclInfo d;
            d.name = node.name;
            d.decl = node.decl;
            d.isConcept = node.isConcept;
            d.parent = node.parent;
            d.objectClass = &objectClassOf(*node.decl);
            d.referenceClass = referenceClassOf(*node.decl);
            d.schema = computeReferenceSchema(node.name, prog_.hierarchy_);
            d.wellKnown = d.isConcept && d.schema.empty();
            d.order = prog_.decls_.size();
            prog_.declIndex_.emplace(d.name, prog_.decls_.size());
            prog_.decls_.push_back(std::move(d));
        }

        checkEntry();
        for (const auto& d : prog_.decls_) checkDecl(d);

        if (!diags_.empty()) throw CompileError(std::move(diags_));
        return std::move(prog_);
    }

private:
    // ---- helpers ----

    void error(SourceLoc loc, std::string msg) { diags_.push_back({loc, std::move(msg)}); }

    std::optional<Type> builtinType(const std::string& name) const {
        if (name == "void") return Type::of(K::Void);
        if (name == "int") return Type::of(K::Int);
        if (name == "long") return Type::of(K::Long);
        if (name == "double") return Type::of(K::Double);
        if (name == "String") return Type::of(K::String);
        if (name == "Root") return Type::of(K::Root);
        if (name == "Storage") return Type::of(K::Storage);
        if (name == "Map") return Type::of(K::Map);
        return std::nullopt;
    }

    // Reports unknown types (and void where not allowed); returns Dynamic
    // after an error so that follow-on checks stay quiet.
    Type resolveType(const TypeName& t, bool allowVoid) {
        Type out = quietType(t);
        if (out.is(K::Dynamic)) {
            error(t.loc, "unknown type '" + t.name + "'");
        } else if (out.is(K::Void) && !allowVoid) {
            error(t.loc, "'void' is not a valid type here");
            out = Type::of(K::Dynamic);
        }
        return out;
    }

    Type quietType(const TypeName& t) const {
        if (auto b = builtinType(t.name)) return *b;
        if (const auto* d = prog_.findDecl(t.name)) return Type::object(d->name, d->schema.empty());
        return Type::of(K::Dynamic);
    }

    Type record(const Expr& e, ExprInfo info) {
        Type t = info.type;
        prog_.exprInfo_[&e] = std::move(info);
        return t;
    }

    Type record(const Expr& e, Type t) { return record(e, ExprInfo{std::move(t)}); }

    void expectAssignable(SourceLoc loc, const Type& from, const Type& to, const std::string& what) {
        if (!isAssignable(from, to))
            error(loc, what + ": cannot convert " + toString(from) + " to " + toString(to));
    }

    void checkArgs(SourceLoc loc, const std::string& callee, const std::vector<Type>& params,
                   const std::vector<ExprPtr>& args) {
        std::vector<Type> argTypes;
        for (const auto& a : args) argTypes.push_back(expr(*a));
        if (args.size() != params.size()) {
            error(loc, "'" + callee + "' expects " + std::to_string(params.size()) + " argument" +
                           (params.size() == 1 ? "" : "s") + ", got " + std::to_string(args.size()));
            return;
        }
        for (std::size_t i = 0; i < args.size(); ++i)
            expectAssignable(args[i]->loc, argTypes[i], params[i],
                             "argument " + std::to_string(i + 1) + " of '" + callee + "'");
    }

    std::vector<Type> paramTypes(const MethodDecl& m) const {
        std::vector<Type> out;
        for (const auto& p : m.params) out.push_back(quietType(p.type));
        return out;
    }

    // ---- declarations ----

    void checkEntry() {
        const DeclInfo* main = prog_.findDecl("Main");
        if (!main) {
            error(SourceLoc{}, "missing entry point: class Main with method 'void main()'");
            return;
        }
        if (main->isConcept || main->parent) {
            error(declLoc(*main->decl), "entry class Main must be a class declared without 'in'");
            return;
        }
        const MethodDecl* m = main->objectClass->findMethod("main");
        if (!m || !m->params.empty() || m->returnType.name != "void") {
            error(m ? m->loc : declLoc(*main->decl), "entry point must be 'void main()' in class Main");
            return;
        }
        prog_.entryIndex_ = main->order;
        prog_.entryMethod_ = m;
    }

    void checkDecl(const DeclInfo& d) {
        decl_ = &d;
        checkFields(*d.objectClass, false);
        if (d.referenceClass) {
            checkFields(*d.referenceClass, true);
            if (!d.referenceClass->empty() && !d.referenceClass->findMethod("continue"))
                error(declLoc(*d.decl), "reference class of '" + d.name + "' must define 'void continue()'");
        }
        for (const auto& m : d.objectClass->methods) checkMethod(m, false);
        if (d.referenceClass)
            for (const auto& m : d.referenceClass->methods) checkMethod(m, true);
        decl_ = nullptr;
    }

    void checkFields(const ClassBody& body, bool isReference) {
        for (const auto& f : body.fields) {
            Type t = resolveType(f.type, false);
            if (isReference) {
                if (f.isStatic) error(f.loc, "reference field '" + f.name + "' cannot be static");
                if (!t.isNumeric() && !t.is(K::String) && !t.is(K::Dynamic))
                    error(f.type.loc, "reference field '" + f.name + "' must have a value type (int, long, double or String)");
                if (f.initKind != FieldInitKind::None)
                    error(f.loc, "reference field '" + f.name + "' cannot have an initializer");
                continue;
            }
            if (f.initKind == FieldInitKind::Create) {
                if (!t.is(K::Storage) && !t.is(K::Map) && !t.is(K::Dynamic))
                    error(f.loc, "'.create()' needs a built-in Storage or Map field, not " + toString(t));
            } else if (f.initKind == FieldInitKind::Value) {
                const Expr& init = *f.init;
                const Expr* lit = &init;
                if (const auto* neg = init.as<NegateExpr>()) lit = neg->operand.get();
                bool isLiteral = lit->as<IntLiteral>() || lit->as<FloatLiteral>() ||
                                 (lit == &init && lit->as<StringLiteral>());
                if (!isLiteral) {
                    error(init.loc, "field initializer of '" + f.name + "' must be a literal");
                    continue;
                }
                scopes_.clear();
                inRef_ = false;
                expectAssignable(init.loc, expr(init), t, "initializer of '" + f.name + "'");
            }
        }
    }

    void checkMethod(const MethodDecl& m, bool inReference) {
        inRef_ = inReference;
        method_ = &m;
        returnType_ = resolveType(m.returnType, true);
        scopes_.assign(1, {});
        for (const auto& p : m.params) scopes_.back().push_back({p.name, resolveType(p.type, false)});
        block(m.body);
        scopes_.clear();
        method_ = nullptr;
    }

    // ---- statements ----

    void block(const BlockStmt& b) {
        scopes_.emplace_back();
        for (const auto& s : b.statements) stmt(*s);
        scopes_.pop_back();
    }

    void stmt(const Stmt& s) {
        std::visit([&](const auto& n) { statement(s, n); }, s.node);
    }

    void statement(const Stmt& s, const VarDeclStmt& n) {
        Type t = resolveType(n.type, false);
        if (n.init) expectAssignable(n.init->loc, expr(*n.init), t, "initializer of '" + n.name + "'");
        for (const auto& [name, _] : scopes_.back())
            if (name == n.name) error(s.loc, "variable '" + n.name + "' is already declared in this scope");
        scopes_.back().push_back({n.name, t});
    }

    void statement(const Stmt&, const ExprStmt& n) { expr(*n.expr); }

    void statement(const Stmt&, const IfStmt& n) {
        Type c = expr(*n.cond);
        if (!c.is(K::Bool) && !c.is(K::Dynamic)) error(n.cond->loc, "condition must be a comparison, got " + toString(c));
        scoped(*n.thenBranch);
        if (n.elseBranch) scoped(*n.elseBranch);
    }

    void scoped(const Stmt& s) {
        scopes_.emplace_back();
        stmt(s);
        scopes_.pop_back();
    }

    void statement(const Stmt& s, const ReturnStmt& n) {
        if (!n.value) {
            if (!returnType_.is(K::Void) && !returnType_.is(K::Dynamic))
                error(s.loc, "method '" + method_->name + "' must return a value");
            return;
        }
        Type t = expr(*n.value);
        if (returnType_.is(K::Void)) {
            error(s.loc, "void method '" + method_->name + "' cannot return a value");
            return;
        }
        expectAssignable(n.value->loc, t, returnType_, "return value of '" + method_->name + "'");
    }

    void statement(const Stmt&, const BlockStmt& n) { block(n); }
    void statement(const Stmt&, const EmptyStmt&) {}

    // ---- expressions ----

    std::optional<ExprInfo> lookupName(const std::string& name) const {
        for (auto s = scopes_.rbegin(); s != scopes_.rend(); ++s)
            for (auto it = s->rbegin(); it != s->rend(); ++it)
                if (it->first == name) return ExprInfo{it->second, NameKind::Local};
        if (!decl_) return std::nullopt;
        if (inRef_) {
            if (const auto* f = decl_->referenceClass->findField(name))
                return ExprInfo{quietType(f->type), NameKind::SegmentField};
        } else if (const auto* f = decl_->objectClass->findField(name)) {
            return ExprInfo{quietType(f->type), f->isStatic ? NameKind::StaticField : NameKind::Field, {}, decl_->name};
        }
        return std::nullopt;
    }

    Type expr(const Expr& e) {
        return std::visit([&](const auto& n) { return check(e, n); }, e.node);
    }

    Type check(const Expr& e, const IntLiteral& n) {
        bool fitsInt = n.value <= std::numeric_limits<std::int32_t>::max();
        return record(e, Type::of(fitsInt ? K::Int : K::Long));
    }
    Type check(const Expr& e, const FloatLiteral&) { return record(e, Type::of(K::Double)); }
    Type check(const Expr& e, const StringLiteral&) { return record(e, Type::of(K::String)); }

    Type check(const Expr& e, const NameExpr& n) {
        if (auto info = lookupName(n.name)) return record(e, *info);
        if (prog_.findDecl(n.name)) error(e.loc, "type name '" + n.name + "' used as a value");
        else error(e.loc, "unknown name '" + n.name + "'");
        return record(e, Type::of(K::Dynamic));
    }

    Type check(const Expr& e, const ContextExpr&) {
        if (!inRef_ || !decl_) {
            error(e.loc, "context outside reference class");
            return record(e, Type::of(K::Dynamic));
        }
        return record(e, Type::object(decl_->name, true));
    }

    // `Decl` in `Decl.f` when the name is not shadowed by a variable or field.
    const DeclInfo* staticQualifier(const Expr& e) {
        const auto* name = e.as<NameExpr>();
        if (!name || lookupName(name->name)) return nullptr;
        const DeclInfo* d = prog_.findDecl(name->name);
        if (d) record(e, ExprInfo{Type::of(K::Dynamic), NameKind::Declaration, CallKind::Dynamic, d->name});
        return d;
    }

    Type check(const Expr& e, const FieldExpr& n) {
        if (const DeclInfo* owner = staticQualifier(*n.object)) {
            const FieldDecl* f = owner->objectClass->findField(n.field);
            if (!f || !f->isStatic) {
                error(e.loc, "'" + owner->name + "' has no static field '" + n.field + "'");
                return record(e, Type::of(K::Dynamic));
            }
            return record(e, ExprInfo{quietType(f->type), NameKind::StaticField, CallKind::Dynamic, owner->name});
        }
        Type recv = expr(*n.object);
        if (recv.is(K::Dynamic) || recv.is(K::Root))
            return record(e, ExprInfo{Type::of(K::Dynamic), NameKind::Field});
        if (recv.is(K::Object)) {
            if (!recv.direct) {
                error(e.loc, "field '" + n.field + "' cannot be read through a reference to '" + recv.name +
                                 "'; call a method instead");
                return record(e, Type::of(K::Dynamic));
            }
            const DeclInfo& d = prog_.decl(recv.name);
            const FieldDecl* f = d.objectClass->findField(n.field);
            if (!f) {
                error(e.loc, "type '" + d.name + "' has no field '" + n.field + "'");
                return record(e, Type::of(K::Dynamic));
            }
            return record(e, ExprInfo{quietType(f->type), f->isStatic ? NameKind::StaticField : NameKind::Field,
                                      CallKind::Dynamic, d.name});
        }
        error(e.loc, "cannot access field '" + n.field + "' on " + toString(recv));
        return record(e, Type::of(K::Dynamic));
    }

    Type check(const Expr& e, const CallExpr& n) {
        if (!n.receiver) return bareCall(e, n);

        if (staticQualifier(*n.receiver)) {
            error(e.loc, "methods cannot be called on a type name");
            for (const auto& a : n.args) expr(*a);
            return record(e, Type::of(K::Dynamic));
        }
        Type recv = expr(*n.receiver);
        auto withKind = [&](Type t, CallKind k, std::string owner = {}) {
            return record(e, ExprInfo{std::move(t), NameKind::Local, k, std::move(owner)});
        };

        switch (recv.kind) {
        case K::Root:
        case K::Dynamic:
            if (n.method == "continue") {
                checkArgs(e.loc, "continue", {}, n.args);
                return withKind(Type::of(K::Void), CallKind::ChainContinue);
            }
            for (const auto& a : n.args) expr(*a);
            return withKind(Type::of(K::Dynamic), CallKind::Dynamic);
        case K::Storage: return builtinCall(e, n, true);
        case K::Map: return builtinCall(e, n, false);
        case K::Object: {
            const DeclInfo& d = prog_.decl(recv.name);
            if (!recv.direct && n.method != "continue") {
                const DeclInfo& inner = prog_.decl(d.schema.segments.back().conceptName);
                if (const MethodDecl* dual = inner.referenceClass->findMethod(n.method)) {
                    checkArgs(e.loc, n.method, paramTypes(*dual), n.args);
                    return withKind(quietType(dual->returnType), CallKind::Dual, inner.name);
                }
            }
            const MethodDecl* m = d.objectClass->findMethod(n.method);
            if (!m) {
                error(e.loc, "type '" + d.name + "' has no method '" + n.method + "'");
                for (const auto& a : n.args) expr(*a);
                return withKind(Type::of(K::Dynamic), CallKind::Dynamic);
            }
            checkArgs(e.loc, n.method, paramTypes(*m), n.args);
            return withKind(quietType(m->returnType), recv.direct ? CallKind::Direct : CallKind::Invoke, d.name);
        }
        default:
            error(e.loc, "cannot call method '" + n.method + "' on " + toString(recv));
            for (const auto& a : n.args) expr(*a);
            return withKind(Type::of(K::Dynamic), CallKind::Dynamic);
        }
    }

    Type builtinCall(const Expr& e, const CallExpr& n, bool storage) {
        Type result = Type::of(K::Void);
        std::vector<Type> params;
        bool known = true;
        if (storage) {
            if (n.method == "load") {
                params = {Type::of(K::Long)};
                result = Type::of(K::Root);
            } else if (n.method == "store") {
                params = {Type::of(K::Long), Type::of(K::Root)};
            } else if (n.method != "open" && n.method != "close") {
                known = false;
            }
        } else {
            if (n.method == "get") {
                params = {Type::of(K::String)};
                result = Type::of(K::Root);
            } else if (n.method == "put") {
                params = {Type::of(K::String), Type::of(K::Root)};
            } else {
                known = false;
            }
        }
        if (!known) {
            error(e.loc, std::string(storage ? "Storage" : "Map") + " has no method '" + n.method + "'");
            for (const auto& a : n.args) expr(*a);
            return record(e, Type::of(K::Dynamic));
        }
        checkArgs(e.loc, n.method, params, n.args);
        return record(e, ExprInfo{result, NameKind::Local, storage ? CallKind::Storage : CallKind::Map});
    }

    Type bareCall(const Expr& e, const CallExpr& n) {
        if (n.method == "print") {
            if (n.args.size() != 1) {
                error(e.loc, "'print' expects 1 argument, got " + std::to_string(n.args.size()));
                for (const auto& a : n.args) expr(*a);
            } else {
                Type t = expr(*n.args[0]);
                if (!t.isNumeric() && !t.is(K::String) && !t.is(K::Dynamic))
                    error(n.args[0]->loc, "cannot print a value of type " + toString(t));
            }
            return record(e, ExprInfo{Type::of(K::Void), NameKind::Local, CallKind::Print});
        }
        const ClassBody* body = !decl_ ? nullptr : inRef_ ? decl_->referenceClass : decl_->objectClass;
        const MethodDecl* m = body ? body->findMethod(n.method) : nullptr;
        if (!m) {
            error(e.loc, "unknown method '" + n.method + "'");
            for (const auto& a : n.args) expr(*a);
            return record(e, Type::of(K::Dynamic));
        }
        if (inRef_ && m->name == "continue") error(e.loc, "the reference 'continue' method cannot be called directly");
        checkArgs(e.loc, n.method, paramTypes(*m), n.args);
        return record(e, ExprInfo{quietType(m->returnType), NameKind::Local, CallKind::OwnMethod, decl_->name});
    }

    Type check(const Expr& e, const NewExpr& n) {
        if (n.type.name == "Storage" || n.type.name == "Map") {
            checkArgs(e.loc, "new " + n.type.name, {}, n.args);
            return record(e, Type::of(n.type.name == "Storage" ? K::Storage : K::Map));
        }
        const DeclInfo* d = prog_.findDecl(n.type.name);
        if (!d) {
            error(n.type.loc, "unknown type '" + n.type.name + "'");
            for (const auto& a : n.args) expr(*a);
            return record(e, Type::of(K::Dynamic));
        }
        auto fields = d->instanceFields();
        std::vector<Type> argTypes;
        for (const auto& a : n.args) argTypes.push_back(expr(*a));
        if (n.args.size() > fields.size()) {
            error(e.loc, "'new " + d->name + "' takes at most " + std::to_string(fields.size()) +
                             " field value" + (fields.size() == 1 ? "" : "s") + ", got " +
                             std::to_string(n.args.size()));
        } else {
            for (std::size_t i = 0; i < n.args.size(); ++i)
                expectAssignable(n.args[i]->loc, argTypes[i], quietType(fields[i]->type),
                                 "field '" + fields[i]->name + "' of 'new " + d->name + "'");
        }
        return record(e, Type::object(d->name, true));
    }

    Type check(const Expr& e, const RefExpr& n) {
        std::vector<Type> argTypes;
        for (const auto& a : n.args) argTypes.push_back(expr(*a));
        const DeclInfo* d = prog_.findDecl(n.type.name);
        if (!d) {
            error(n.type.loc, "unknown type '" + n.type.name + "'");
            return record(e, Type::of(K::Dynamic));
        }
        if (d->schema.empty()) {
            error(e.loc, "'" + d->name + "' is root-represented and has no reference format; use 'new'");
            return record(e, Type::of(K::Dynamic));
        }
        auto layout = d->schema.flattened();
        if (layout.size() != n.args.size()) {
            error(e.loc, "reference constructor expects " + std::to_string(layout.size()) + " value" +
                             (layout.size() == 1 ? "" : "s") + ", got " + std::to_string(n.args.size()));
        } else {
            for (std::size_t i = 0; i < layout.size(); ++i)
                expectAssignable(n.args[i]->loc, argTypes[i], quietType(TypeName{layout[i].type, {}}),
                                 "segment field '" + layout[i].name + "' of '" + d->name + "@'");
        }
        return record(e, Type::object(d->name, false));
    }

    Type check(const Expr& e, const AssignExpr& n) {
        Type target = expr(*n.target);
        Type value = expr(*n.value);
        checkLValue(*n.target);
        if (n.op == AssignOp::Assign) {
            expectAssignable(n.value->loc, value, target, "assignment");
        } else if (target.is(K::Dynamic) || value.is(K::Dynamic)) {
            // checked at run time
        } else if (n.op == AssignOp::AddAssign && target.is(K::String) && value.is(K::String)) {
            // concatenation
        } else if (!target.isNumeric() || !value.isNumeric() || !isAssignable(promote(target, value), target)) {
            error(e.loc, "invalid compound assignment of " + toString(value) + " to " + toString(target));
        }
        return record(e, target);
    }

    void checkLValue(const Expr& target) {
        const ExprInfo& info = prog_.exprInfo_.at(&target);
        if (target.as<NameExpr>() && info.nameKind == NameKind::Declaration)
            error(target.loc, "cannot assign to a type name");
    }

    Type check(const Expr& e, const IncDecExpr& n) {
        Type t = expr(*n.target);
        checkLValue(*n.target);
        if (!t.isNumeric() && !t.is(K::Dynamic))
            error(e.loc, std::string(n.increment ? "increment" : "decrement") + " needs a numeric operand, got " +
                             toString(t));
        return record(e, t);
    }

    Type check(const Expr& e, const BinaryExpr& n) {
        Type l = expr(*n.lhs);
        Type r = expr(*n.rhs);
        bool dyn = l.is(K::Dynamic) || r.is(K::Dynamic);
        switch (n.op) {
        case BinaryOp::Add:
            if (dyn) return record(e, Type::of(K::Dynamic));
            if (l.is(K::String) && r.is(K::String)) return record(e, l);
            [[fallthrough]];
        case BinaryOp::Sub:
            if (dyn) return record(e, Type::of(K::Dynamic));
            if (!l.isNumeric() || !r.isNumeric()) {
                error(e.loc, "invalid operands to '" + std::string(n.op == BinaryOp::Add ? "+" : "-") + "': " +
                                 toString(l) + " and " + toString(r));
                return record(e, Type::of(K::Dynamic));
            }
            return record(e, promote(l, r));
        case BinaryOp::Lt:
        case BinaryOp::Gt:
            if (!dyn && (!l.isNumeric() || !r.isNumeric()))
                error(e.loc, "ordering comparison needs numeric operands, got " + toString(l) + " and " + toString(r));
            return record(e, Type::of(K::Bool));
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
            bool ok = dyn || (l.isNumeric() && r.isNumeric()) ||
                      (l.kind == r.kind && l.name == r.name && !l.is(K::Void)) ||
                      (isAssignable(l, Type::of(K::Root)) && isAssignable(r, Type::of(K::Root)));
            if (!ok) error(e.loc, "cannot compare " + toString(l) + " with " + toString(r));
            return record(e, Type::of(K::Bool));
        }
        }
        return record(e, Type::of(K::Dynamic));
    }

    Type check(const Expr& e, const NegateExpr& n) {
        Type t = expr(*n.operand);
        if (!t.isNumeric() && !t.is(K::Dynamic)) {
            error(e.loc, "unary '-' needs a numeric operand, got " + toString(t));
            return record(e, Type::of(K::Dynamic));
        }
        return record(e, t);
    }

    CheckedProgram prog_;
    std::vector<Diagnostic> diags_;

    const DeclInfo* decl_ = nullptr;
    bool inRef_ = false;
    const MethodDecl* method_ = nullptr;
    Type returnType_;
    std::vector<std::vector<std::pair<std::string, Type>>> scopes_;
};

CheckedProgram check(std::shared_ptr<const ProgramAst> program, ConceptHierarchy hierarchy) {
    return Checker(std::move(program), std::move(hierarchy)).run();
}

CheckedProgram analyze(std::shared_ptr<const ProgramAst> program) {
    ConceptHierarchy h = buildHierarchy(*program);
    return check(std::move(program), std::move(h));
}

} // namespace copl::semantics
