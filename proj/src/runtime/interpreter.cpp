#include "copl/runtime/interpreter.hpp"

#include <limits>
#include <ostream>

namespace copl::runtime {

using namespace copl::ast;
using semantics::CallKind;
using semantics::DeclInfo;
using semantics::NameKind;

struct Interpreter::Frame {
    const DeclInfo* decl = nullptr;
    const MethodDecl* method = nullptr;
    bool inReference = false;
    // Receiver of an object-class method.
    std::optional<RootHandle> self;
    // `context` of a reference-class method.
    Value context;
    // For reference methods scopes[0] holds the segment's fields.
    std::vector<Slots> scopes;
    // Set while running a segment step of a resolution chain.
    std::optional<std::size_t> chain;
    std::size_t step = 0;
    Value returnValue;
    bool returned = false;
};

namespace {

int numericRank(const Value& v) {
    if (v.is<std::int32_t>()) return 1;
    if (v.is<std::int64_t>()) return 2;
    if (v.is<double>()) return 3;
    return 0;
}

std::int64_t toInt64(const Value& v) {
    if (const auto* i = v.getIf<std::int32_t>()) return *i;
    return v.as<std::int64_t>();
}

double toDouble(const Value& v) {
    if (const auto* d = v.getIf<double>()) return *d;
    return static_cast<double>(toInt64(v));
}

// Two's-complement wraparound, without signed-overflow UB.
template <class Int>
Int wrapAdd(Int a, Int b, bool subtract) {
    using U = std::make_unsigned_t<Int>;
    U r = subtract ? static_cast<U>(a) - static_cast<U>(b) : static_cast<U>(a) + static_cast<U>(b);
    return static_cast<Int>(r);
}

Value arithmetic(bool subtract, const Value& a, const Value& b) {
    if (!subtract && a.is<std::string>() && b.is<std::string>()) return Value(a.as<std::string>() + b.as<std::string>());
    int ra = numericRank(a);
    int rb = numericRank(b);
    if (a.isVoid() || b.isVoid()) throw RuntimeError("arithmetic on void");
    if (!ra || !rb)
        throw RuntimeError(std::string("invalid operands to '") + (subtract ? "-" : "+") + "': " + kindName(a) +
                           " and " + kindName(b));
    switch (std::max(ra, rb)) {
    case 3: {
        double x = toDouble(a);
        double y = toDouble(b);
        return Value(subtract ? x - y : x + y);
    }
    case 2: return Value(wrapAdd<std::int64_t>(toInt64(a), toInt64(b), subtract));
    default: return Value(wrapAdd<std::int32_t>(a.as<std::int32_t>(), b.as<std::int32_t>(), subtract));
    }
}

bool valuesEqual(const Value& a, const Value& b) {
    int ra = numericRank(a);
    int rb = numericRank(b);
    if (ra && rb) {
        if (std::max(ra, rb) == 3) return toDouble(a) == toDouble(b);
        return toInt64(a) == toInt64(b);
    }
    return a == b;
}

bool lessThan(const Value& a, const Value& b) {
    int ra = numericRank(a);
    int rb = numericRank(b);
    if (!ra || !rb) throw RuntimeError("ordering comparison of " + kindName(a) + " and " + kindName(b));
    if (std::max(ra, rb) == 3) return toDouble(a) < toDouble(b);
    return toInt64(a) < toInt64(b);
}

Value negate(const Value& v) {
    if (const auto* i = v.getIf<std::int32_t>()) return Value(wrapAdd<std::int32_t>(0, *i, true));
    if (const auto* l = v.getIf<std::int64_t>()) return Value(wrapAdd<std::int64_t>(0, *l, true));
    if (const auto* d = v.getIf<double>()) return Value(-*d);
    throw RuntimeError("unary '-' on " + kindName(v));
}

Value literalValue(const IntLiteral& n) {
    if (n.value <= std::numeric_limits<std::int32_t>::max()) return Value(static_cast<std::int32_t>(n.value));
    return Value(n.value);
}

const Value kVoid{VoidValue{}};

} // namespace

// Walks statements and expressions of one method activation.
class Interpreter::Evaluator {
public:
    Evaluator(Interpreter& in, Frame& frame) : in_(in), f_(frame) {}

    void runBody(const BlockStmt& body) { execBlock(body); }

private:
    // ---- statements ----

    bool exec(const Stmt& s) {
        in_.countStep();
        try {
            return std::visit([&](const auto& n) { return run(n); }, s.node);
        } catch (RuntimeError& e) {
            e.setLoc(s.loc);
            throw;
        }
    }

    bool execBlock(const BlockStmt& b) {
        f_.scopes.emplace_back();
        for (const auto& s : b.statements) {
            if (exec(*s)) {
                f_.scopes.pop_back();
                return true;
            }
        }
        f_.scopes.pop_back();
        return false;
    }

    bool execScoped(const Stmt& s) {
        f_.scopes.emplace_back();
        bool r = exec(s);
        f_.scopes.pop_back();
        return r;
    }

    bool run(const VarDeclStmt& n) {
        Value v = n.init ? in_.coerce(eval(*n.init), n.type.name) : in_.defaultValue(n.type.name);
        f_.scopes.back().push_back(Slot{n.name, n.type.name, std::move(v)});
        return false;
    }

    bool run(const ExprStmt& n) {
        eval(*n.expr);
        return false;
    }

    bool run(const IfStmt& n) {
        Value c = eval(*n.cond);
        const bool* b = c.getIf<bool>();
        if (!b) throw RuntimeError("condition is a " + kindName(c) + ", not a comparison");
        if (*b) return execScoped(*n.thenBranch);
        if (n.elseBranch) return execScoped(*n.elseBranch);
        return false;
    }

    bool run(const ReturnStmt& n) {
        f_.returnValue = n.value ? in_.coerce(eval(*n.value), f_.method->returnType.name) : kVoid;
        f_.returned = true;
        return true;
    }

    bool run(const BlockStmt& n) { return execBlock(n); }
    bool run(const EmptyStmt&) { return false; }

    // ---- expressions ----

    Value eval(const Expr& e) {
        return std::visit([&](const auto& n) { return value(e, n); }, e.node);
    }

    std::vector<Value> evalArgs(const std::vector<ExprPtr>& args) {
        std::vector<Value> out;
        out.reserve(args.size());
        for (const auto& a : args) out.push_back(eval(*a));
        return out;
    }

    Value value(const Expr&, const IntLiteral& n) { return literalValue(n); }
    Value value(const Expr&, const FloatLiteral& n) { return Value(n.value); }
    Value value(const Expr&, const StringLiteral& n) { return Value(n.value); }
    Value value(const Expr& e, const NameExpr&) { return slot(e).value; }
    Value value(const Expr&, const ContextExpr&) {
        if (!f_.inReference) throw RuntimeError("context outside reference class");
        return f_.context;
    }
    Value value(const Expr& e, const FieldExpr&) { return slot(e).value; }

    Value value(const Expr&, const NewExpr& n) {
        std::vector<Value> args = evalArgs(n.args);
        if (n.type.name == "Storage") return Value(in_.newStorage());
        if (n.type.name == "Map") return Value(in_.newMap());
        std::optional<RootHandle> parent = f_.self;
        if (f_.inReference) {
            if (const auto* h = f_.context.getIf<RootHandle>()) parent = *h;
        }
        return Value(in_.instantiate(n.type.name, parent, args));
    }

    Value value(const Expr&, const RefExpr& n) {
        std::vector<Value> args = evalArgs(n.args);
        return Value(in_.constructReference(n.type.name, args));
    }

    Value value(const Expr&, const AssignExpr& n) {
        Slot& target = slot(*n.target);
        if (n.op == AssignOp::Assign) {
            target.value = in_.coerce(eval(*n.value), target.type);
            return target.value;
        }
        // The target is read before the right-hand side runs.
        Value old = target.value;
        Value rhs = eval(*n.value);
        target.value = in_.coerce(arithmetic(n.op == AssignOp::SubAssign, old, rhs), target.type);
        return target.value;
    }

    Value value(const Expr&, const IncDecExpr& n) {
        Slot& target = slot(*n.target);
        Value old = target.value;
        if (!old.isNumeric()) throw RuntimeError((n.increment ? "increment of " : "decrement of ") + kindName(old));
        target.value = in_.coerce(arithmetic(!n.increment, old, Value(std::int32_t{1})), target.type);
        return n.prefix ? target.value : old;
    }

    Value value(const Expr&, const BinaryExpr& n) {
        Value l = eval(*n.lhs);
        Value r = eval(*n.rhs);
        switch (n.op) {
        case BinaryOp::Add: return arithmetic(false, l, r);
        case BinaryOp::Sub: return arithmetic(true, l, r);
        case BinaryOp::Eq: return Value(valuesEqual(l, r));
        case BinaryOp::Ne: return Value(!valuesEqual(l, r));
        case BinaryOp::Lt: return Value(lessThan(l, r));
        case BinaryOp::Gt: return Value(lessThan(r, l));
        }
        return kVoid;
    }

    Value value(const Expr&, const NegateExpr& n) { return negate(eval(*n.operand)); }

    Value value(const Expr& e, const CallExpr& n) {
        try {
            return call(e, n);
        } catch (RuntimeError& err) {
            err.setLoc(e.loc);
            throw;
        }
    }

    Value call(const Expr& e, const CallExpr& n) {
        const auto& info = in_.program_.info(e);
        switch (info.callKind) {
        case CallKind::Print: {
            Value v = eval(*n.args.at(0));
            in_.out_ << builtins::printText(v);
            return kVoid;
        }
        case CallKind::OwnMethod: {
            std::vector<Value> args = evalArgs(n.args);
            const DeclInfo& d = in_.program_.decl(info.owner);
            if (f_.inReference) {
                const MethodDecl* m = d.referenceClass->findMethod(n.method);
                return in_.callMethod(d, *m, true, std::nullopt, f_.context, &f_.scopes.front(), std::move(args));
            }
            const MethodDecl* m = d.objectClass->findMethod(n.method);
            return in_.callMethod(d, *m, false, f_.self, kVoid, nullptr, std::move(args));
        }
        case CallKind::ChainContinue: {
            Value target = eval(*n.receiver);
            in_.chainContinue(f_, target);
            return kVoid;
        }
        default: break;
        }

        Value recv = eval(*n.receiver);
        std::vector<Value> args = evalArgs(n.args);
        return in_.dispatch(recv, n.method, std::move(args));
    }

    // Resolves the storage slot behind a name or field expression.
    Slot& slot(const Expr& e) {
        const auto& info = in_.program_.info(e);
        if (const auto* name = e.as<NameExpr>()) {
            switch (info.nameKind) {
            case NameKind::Local:
            case NameKind::SegmentField:
                for (auto s = f_.scopes.rbegin(); s != f_.scopes.rend(); ++s)
                    if (Slot* found = findSlot(*s, name->name)) return *found;
                throw RuntimeError("unbound name '" + name->name + "'");
            case NameKind::Field:
                if (!f_.self) throw RuntimeError("field '" + name->name + "' used without an object");
                return in_.fieldSlot(*f_.self, name->name);
            case NameKind::StaticField: {
                Slot* s = findSlot(in_.staticsOf(info.owner), name->name);
                if (!s) throw RuntimeError("unknown static field '" + name->name + "'");
                return *s;
            }
            case NameKind::Declaration: break;
            }
            throw RuntimeError("type name '" + name->name + "' used as a value");
        }

        const auto& field = std::get<FieldExpr>(e.node);
        if (field.object->as<NameExpr>() && in_.program_.info(*field.object).nameKind == NameKind::Declaration) {
            Slot* s = findSlot(in_.staticsOf(info.owner), field.field);
            if (!s) throw RuntimeError("unknown static field '" + info.owner + "." + field.field + "'");
            return *s;
        }
        Value recv = eval(*field.object);
        if (const auto* h = recv.getIf<RootHandle>()) return in_.fieldSlot(*h, field.field);
        if (recv.isNil()) throw RuntimeError("nil dereference reading field '" + field.field + "'");
        throw RuntimeError("cannot access field '" + field.field + "' on " + kindName(recv));
    }

    Interpreter& in_;
    Frame& f_;
};

// ---- Interpreter ----------------------------------------------------------

Interpreter::Interpreter(const semantics::CheckedProgram& program, std::ostream& out, std::ostream* trace,
                         RunOptions options)
    : program_(program), out_(out), trace_(trace), options_(options) {}

Interpreter::~Interpreter() = default;

void Interpreter::initialize() {
    if (initialized_) return;
    initialized_ = true;
    for (const auto& d : program_.decls()) {
        Slots& statics = statics_[d.name];
        for (const auto& f : d.objectClass->fields)
            if (f.isStatic) statics.push_back(Slot{f.name, f.type.name, fieldInitializer(f)});
        if (d.wellKnown) singletons_[d.name] = instantiate(d.name, std::nullopt);
    }
}

void Interpreter::runMain() {
    initialize();
    const DeclInfo& mainDecl = program_.entryClass();
    RootHandle main = instantiate(mainDecl.name, std::nullopt);
    callMethod(mainDecl, program_.entryMethod(), false, main, kVoid, nullptr, {});
}

RootHandle Interpreter::instantiate(std::string_view typeName, std::optional<RootHandle> context,
                                    std::span<const Value> fieldValues) {
    const DeclInfo* d = program_.findDecl(typeName);
    if (!d) throw RuntimeError("unknown type '" + std::string(typeName) + "'");
    auto fields = d->instanceFields();
    if (fieldValues.size() > fields.size())
        throw RuntimeError("'new " + d->name + "' takes at most " + std::to_string(fields.size()) + " field values");
    RuntimeObject obj{d->name, {}, context};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& f = *fields[i];
        Value v = i < fieldValues.size() ? coerce(fieldValues[i], f.type.name) : fieldInitializer(f);
        obj.fields.push_back(Slot{f.name, f.type.name, std::move(v)});
    }
    return objects_.add(std::move(obj));
}

ReferencePtr Interpreter::constructReference(std::string_view typeName, std::span<const Value> flattened) {
    const DeclInfo* d = program_.findDecl(typeName);
    if (!d) throw RuntimeError("unknown type '" + std::string(typeName) + "'");
    if (d->schema.empty()) throw RuntimeError("'" + d->name + "' is root-represented and has no reference format");
    if (flattened.size() != d->schema.flatSize())
        throw RuntimeError("reference constructor expects " + std::to_string(d->schema.flatSize()) + " values, got " +
                           std::to_string(flattened.size()));
    auto ref = std::make_shared<ComplexReference>();
    ref->targetType = d->name;
    std::size_t next = 0;
    for (const auto& seg : d->schema.segments) {
        SegmentValue sv{seg.conceptName, {}};
        for (const auto& f : seg.fields) sv.fields.push_back(Slot{f.name, f.type, coerce(flattened[next++], f.type)});
        ref->segments.push_back(std::move(sv));
    }
    return ref;
}

Value Interpreter::invoke(const ReferencePtr& ref, std::string_view method, std::vector<Value> args) {
    if (!ref) throw RuntimeError("method '" + std::string(method) + "' called on a nil reference");
    const DeclInfo& target = program_.decl(ref->targetType);
    const DeclInfo& inner = program_.decl(ref->segments.back().conceptName);

    auto chain = std::make_unique<ResolutionChain>();
    chain->ref = ref;
    chain->method = std::string(method);
    chain->args = std::move(args);
    const MethodDecl* dual = method == "continue" ? nullptr : inner.referenceClass->findMethod(chain->method);
    if (dual) {
        chain->terminal = ResolutionChain::Terminal::Dual;
        chain->segmentSteps = ref->segments.size() - 1;
    } else {
        if (!target.objectClass->findMethod(chain->method))
            throw RuntimeError("type '" + target.name + "' has no method '" + chain->method + "'");
        chain->segmentSteps = ref->segments.size();
    }

    chains_.push_back(std::move(chain));
    const std::size_t index = chains_.size() - 1;
    struct Pop {
        Interpreter& in;
        ~Pop() {
            in.chains_.pop_back();
            if (in.chains_.empty())
                for (auto& s : in.storages_) s.releaseLive();
        }
    } pop{*this};

    const std::string& top = ref->segments.front().conceptName;
    auto ctx = singletons_.find(top);
    if (ctx == singletons_.end()) throw RuntimeError("no well-known context for '" + top + "'");
    runStep(index, 0, Value(ctx->second));

    const ResolutionChain& done = *chains_[index];
    return done.terminalRan ? done.result : kVoid;
}

void Interpreter::runStep(std::size_t chainIndex, std::size_t step, Value context) {
    ResolutionChain& chain = *chains_[chainIndex];
    chain.cursor = step + 1;
    const ComplexReference& ref = *chain.ref;

    if (step < chain.segmentSteps) {
        const SegmentValue& seg = ref.segments[step];
        const DeclInfo& d = program_.decl(seg.conceptName);
        const MethodDecl* cont = d.referenceClass->findMethod("continue");
        const std::string where = seg.conceptName + " seg=" + std::to_string(step + 1);
        emitTrace("TRACE enter " + where);
        try {
            callMethod(d, *cont, true, std::nullopt, std::move(context), &seg.fields, {}, chainIndex, step);
        } catch (RuntimeError& e) {
            // Only errors raised by this step itself, before it handed
            // control on, name this segment.
            if (e.annotated() || chain.cursor != step + 1) throw;
            RuntimeError named(std::string(e.what()) + " (while resolving segment " + std::to_string(step + 1) + " '" +
                                   seg.conceptName + "' of " + ref.targetType + ")",
                               e.loc());
            named.markAnnotated();
            throw named;
        }
        emitTrace("TRACE exit " + where);
        return;
    }

    const auto* handle = context.getIf<RootHandle>();
    if (!handle) throw RuntimeError("resolution of " + ref.targetType + " produced " + kindName(context));
    if (chain.terminal == ResolutionChain::Terminal::Business) {
        const RuntimeObject& obj = objects_.at(*handle);
        const DeclInfo& d = program_.decl(obj.typeName);
        const MethodDecl* m = d.objectClass->findMethod(chain.method);
        if (!m) throw RuntimeError("resolved object of type '" + d.name + "' has no method '" + chain.method + "'");
        chain.result = callMethod(d, *m, false, *handle, kVoid, nullptr, chain.args);
    } else {
        const SegmentValue& seg = ref.segments.back();
        const DeclInfo& d = program_.decl(seg.conceptName);
        const MethodDecl* m = d.referenceClass->findMethod(chain.method);
        chain.result = callMethod(d, *m, true, std::nullopt, context, &seg.fields, chain.args);
    }
    chain.terminalRan = true;
}

void Interpreter::chainContinue(const Frame& frame, const Value& target) {
    if (!frame.chain) throw RuntimeError("continue outside resolution");
    if (target.isNil()) throw RuntimeError("continue on a nil reference");
    const auto* h = target.getIf<RootHandle>();
    if (!h) throw RuntimeError("continue needs a root handle, got " + kindName(target));
    objects_.at(*h);
    const ResolutionChain& chain = *chains_[*frame.chain];
    if (chain.cursor != frame.step + 1)
        throw RuntimeError("continue called more than once while resolving segment " + std::to_string(frame.step + 1));
    runStep(*frame.chain, frame.step + 1, target);
}

Value Interpreter::callDirect(RootHandle target, std::string_view method, std::vector<Value> args) {
    const RuntimeObject& obj = objects_.at(target);
    const DeclInfo& d = program_.decl(obj.typeName);
    const MethodDecl* m = d.objectClass->findMethod(std::string(method));
    if (!m) throw RuntimeError("type '" + d.name + "' has no method '" + std::string(method) + "'");
    return callMethod(d, *m, false, target, kVoid, nullptr, std::move(args));
}

Value Interpreter::dispatch(const Value& recv, const std::string& method, std::vector<Value> args) {
    if (const auto* h = recv.getIf<RootHandle>()) return callDirect(*h, method, std::move(args));
    if (const auto* r = recv.getIf<ReferencePtr>()) return invoke(*r, method, std::move(args));
    if (const auto* s = recv.getIf<StorageHandle>()) return storageCall(*s, method, args);
    if (const auto* m = recv.getIf<MapHandle>()) return mapCall(*m, method, args);
    if (recv.isNil()) throw RuntimeError("method '" + method + "' called on nil");
    throw RuntimeError("cannot call method '" + method + "' on " + kindName(recv));
}

namespace {

void expectArity(const std::string& what, const std::vector<Value>& args, std::size_t n) {
    if (args.size() != n)
        throw RuntimeError("'" + what + "' expects " + std::to_string(n) + " arguments, got " +
                           std::to_string(args.size()));
}

} // namespace

Value Interpreter::storageCall(StorageHandle h, const std::string& method, const std::vector<Value>& args) {
    builtins::StorageInstance& st = storages_.at(h.index);
    if (method == "load") {
        expectArity("Storage.load", args, 1);
        Value key = coerce(args[0], "long");
        return Value(st.load(key.as<std::int64_t>(), objects_, !chains_.empty()));
    }
    if (method == "store") {
        expectArity("Storage.store", args, 2);
        Value key = coerce(args[0], "long");
        st.store(key.as<std::int64_t>(), args[1], objects_);
        return kVoid;
    }
    if (method == "open") {
        expectArity("Storage.open", args, 0);
        st.open();
        emitTrace("TRACE open " + st.label());
        return kVoid;
    }
    if (method == "close") {
        expectArity("Storage.close", args, 0);
        st.close();
        emitTrace("TRACE close " + st.label());
        return kVoid;
    }
    throw RuntimeError("Storage has no method '" + method + "'");
}

Value Interpreter::mapCall(MapHandle h, const std::string& method, const std::vector<Value>& args) {
    builtins::MapInstance& map = maps_.at(h.index);
    if (method == "get") {
        expectArity("Map.get", args, 1);
        return Value(map.get(coerce(args[0], "String").as<std::string>()));
    }
    if (method == "put") {
        expectArity("Map.put", args, 2);
        map.put(coerce(args[0], "String").as<std::string>(), args[1]);
        return kVoid;
    }
    throw RuntimeError("Map has no method '" + method + "'");
}

Value Interpreter::callMethod(const DeclInfo& decl, const MethodDecl& method, bool inReference,
                              std::optional<RootHandle> self, Value context, const Slots* segment,
                              std::vector<Value> args, std::optional<std::size_t> chain, std::size_t step) {
    countStep();
    if (depth_ >= options_.maxCallDepth)
        throw RuntimeError("call depth limit of " + std::to_string(options_.maxCallDepth) + " exceeded");
    if (args.size() != method.params.size())
        throw RuntimeError("'" + decl.name + "." + method.name + "' expects " + std::to_string(method.params.size()) +
                           " arguments, got " + std::to_string(args.size()));
    if (!(inReference && method.name == "continue")) emitTrace("TRACE call " + decl.name + "." + method.name);

    Frame f;
    f.decl = &decl;
    f.method = &method;
    f.inReference = inReference;
    f.self = self;
    f.context = std::move(context);
    f.chain = chain;
    f.step = step;
    if (inReference) f.scopes.push_back(segment ? *segment : Slots{});
    Slots params;
    for (std::size_t i = 0; i < args.size(); ++i)
        params.push_back(Slot{method.params[i].name, method.params[i].type.name,
                              coerce(std::move(args[i]), method.params[i].type.name)});
    f.scopes.push_back(std::move(params));

    ++depth_;
    struct Depth {
        std::size_t& d;
        ~Depth() { --d; }
    } guard{depth_};

    Evaluator(*this, f).runBody(method.body);
    if (!f.returned && method.returnType.name != "void")
        throw RuntimeError("method '" + decl.name + "." + method.name + "' finished without returning a value",
                           method.loc);
    return f.returned ? f.returnValue : kVoid;
}

Value Interpreter::coerce(Value v, const std::string& typeName) const {
    auto mismatch = [&]() -> RuntimeError {
        return RuntimeError("type mismatch: expected " + typeName + ", got " + kindName(v));
    };
    if (typeName == "int") {
        if (v.is<std::int32_t>()) return v;
        throw mismatch();
    }
    if (typeName == "long") {
        if (const auto* i = v.getIf<std::int32_t>()) return Value(static_cast<std::int64_t>(*i));
        if (v.is<std::int64_t>()) return v;
        throw mismatch();
    }
    if (typeName == "double") {
        if (v.isNumeric()) return Value(toDouble(v));
        throw mismatch();
    }
    if (typeName == "String") {
        if (v.is<std::string>()) return v;
        throw mismatch();
    }
    if (typeName == "void") return v;
    if (v.isNil()) return v;
    if (typeName == "Root") {
        if (v.is<RootHandle>()) return v;
        throw mismatch();
    }
    if (typeName == "Storage") {
        if (v.is<StorageHandle>()) return v;
        throw mismatch();
    }
    if (typeName == "Map") {
        if (v.is<MapHandle>()) return v;
        throw mismatch();
    }
    const DeclInfo* d = program_.findDecl(typeName);
    if (!d) throw RuntimeError("unknown type '" + typeName + "'");
    if (d->schema.empty()) {
        const auto* h = v.getIf<RootHandle>();
        if (h && objects_.at(*h).typeName == d->name) return v;
        throw mismatch();
    }
    const auto* r = v.getIf<ReferencePtr>();
    if (r && *r && (*r)->targetType == d->name) return v;
    throw mismatch();
}

Value Interpreter::defaultValue(const std::string& typeName) const {
    if (typeName == "int") return Value(std::int32_t{0});
    if (typeName == "long") return Value(std::int64_t{0});
    if (typeName == "double") return Value(0.0);
    if (typeName == "String") return Value(std::string());
    return Value(Nil{});
}

Value Interpreter::fieldInitializer(const FieldDecl& f) {
    switch (f.initKind) {
    case FieldInitKind::None: return defaultValue(f.type.name);
    case FieldInitKind::Create:
        if (f.type.name == "Storage") return Value(newStorage());
        if (f.type.name == "Map") return Value(newMap());
        throw RuntimeError("'.create()' on non-built-in type '" + f.type.name + "'", f.loc);
    case FieldInitKind::Value: break;
    }
    const Expr* lit = f.init.get();
    bool negative = false;
    if (const auto* neg = lit->as<NegateExpr>()) {
        lit = neg->operand.get();
        negative = true;
    }
    Value v;
    if (const auto* i = lit->as<IntLiteral>()) v = literalValue(*i);
    else if (const auto* d = lit->as<FloatLiteral>()) v = Value(d->value);
    else if (const auto* s = lit->as<StringLiteral>()) v = Value(s->value);
    else throw RuntimeError("field initializer of '" + f.name + "' is not a literal", f.loc);
    if (negative) v = negate(v);
    return coerce(std::move(v), f.type.name);
}

StorageHandle Interpreter::newStorage() {
    storages_.emplace_back("storage#" + std::to_string(storages_.size() + 1));
    return StorageHandle{static_cast<std::uint32_t>(storages_.size() - 1)};
}

MapHandle Interpreter::newMap() {
    maps_.emplace_back();
    return MapHandle{static_cast<std::uint32_t>(maps_.size() - 1)};
}

Slots& Interpreter::staticsOf(const std::string& declName) { return statics_[declName]; }

Slot& Interpreter::fieldSlot(RootHandle h, const std::string& name) {
    RuntimeObject& obj = objects_.at(h);
    if (Slot* s = findSlot(obj.fields, name)) return *s;
    if (Slot* s = findSlot(staticsOf(obj.typeName), name)) return *s;
    throw RuntimeError("object of type '" + obj.typeName + "' has no field '" + name + "'");
}

std::optional<RootHandle> Interpreter::singleton(std::string_view conceptName) const {
    auto it = singletons_.find(std::string(conceptName));
    if (it == singletons_.end()) return std::nullopt;
    return it->second;
}

const Value& Interpreter::staticField(std::string_view declName, std::string_view field) const {
    const Slots& slots = statics_.at(std::string(declName));
    if (const Slot* s = findSlot(slots, std::string(field))) return s->value;
    throw std::out_of_range("no static field '" + std::string(field) + "'");
}

void Interpreter::countStep() {
    if (++steps_ > options_.maxSteps)
        throw RuntimeError("step budget of " + std::to_string(options_.maxSteps) + " exceeded");
}

void Interpreter::emitTrace(const std::string& line) {
    if (trace_) *trace_ << line << '\n';
}

RunResult runProgram(const semantics::CheckedProgram& program, std::ostream& out, std::ostream* trace,
                     RunOptions options) {
    Interpreter in(program, out, trace, options);
    RunResult result;
    try {
        in.runMain();
    } catch (const RuntimeError& e) {
        result.exitStatus = 1;
        result.errorLoc = e.loc();
        result.error = e.what();
    }
    out.flush();
    if (trace) trace->flush();
    return result;
}

} // namespace copl::runtime
