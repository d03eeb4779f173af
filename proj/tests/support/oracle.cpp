#include "oracle.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace copl::testing {

std::string typeName(Ty t) {
    switch (t) {
    case Ty::Int: return "int";
    case Ty::Long: return "long";
    case Ty::Double: return "double";
    case Ty::Str: return "String";
    }
    return "?";
}

Ty typeOf(const OracleValue& v) { return static_cast<Ty>(v.index()); }

bool assignable(Ty from, Ty to) {
    if (from == Ty::Str || to == Ty::Str) return from == to;
    return static_cast<int>(from) <= static_cast<int>(to);
}

OracleValue widen(const OracleValue& v, Ty to) {
    switch (to) {
    case Ty::Int: return std::get<std::int32_t>(v);
    case Ty::Long:
        if (auto* i = std::get_if<std::int32_t>(&v)) return std::int64_t{*i};
        return std::get<std::int64_t>(v);
    case Ty::Double:
        if (auto* i = std::get_if<std::int32_t>(&v)) return double(*i);
        if (auto* l = std::get_if<std::int64_t>(&v)) return double(*l);
        return std::get<double>(v);
    case Ty::Str: return std::get<std::string>(v);
    }
    throw std::logic_error("bad type");
}

namespace {

Ty wider(const OracleValue& a, const OracleValue& b) {
    return static_cast<Ty>(std::max(a.index(), b.index()));
}

OracleValue combine(const OracleValue& a, const OracleValue& b, int sign) {
    Ty t = wider(a, b);
    OracleValue x = widen(a, t);
    OracleValue y = widen(b, t);
    switch (t) {
    case Ty::Int: {
        // 32-bit two's complement wraparound
        std::int64_t r = std::int64_t{std::get<std::int32_t>(x)} + sign * std::int64_t{std::get<std::int32_t>(y)};
        std::uint32_t bits = static_cast<std::uint32_t>(r & 0xffffffff);
        return static_cast<std::int32_t>(bits);
    }
    case Ty::Long: {
        std::uint64_t ux = static_cast<std::uint64_t>(std::get<std::int64_t>(x));
        std::uint64_t uy = static_cast<std::uint64_t>(std::get<std::int64_t>(y));
        return static_cast<std::int64_t>(sign > 0 ? ux + uy : ux - uy);
    }
    case Ty::Double: return sign > 0 ? std::get<double>(x) + std::get<double>(y) : std::get<double>(x) - std::get<double>(y);
    case Ty::Str:
        if (sign < 0) throw std::logic_error("string subtraction");
        return std::get<std::string>(x) + std::get<std::string>(y);
    }
    throw std::logic_error("bad type");
}

double asDouble(const OracleValue& v) { return std::get<double>(widen(v, Ty::Double)); }

} // namespace

OracleValue add(const OracleValue& a, const OracleValue& b) { return combine(a, b, 1); }
OracleValue subtract(const OracleValue& a, const OracleValue& b) { return combine(a, b, -1); }

bool lessThan(const OracleValue& a, const OracleValue& b) {
    Ty t = wider(a, b);
    if (t == Ty::Double) return asDouble(a) < asDouble(b);
    return std::get<std::int64_t>(widen(a, Ty::Long)) < std::get<std::int64_t>(widen(b, Ty::Long));
}

bool equal(const OracleValue& a, const OracleValue& b) {
    Ty t = wider(a, b);
    if (t == Ty::Str) return a == b;
    if (t == Ty::Double) return asDouble(a) == asDouble(b);
    return std::get<std::int64_t>(widen(a, Ty::Long)) == std::get<std::int64_t>(widen(b, Ty::Long));
}

std::string render(const OracleValue& v) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    if (auto* i = std::get_if<std::int32_t>(&v)) return std::to_string(*i);
    if (auto* l = std::get_if<std::int64_t>(&v)) return std::to_string(*l);
    double d = std::get<double>(v);
    if (std::floor(d) == d && std::fabs(d) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", d);
        return std::string(buf) == "-0" ? "0" : buf;
    }
    // Shortest %g form that reads back exactly; matches the interpreter for
    // the magnitudes the generators produce.
    char buf[40];
    for (int p = 1; p <= 17; ++p) {
        std::snprintf(buf, sizeof buf, "%.*g", p, d);
        if (std::strtod(buf, nullptr) == d) break;
    }
    return buf;
}

std::string literal(const OracleValue& v) {
    if (auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
    std::string text = render(v);
    if (std::holds_alternative<double>(v) && text.find_first_of(".e") == std::string::npos) text += ".0";
    return text;
}

std::string describe(const OracleValue& v) { return typeName(typeOf(v)) + " " + literal(v); }

runtime::Value toValue(const OracleValue& v) {
    return std::visit([](const auto& x) { return runtime::Value(x); }, v);
}

bool sameValue(const runtime::Value& actual, const OracleValue& expected) {
    if (auto* i = std::get_if<std::int32_t>(&expected)) return actual.is<std::int32_t>() && actual.as<std::int32_t>() == *i;
    if (auto* l = std::get_if<std::int64_t>(&expected)) return actual.is<std::int64_t>() && actual.as<std::int64_t>() == *l;
    if (auto* d = std::get_if<double>(&expected)) return actual.is<double>() && actual.as<double>() == *d;
    return actual.is<std::string>() && actual.as<std::string>() == std::get<std::string>(expected);
}

// ---- rendering ------------------------------------------------------------

namespace {

std::string className(int c) { return "C" + std::to_string(c); }
std::string methodName(int m) { return "m" + std::to_string(m); }

std::string renderArgs(const std::vector<MExpr>& args, std::size_t count, bool objectArg);

std::string renderExpr(const MExpr& e) {
    using K = MExpr::Kind;
    switch (e.kind) {
    case K::Literal: return literal(e.value);
    case K::Field: return "f" + std::to_string(e.index);
    case K::Param: return "p" + std::to_string(e.index);
    case K::Local: return "l" + std::to_string(e.index);
    case K::Add: return "(" + renderExpr(e.kids[0]) + " + " + renderExpr(e.kids[1]) + ")";
    case K::Sub: return "(" + renderExpr(e.kids[0]) + " - " + renderExpr(e.kids[1]) + ")";
    case K::SelfCall: return methodName(e.index) + renderArgs(e.kids, e.kids.size(), e.passObject);
    case K::ObjCall: return "o." + methodName(e.index) + renderArgs(e.kids, e.kids.size(), false);
    }
    return "";
}

std::string renderArgs(const std::vector<MExpr>& args, std::size_t count, bool objectArg) {
    std::string s = "(";
    for (std::size_t i = 0; i < count; ++i) {
        if (i) s += ", ";
        s += renderExpr(args[i]);
    }
    if (objectArg) s += count ? ", o" : "o";
    return s + ")";
}

void renderStmt(std::ostringstream& out, const MStmt& s, const std::string& indent) {
    using K = MStmt::Kind;
    switch (s.kind) {
    case K::Local:
        out << indent << typeName(s.type) << " l" << s.index << " = " << renderExpr(s.expr) << ";\n";
        break;
    case K::Assign: out << indent << "f" << s.index << " = " << renderExpr(s.expr) << ";\n"; break;
    case K::AddAssign: out << indent << "f" << s.index << " += " << renderExpr(s.expr) << ";\n"; break;
    case K::Print: out << indent << "print(" << renderExpr(s.expr) << ");\n"; break;
    case K::If:
        out << indent << "if (" << renderExpr(s.lhs) << " " << s.cmp << " " << renderExpr(s.rhs) << ") {\n";
        for (const auto& t : s.thenBranch) renderStmt(out, t, indent + "    ");
        out << indent << "} else {\n";
        for (const auto& t : s.elseBranch) renderStmt(out, t, indent + "    ");
        out << indent << "}\n";
        break;
    }
}

} // namespace

std::string renderSource(const OopModel& m) {
    std::ostringstream out;
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        const MClass& cls = m.classes[c];
        out << "class " << className(static_cast<int>(c)) << " {\n";
        for (std::size_t f = 0; f < cls.fields.size(); ++f)
            out << "    " << typeName(typeOf(cls.fields[f])) << " f" << f << " = " << literal(cls.fields[f]) << ";\n";
        for (std::size_t i = 0; i < cls.methods.size(); ++i) {
            const MMethod& mm = cls.methods[i];
            out << "    " << typeName(mm.result) << " " << methodName(static_cast<int>(i)) << "(";
            for (std::size_t p = 0; p < mm.params.size(); ++p)
                out << (p ? ", " : "") << typeName(mm.params[p]) << " p" << p;
            if (mm.objectParam >= 0) out << (mm.params.empty() ? "" : ", ") << className(mm.objectParam) << " o";
            out << ") {\n";
            for (const auto& s : mm.body) renderStmt(out, s, "        ");
            out << "        return " << renderExpr(mm.returned) << ";\n    }\n";
        }
        out << "}\n\n";
    }
    out << "class Main {\n    void main() {\n";
    for (std::size_t c = 0; c < m.classes.size(); ++c)
        out << "        " << className(static_cast<int>(c)) << " o" << c << " = new " << className(static_cast<int>(c))
            << "();\n";
    for (const auto& call : m.calls) {
        const MMethod& mm = m.classes[call.cls].methods[call.method];
        out << "        print(o" << call.cls << "." << methodName(call.method) << "(";
        for (std::size_t a = 0; a < call.args.size(); ++a) out << (a ? ", " : "") << literal(call.args[a]);
        if (mm.objectParam >= 0) out << (call.args.empty() ? "" : ", ") << "o" << mm.objectParam;
        out << "));\n        print(\"\\n\");\n";
    }
    out << "    }\n}\n";
    return out.str();
}

// ---- evaluation -----------------------------------------------------------

OopOracle::OopOracle(const OopModel& m) : model_(m) {}

int OopOracle::instantiate(int cls) {
    objects_.emplace_back(cls, model_.classes[cls].fields);
    return static_cast<int>(objects_.size() - 1);
}

std::string OopOracle::runMain() {
    std::vector<int> instances;
    for (std::size_t c = 0; c < model_.classes.size(); ++c) instances.push_back(instantiate(static_cast<int>(c)));
    for (const auto& call : model_.calls) {
        const MMethod& mm = model_.classes[call.cls].methods[call.method];
        int objectArg = mm.objectParam >= 0 ? instances[mm.objectParam] : -1;
        OracleValue r = this->call(instances[call.cls], call.method, call.args, objectArg);
        out_ += render(r);
        out_ += "\n";
    }
    return out_;
}

OracleValue OopOracle::callFresh(const MCall& c) {
    const MMethod& mm = model_.classes[c.cls].methods[c.method];
    int self = instantiate(c.cls);
    int objectArg = mm.objectParam >= 0 ? instantiate(mm.objectParam) : -1;
    return call(self, c.method, c.args, objectArg);
}

OracleValue OopOracle::call(int object, int method, std::vector<OracleValue> args, int objectArg) {
    int cls = objects_[object].first;
    const MMethod& mm = model_.classes[cls].methods[method];
    for (std::size_t i = 0; i < args.size(); ++i) args[i] = widen(args[i], mm.params[i]);
    Frame f{object, cls, &mm, std::move(args), objectArg, {}};
    for (const auto& s : mm.body) exec(f, s);
    return widen(eval(f, mm.returned), mm.result);
}

OracleValue OopOracle::eval(Frame& f, const MExpr& e) {
    using K = MExpr::Kind;
    switch (e.kind) {
    case K::Literal: return e.value;
    case K::Field: return objects_[f.object].second[e.index];
    case K::Param: return f.params[e.index];
    case K::Local: return f.locals[e.index];
    case K::Add: {
        OracleValue a = eval(f, e.kids[0]);
        return add(a, eval(f, e.kids[1]));
    }
    case K::Sub: {
        OracleValue a = eval(f, e.kids[0]);
        return subtract(a, eval(f, e.kids[1]));
    }
    case K::SelfCall:
    case K::ObjCall: {
        std::vector<OracleValue> args;
        for (const auto& k : e.kids) args.push_back(eval(f, k));
        int target = e.kind == K::SelfCall ? f.object : f.objectArg;
        int targetCls = objects_[target].first;
        const MMethod& callee = model_.classes[targetCls].methods[e.index];
        int objectArg = callee.objectParam >= 0 ? f.objectArg : -1;
        return call(target, e.index, std::move(args), objectArg);
    }
    }
    throw std::logic_error("bad expression");
}

void OopOracle::exec(Frame& f, const MStmt& s) {
    using K = MStmt::Kind;
    switch (s.kind) {
    case K::Local: {
        OracleValue v = widen(eval(f, s.expr), s.type);
        if (static_cast<std::size_t>(s.index) != f.locals.size()) throw std::logic_error("local order");
        f.locals.push_back(std::move(v));
        break;
    }
    case K::Assign: {
        Ty t = typeOf(objects_[f.object].second[s.index]);
        OracleValue v = eval(f, s.expr);
        objects_[f.object].second[s.index] = widen(v, t);
        break;
    }
    case K::AddAssign: {
        OracleValue old = objects_[f.object].second[s.index];
        OracleValue v = eval(f, s.expr);
        objects_[f.object].second[s.index] = widen(add(old, v), typeOf(old));
        break;
    }
    case K::Print: out_ += render(eval(f, s.expr)); break;
    case K::If: {
        OracleValue a = eval(f, s.lhs);
        OracleValue b = eval(f, s.rhs);
        bool c = s.cmp == "<"    ? lessThan(a, b)
                 : s.cmp == ">"  ? lessThan(b, a)
                 : s.cmp == "==" ? equal(a, b)
                                 : !equal(a, b);
        for (const auto& t : c ? s.thenBranch : s.elseBranch) exec(f, t);
        break;
    }
    }
}

} // namespace copl::testing
