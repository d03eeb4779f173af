#include "copl/semantics/types.hpp"

namespace copl::semantics {

std::string toString(const Type& t) {
    using K = Type::Kind;
    switch (t.kind) {
    case K::Void: return "void";
    case K::Int: return "int";
    case K::Long: return "long";
    case K::Double: return "double";
    case K::String: return "String";
    case K::Bool: return "boolean";
    case K::Root: return "Root";
    case K::Storage: return "Storage";
    case K::Map: return "Map";
    case K::Dynamic: return "dynamic";
    case K::Object: return t.direct ? t.name + " (root handle)" : t.name;
    }
    return "?";
}

namespace {

int numericRank(Type::Kind k) {
    switch (k) {
    case Type::Kind::Int: return 1;
    case Type::Kind::Long: return 2;
    case Type::Kind::Double: return 3;
    default: return 0;
    }
}

} // namespace

bool isAssignable(const Type& from, const Type& to) {
    using K = Type::Kind;
    if (from.is(K::Dynamic) || to.is(K::Dynamic)) return !from.is(K::Void) && !to.is(K::Void);
    if (from == to) return !from.is(K::Void);
    if (from.isNumeric() && to.isNumeric()) return numericRank(from.kind) <= numericRank(to.kind);
    if (to.is(K::Root)) return from.is(K::Object) && from.direct;
    return false;
}

Type promote(const Type& a, const Type& b) {
    return numericRank(a.kind) >= numericRank(b.kind) ? Type::of(a.kind) : Type::of(b.kind);
}

} // namespace copl::semantics
