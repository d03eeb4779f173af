#pragma once

#include <string>

namespace copl::semantics {

// Static type of an expression or declared slot.
struct Type {
    enum class Kind { Void, Int, Long, Double, String, Bool, Root, Storage, Map, Object, Dynamic };

    Kind kind = Kind::Void;
    // Declared type name, for Object.
    std::string name;
    // Object only: the value is a root handle rather than a complex reference.
    // Holds for root-represented types and for `new T(...)` / `context`.
    bool direct = false;

    static Type of(Kind k) { return Type{k, {}, false}; }
    static Type object(std::string name, bool direct) { return Type{Kind::Object, std::move(name), direct}; }

    bool isNumeric() const { return kind == Kind::Int || kind == Kind::Long || kind == Kind::Double; }
    bool is(Kind k) const { return kind == k; }

    friend bool operator==(const Type&, const Type&) = default;
};

std::string toString(const Type& t);

// int widens to long and double, long to double; direct handles convert to
// Root; Dynamic converts both ways (checked at run time).
bool isAssignable(const Type& from, const Type& to);

// Result type of arithmetic on two numeric operands.
Type promote(const Type& a, const Type& b);

} // namespace copl::semantics
