#include "copl/runtime/value.hpp"

#include <charconv>
#include <cmath>

namespace copl::runtime {

bool operator==(const Value& a, const Value& b) {
    if (a.data_.index() != b.data_.index()) return false;
    if (const auto* ra = a.getIf<ReferencePtr>()) {
        const auto& rb = b.as<ReferencePtr>();
        if (!*ra || !rb) return *ra == rb;
        return (*ra)->targetType == rb->targetType && sameSegments(**ra, *rb);
    }
    return a.data_ == b.data_;
}

Slot* findSlot(Slots& slots, const std::string& name) {
    for (auto& s : slots)
        if (s.name == name) return &s;
    return nullptr;
}

const Slot* findSlot(const Slots& slots, const std::string& name) {
    for (const auto& s : slots)
        if (s.name == name) return &s;
    return nullptr;
}

bool sameSegments(const ComplexReference& a, const ComplexReference& b) {
    if (a.segments.size() != b.segments.size()) return false;
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        const auto& x = a.segments[i];
        const auto& y = b.segments[i];
        if (x.conceptName != y.conceptName || x.fields.size() != y.fields.size()) return false;
        for (std::size_t f = 0; f < x.fields.size(); ++f)
            if (x.fields[f].name != y.fields[f].name || !(x.fields[f].value == y.fields[f].value)) return false;
    }
    return true;
}

std::string kindName(const Value& v) {
    struct {
        std::string operator()(VoidValue) const { return "void"; }
        std::string operator()(Nil) const { return "nil"; }
        std::string operator()(bool) const { return "boolean"; }
        std::string operator()(std::int32_t) const { return "int"; }
        std::string operator()(std::int64_t) const { return "long"; }
        std::string operator()(double) const { return "double"; }
        std::string operator()(const std::string&) const { return "String"; }
        std::string operator()(RootHandle) const { return "Root"; }
        std::string operator()(StorageHandle) const { return "Storage"; }
        std::string operator()(MapHandle) const { return "Map"; }
        std::string operator()(const ReferencePtr& r) const { return r ? r->targetType + " reference" : "reference"; }
    } visitor;
    return std::visit(visitor, v.data());
}

std::string renderDouble(double d) {
    if (std::isfinite(d) && d == std::trunc(d) && std::fabs(d) < 1e15)
        return std::to_string(static_cast<std::int64_t>(d));
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, end);
}

std::string renderNumber(const Value& v) {
    if (const auto* i = v.getIf<std::int32_t>()) return std::to_string(*i);
    if (const auto* l = v.getIf<std::int64_t>()) return std::to_string(*l);
    if (const auto* d = v.getIf<double>()) return renderDouble(*d);
    throw RuntimeError("cannot render " + kindName(v) + " as a number");
}

} // namespace copl::runtime
