#pragma once

#include <deque>
#include <optional>
#include <string>

#include "copl/runtime/value.hpp"

namespace copl::runtime {

struct RuntimeObject {
    std::string typeName;
    // Declared instance fields only; statics live on the declaration.
    Slots fields;
    // Context the object was created in, for tracing.
    std::optional<RootHandle> parentContext;
};

// The root space: an append-only heap addressed by RootHandle. References
// to entries stay valid while new entries are appended.
class ObjectTable {
public:
    RootHandle add(RuntimeObject obj);
    RuntimeObject& at(RootHandle h);
    const RuntimeObject& at(RootHandle h) const;
    bool contains(RootHandle h) const { return h.index < entries_.size(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::deque<RuntimeObject> entries_;
};

} // namespace copl::runtime
