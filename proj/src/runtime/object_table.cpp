#include "copl/runtime/object_table.hpp"

namespace copl::runtime {

RootHandle ObjectTable::add(RuntimeObject obj) {
    entries_.push_back(std::move(obj));
    return RootHandle{static_cast<std::uint32_t>(entries_.size() - 1)};
}

RuntimeObject& ObjectTable::at(RootHandle h) {
    if (!contains(h)) throw RuntimeError("dangling root handle #" + std::to_string(h.index));
    return entries_[h.index];
}

const RuntimeObject& ObjectTable::at(RootHandle h) const {
    if (!contains(h)) throw RuntimeError("dangling root handle #" + std::to_string(h.index));
    return entries_[h.index];
}

} // namespace copl::runtime
