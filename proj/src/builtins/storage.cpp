#include "copl/builtins/storage.hpp"

namespace copl::builtins {

using runtime::RootHandle;
using runtime::RuntimeError;
using runtime::Value;

namespace {

RootHandle requireHandle(const Value& v, const char* op) {
    if (const auto* h = v.getIf<RootHandle>()) return *h;
    if (v.isNil()) throw RuntimeError(std::string(op) + " of a nil reference");
    throw RuntimeError(std::string(op) + " needs a root handle, got " + runtime::kindName(v));
}

} // namespace

void StorageInstance::store(std::int64_t key, const Value& object, const runtime::ObjectTable& objects) {
    RootHandle h = requireHandle(object, "Storage.store");
    const auto& obj = objects.at(h);
    records_[key] = Snapshot{obj.typeName, obj.fields};
    if (auto it = live_.find(key); it != live_.end() && !(it->second == h)) live_.erase(it);
}

RootHandle StorageInstance::load(std::int64_t key, runtime::ObjectTable& objects, bool cacheLive) {
    auto rec = records_.find(key);
    if (rec == records_.end())
        throw RuntimeError("unresolved reference segment: Storage key " + std::to_string(key));
    if (cacheLive) {
        if (auto it = live_.find(key); it != live_.end()) return it->second;
    }
    RootHandle h = objects.add(runtime::RuntimeObject{rec->second.typeName, rec->second.fields, std::nullopt});
    if (cacheLive) live_[key] = h;
    return h;
}

void StorageInstance::open() { ++openCount_; }

void StorageInstance::close() {
    if (openCount_ == 0) throw RuntimeError("close of " + label_ + " which is not open");
    --openCount_;
}

const Snapshot* StorageInstance::record(std::int64_t key) const {
    auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

void MapInstance::put(const std::string& key, const Value& object) {
    entries_[key] = requireHandle(object, "Map.put");
}

RootHandle MapInstance::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw RuntimeError("unresolved reference segment: Map key " + key);
    return it->second;
}

std::string printText(const Value& v) {
    if (const auto* s = v.getIf<std::string>()) return *s;
    if (v.isNumeric()) return runtime::renderNumber(v);
    throw RuntimeError("print of a " + runtime::kindName(v) + " value");
}

} // namespace copl::builtins
