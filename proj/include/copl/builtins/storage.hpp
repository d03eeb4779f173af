#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "copl/runtime/object_table.hpp"

namespace copl::builtins {

struct Snapshot {
    std::string typeName;
    runtime::Slots fields;
};

// In-memory stand-in for a persistent store keyed by long primary keys.
// `store` copies the object's field values; `load` materializes a copy as a
// live object. While `cacheLive` loads are requested (inside a resolution),
// repeated loads of one key return the same live object so that
// load -> mutate -> store stays coherent.
class StorageInstance {
public:
    explicit StorageInstance(std::string label) : label_(std::move(label)) {}

    void store(std::int64_t key, const runtime::Value& object, const runtime::ObjectTable& objects);
    runtime::RootHandle load(std::int64_t key, runtime::ObjectTable& objects, bool cacheLive);
    void open();
    void close();
    // Forgets live objects handed out by cached loads.
    void releaseLive() { live_.clear(); }

    const std::string& label() const { return label_; }
    int openCount() const { return openCount_; }
    const Snapshot* record(std::int64_t key) const;
    std::size_t size() const { return records_.size(); }

private:
    std::string label_;
    std::map<std::int64_t, Snapshot> records_;
    std::map<std::int64_t, runtime::RootHandle> live_;
    int openCount_ = 0;
};

class MapInstance {
public:
    void put(const std::string& key, const runtime::Value& object);
    runtime::RootHandle get(const std::string& key) const;
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }

private:
    std::map<std::string, runtime::RootHandle> entries_;
};

// Text written by print(v): strings verbatim, numbers via renderNumber.
std::string printText(const runtime::Value& v);

} // namespace copl::builtins
