#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "copl/diagnostics.hpp"

namespace copl::runtime {

// Index into the object table. Never reused within one execution.
struct RootHandle {
    std::uint32_t index = 0;
    friend bool operator==(RootHandle, RootHandle) = default;
};

struct StorageHandle {
    std::uint32_t index = 0;
    friend bool operator==(StorageHandle, StorageHandle) = default;
};

struct MapHandle {
    std::uint32_t index = 0;
    friend bool operator==(MapHandle, MapHandle) = default;
};

// Uninitialized Root, reference, Storage or Map slot. Faults on use.
struct Nil {
    friend bool operator==(Nil, Nil) = default;
};

struct VoidValue {
    friend bool operator==(VoidValue, VoidValue) = default;
};

struct ComplexReference;
using ReferencePtr = std::shared_ptr<const ComplexReference>;

class Value {
public:
    using Data = std::variant<VoidValue, Nil, bool, std::int32_t, std::int64_t, double, std::string, RootHandle,
                              StorageHandle, MapHandle, ReferencePtr>;

    Value() = default;
    Value(Data d) : data_(std::move(d)) {}
    Value(const char* s) : data_(std::string(s)) {}

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(data_);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(data_);
    }
    template <class T>
    const T* getIf() const {
        return std::get_if<T>(&data_);
    }

    const Data& data() const { return data_; }
    bool isVoid() const { return is<VoidValue>(); }
    bool isNil() const { return is<Nil>(); }
    bool isNumeric() const { return is<std::int32_t>() || is<std::int64_t>() || is<double>(); }

    // Structural equality; complex references compare segment-wise.
    friend bool operator==(const Value& a, const Value& b);

private:
    Data data_;
};

struct Slot {
    std::string name;
    // Declared type name, used to coerce stored values.
    std::string type;
    Value value;
};

using Slots = std::vector<Slot>;

Slot* findSlot(Slots& slots, const std::string& name);
const Slot* findSlot(const Slots& slots, const std::string& name);

struct SegmentValue {
    std::string conceptName;
    Slots fields;
};

// By-value identifier of an object: one segment per ancestor concept, high
// first. Immutable once built.
struct ComplexReference {
    std::string targetType;
    std::vector<SegmentValue> segments;
};

bool sameSegments(const ComplexReference& a, const ComplexReference& b);

// Human-readable kind, for error messages.
std::string kindName(const Value& v);

// Display form used by print and diagnostics: integers in decimal, doubles
// without a fractional part when integral ("100"), otherwise the shortest
// round-trip form ("2.5").
std::string renderNumber(const Value& v);
std::string renderDouble(double d);

class RuntimeError : public std::runtime_error {
public:
    explicit RuntimeError(const std::string& msg, std::optional<SourceLoc> loc = std::nullopt)
        : std::runtime_error(msg), loc_(loc) {}

    const std::optional<SourceLoc>& loc() const { return loc_; }
    void setLoc(SourceLoc loc) {
        if (!loc_) loc_ = loc;
    }
    bool annotated() const { return annotated_; }
    void markAnnotated() { annotated_ = true; }

private:
    std::optional<SourceLoc> loc_;
    bool annotated_ = false;
};

} // namespace copl::runtime
