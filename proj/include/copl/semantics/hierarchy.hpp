#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copl/frontend/ast.hpp"

namespace copl::semantics {

struct HierarchyNode {
    std::string name;
    const ast::Declaration* decl = nullptr;
    // Empty when the declaration hangs directly under TOP.
    std::optional<std::string> parent;
    bool isConcept = false;
};

// The `in`-inclusion tree. Every declaration has exactly one parent: a
// declared concept, or the implicit TOP.
class ConceptHierarchy {
public:
    const HierarchyNode* find(std::string_view name) const;
    // Throws std::out_of_range for unknown names.
    const HierarchyNode& at(std::string_view name) const;
    // Declaration order.
    const std::vector<HierarchyNode>& nodes() const { return nodes_; }
    // Parent chain, nearest first, excluding TOP.
    std::vector<std::string> ancestors(std::string_view name) const;

private:
    friend ConceptHierarchy buildHierarchy(const ast::ProgramAst& program);

    std::vector<HierarchyNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Throws CompileError listing duplicate names, unknown parents, class
// parents and inclusion cycles. The hierarchy points into `program`, which
// must outlive it.
ConceptHierarchy buildHierarchy(const ast::ProgramAst& program);

struct FieldLayout {
    std::string name;
    std::string type;

    friend bool operator==(const FieldLayout&, const FieldLayout&) = default;
};

struct SchemaSegment {
    std::string conceptName;
    std::vector<FieldLayout> fields;

    friend bool operator==(const SchemaSegment&, const SchemaSegment&) = default;
};

// Ordered ancestor reference layouts for one type, high segment first. An
// empty schema means instances are addressed by root handles.
struct ReferenceSchema {
    std::vector<SchemaSegment> segments;

    bool empty() const { return segments.empty(); }
    std::size_t size() const { return segments.size(); }
    std::size_t flatSize() const;
    std::vector<FieldLayout> flattened() const;

    friend bool operator==(const ReferenceSchema&, const ReferenceSchema&) = default;
};

// A concept contributes a segment to its descendants when its reference
// class declares at least one member.
bool contributesSegment(const HierarchyNode& node);

// Throws std::invalid_argument for an unknown type name.
ReferenceSchema computeReferenceSchema(std::string_view typeName, const ConceptHierarchy& h);

} // namespace copl::semantics
