#include "copl/semantics/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>

namespace copl::semantics {

const HierarchyNode* ConceptHierarchy::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &nodes_[it->second];
}

const HierarchyNode& ConceptHierarchy::at(std::string_view name) const {
    if (const auto* n = find(name)) return *n;
    throw std::out_of_range("unknown declaration '" + std::string(name) + "'");
}

std::vector<std::string> ConceptHierarchy::ancestors(std::string_view name) const {
    std::vector<std::string> out;
    const HierarchyNode* n = &at(name);
    while (n->parent) {
        out.push_back(*n->parent);
        n = &at(*n->parent);
    }
    return out;
}

ConceptHierarchy buildHierarchy(const ast::ProgramAst& program) {
    ConceptHierarchy h;
    std::vector<Diagnostic> diags;

    for (const auto& d : program.declarations) {
        const std::string& name = ast::declName(d);
        if (h.index_.count(name)) {
            diags.push_back({ast::declLoc(d), "duplicate declaration '" + name + "'"});
            continue;
        }
        h.index_.emplace(name, h.nodes_.size());
        h.nodes_.push_back(HierarchyNode{name, &d, ast::declParent(d), std::holds_alternative<ast::ConceptDecl>(d)});
    }

    auto parentLoc = [](const ast::Declaration& d) {
        return std::visit([](const auto& x) { return x.parentLoc; }, d);
    };

    bool parentsOk = true;
    for (const auto& n : h.nodes_) {
        if (!n.parent) continue;
        const HierarchyNode* p = h.find(*n.parent);
        if (!p) {
            diags.push_back({parentLoc(*n.decl), "unknown parent '" + *n.parent + "' of '" + n.name + "'"});
            parentsOk = false;
        } else if (!p->isConcept) {
            diags.push_back({parentLoc(*n.decl),
                             "parent '" + *n.parent + "' of '" + n.name + "' is a class, not a concept"});
            parentsOk = false;
        }
    }

    if (parentsOk) {
        // 0 = unvisited, 1 = on the current path, 2 = known acyclic.
        std::vector<int> state(h.nodes_.size(), 0);
        for (std::size_t start = 0; start < h.nodes_.size(); ++start) {
            std::vector<std::size_t> path;
            std::size_t cur = start;
            while (state[cur] == 0) {
                state[cur] = 1;
                path.push_back(cur);
                const auto& parent = h.nodes_[cur].parent;
                if (!parent) break;
                cur = h.index_.at(*parent);
            }
            if (state[cur] == 1 && h.nodes_[cur].parent) {
                // Report the cycle starting from its first declared member.
                auto first = path.begin();
                while (*first != cur) ++first;
                std::size_t lowest = *std::min_element(first, path.end());
                std::string msg = "inclusion cycle: ";
                std::size_t i = lowest;
                do {
                    msg += h.nodes_[i].name + " -> ";
                    i = h.index_.at(*h.nodes_[i].parent);
                } while (i != lowest);
                msg += h.nodes_[lowest].name;
                diags.push_back({ast::declLoc(*h.nodes_[lowest].decl), msg});
            }
            for (auto i : path) state[i] = 2;
        }
    }

    if (!diags.empty()) throw CompileError(std::move(diags));
    return h;
}

std::size_t ReferenceSchema::flatSize() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.fields.size();
    return n;
}

std::vector<FieldLayout> ReferenceSchema::flattened() const {
    std::vector<FieldLayout> out;
    for (const auto& s : segments) out.insert(out.end(), s.fields.begin(), s.fields.end());
    return out;
}

bool contributesSegment(const HierarchyNode& node) {
    const auto* ref = ast::referenceClassOf(*node.decl);
    return ref && !ref->empty();
}

ReferenceSchema computeReferenceSchema(std::string_view typeName, const ConceptHierarchy& h) {
    const HierarchyNode* node = h.find(typeName);
    if (!node) throw std::invalid_argument("unknown type '" + std::string(typeName) + "'");

    ReferenceSchema schema;
    std::vector<std::string> chain = h.ancestors(typeName);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const HierarchyNode& a = h.at(*it);
        if (!contributesSegment(a)) continue;
        SchemaSegment seg{a.name, {}};
        for (const auto& f : ast::referenceClassOf(*a.decl)->fields) seg.fields.push_back({f.name, f.type.name});
        schema.segments.push_back(std::move(seg));
    }
    return schema;
}

} // namespace copl::semantics
