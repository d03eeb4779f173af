#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copl/frontend/ast.hpp"
#include "copl/semantics/hierarchy.hpp"
#include "copl/semantics/types.hpp"

namespace copl::semantics {

// How a bare or qualified name was resolved.
enum class NameKind {
    Local,        // local variable or parameter
    SegmentField, // reference field of the segment a reference method runs on
    Field,        // instance field of the enclosing object
    StaticField,  // static field (own, `Decl.f`, or through an instance)
    Declaration,  // a type name used as the qualifier in `Decl.f`
};

enum class CallKind {
    Print,         // built-in print(...)
    OwnMethod,     // bare call to a method of the enclosing body
    Storage,       // built-in Storage method
    Map,           // built-in Map method
    ChainContinue, // `r.continue()` on a Root
    Direct,        // method on a root handle, no resolution
    Invoke,        // business method through a complex reference
    Dual,          // reference-class method of the innermost segment's concept
    Dynamic,       // receiver is untyped; dispatched on the runtime value
};

struct ExprInfo {
    Type type;
    NameKind nameKind = NameKind::Local;
    CallKind callKind = CallKind::Dynamic;
    // Declaration owning a static field, or the concept providing a dual.
    std::string owner = {};
};

struct DeclInfo {
    std::string name;
    const ast::Declaration* decl = nullptr;
    bool isConcept = false;
    std::optional<std::string> parent;
    const ast::ClassBody* objectClass = nullptr;
    // Null for plain classes.
    const ast::ClassBody* referenceClass = nullptr;
    ReferenceSchema schema;
    // Concept whose own instances are root-represented; it gets one
    // auto-created instance that serves as the well-known context.
    bool wellKnown = false;
    // Declaration order.
    std::size_t order = 0;

    std::vector<const ast::FieldDecl*> instanceFields() const;
};

class CheckedProgram {
public:
    const ast::ProgramAst& ast() const { return *ast_; }
    const std::shared_ptr<const ast::ProgramAst>& astPtr() const { return ast_; }
    const ConceptHierarchy& hierarchy() const { return hierarchy_; }
    const std::vector<DeclInfo>& decls() const { return decls_; }
    const DeclInfo* findDecl(std::string_view name) const;
    const DeclInfo& decl(std::string_view name) const;
    // Throws std::out_of_range for expressions outside the checked program.
    const ExprInfo& info(const ast::Expr& e) const;
    const DeclInfo& entryClass() const { return decls_[entryIndex_]; }
    const ast::MethodDecl& entryMethod() const { return *entryMethod_; }

private:
    friend class Checker;

    std::shared_ptr<const ast::ProgramAst> ast_;
    ConceptHierarchy hierarchy_;
    std::vector<DeclInfo> decls_;
    std::unordered_map<std::string, std::size_t> declIndex_;
    std::unordered_map<const ast::Expr*, ExprInfo> exprInfo_;
    std::size_t entryIndex_ = 0;
    const ast::MethodDecl* entryMethod_ = nullptr;
};

// Validates every body against the hierarchy. Collects all diagnostics and
// throws CompileError if there is at least one.
CheckedProgram check(std::shared_ptr<const ast::ProgramAst> program, ConceptHierarchy hierarchy);

// buildHierarchy + check.
CheckedProgram analyze(std::shared_ptr<const ast::ProgramAst> program);

} // namespace copl::semantics
