#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "copl/diagnostics.hpp"

namespace copl::ast {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

struct TypeName {
    std::string name;
    SourceLoc loc;
};

// ---- expressions ----------------------------------------------------------

struct IntLiteral {
    std::int64_t value = 0;
};

struct FloatLiteral {
    double value = 0.0;
};

struct StringLiteral {
    std::string value;
};

struct NameExpr {
    std::string name;
};

// The `context` keyword.
struct ContextExpr {};

struct FieldExpr {
    ExprPtr object;
    std::string field;
};

// `recv.method(args)` or, with no receiver, a bare call `method(args)`.
struct CallExpr {
    ExprPtr receiver;
    std::string method;
    std::vector<ExprPtr> args;
};

struct NewExpr {
    TypeName type;
    std::vector<ExprPtr> args;
};

// `Type@(v1, ..., vk)`: builds a complex reference, high segment first.
struct RefExpr {
    TypeName type;
    std::vector<ExprPtr> args;
};

enum class AssignOp { Assign, AddAssign, SubAssign };

struct AssignExpr {
    AssignOp op = AssignOp::Assign;
    ExprPtr target;
    ExprPtr value;
};

struct IncDecExpr {
    bool increment = true;
    bool prefix = false;
    ExprPtr target;
};

enum class BinaryOp { Add, Sub, Eq, Ne, Lt, Gt };

struct BinaryExpr {
    BinaryOp op = BinaryOp::Add;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct NegateExpr {
    ExprPtr operand;
};

struct Expr {
    SourceLoc loc;
    std::variant<IntLiteral, FloatLiteral, StringLiteral, NameExpr, ContextExpr, FieldExpr, CallExpr,
                 NewExpr, RefExpr, AssignExpr, IncDecExpr, BinaryExpr, NegateExpr>
        node;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
};

// ---- statements -----------------------------------------------------------

struct VarDeclStmt {
    TypeName type;
    std::string name;
    ExprPtr init;
};

struct ExprStmt {
    ExprPtr expr;
};

struct IfStmt {
    ExprPtr cond;
    StmtPtr thenBranch;
    StmtPtr elseBranch;
};

struct ReturnStmt {
    ExprPtr value;
};

struct BlockStmt {
    std::vector<StmtPtr> statements;
};

struct EmptyStmt {};

struct Stmt {
    SourceLoc loc;
    std::variant<VarDeclStmt, ExprStmt, IfStmt, ReturnStmt, BlockStmt, EmptyStmt> node;
};

// ---- declarations ---------------------------------------------------------

enum class FieldInitKind {
    None,
    Value,  // `= expr`
    Create, // `Type name.create()`: fresh built-in instance
};

struct FieldDecl {
    SourceLoc loc;
    bool isStatic = false;
    TypeName type;
    std::string name;
    FieldInitKind initKind = FieldInitKind::None;
    ExprPtr init;
};

struct Param {
    TypeName type;
    std::string name;
    SourceLoc loc;
};

struct MethodDecl {
    SourceLoc loc;
    TypeName returnType;
    std::string name;
    std::vector<Param> params;
    BlockStmt body;
};

struct ClassBody {
    SourceLoc loc;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;

    const FieldDecl* findField(const std::string& name) const;
    const MethodDecl* findMethod(const std::string& name) const;
    bool empty() const { return fields.empty() && methods.empty(); }
};

struct ConceptDecl {
    SourceLoc loc;
    std::string name;
    std::optional<std::string> parent;
    SourceLoc parentLoc;
    ClassBody objectClass;
    ClassBody referenceClass;
};

// A concept without a reference class.
struct ClassDecl {
    SourceLoc loc;
    std::string name;
    std::optional<std::string> parent;
    SourceLoc parentLoc;
    ClassBody body;
};

using Declaration = std::variant<ConceptDecl, ClassDecl>;

struct ProgramAst {
    std::vector<Declaration> declarations;
};

const std::string& declName(const Declaration& d);
const std::optional<std::string>& declParent(const Declaration& d);
SourceLoc declLoc(const Declaration& d);
const ClassBody& objectClassOf(const Declaration& d);
// Null for plain classes.
const ClassBody* referenceClassOf(const Declaration& d);

// Compares two trees ignoring source locations.
bool structurallyEqual(const ProgramAst& a, const ProgramAst& b);

} // namespace copl::ast
