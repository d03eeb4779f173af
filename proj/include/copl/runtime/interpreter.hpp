#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copl/builtins/storage.hpp"
#include "copl/runtime/object_table.hpp"
#include "copl/runtime/value.hpp"
#include "copl/semantics/checker.hpp"

namespace copl::runtime {

struct RunOptions {
    // Statements plus method calls executed before aborting.
    std::uint64_t maxSteps = 1'000'000;
    std::size_t maxCallDepth = 2000;
};

// One pending resolution of a call through a complex reference. Steps
// [0, segmentSteps) run the segments' reference `continue` bodies; step
// `segmentSteps` is the terminal call.
struct ResolutionChain {
    enum class Terminal { Business, Dual };

    ReferencePtr ref;
    std::size_t segmentSteps = 0;
    Terminal terminal = Terminal::Business;
    std::string method;
    std::vector<Value> args;
    // Next step to run; only ever advances.
    std::size_t cursor = 0;
    Value result;
    bool terminalRan = false;
};

// Executes a CheckedProgram. Single-threaded: the object table, chain stack
// and output streams belong to one execution.
class Interpreter {
public:
    Interpreter(const semantics::CheckedProgram& program, std::ostream& out, std::ostream* trace = nullptr,
                RunOptions options = {});
    ~Interpreter();

    Interpreter(const Interpreter&) = delete;
    Interpreter& operator=(const Interpreter&) = delete;

    // Static fields and well-known singletons, in declaration order. Runs
    // once; later calls are no-ops.
    void initialize();
    // initialize(), then instantiate Main and run main() on it directly.
    void runMain();

    RootHandle instantiate(std::string_view typeName, std::optional<RootHandle> context,
                           std::span<const Value> fieldValues = {});
    ReferencePtr constructReference(std::string_view typeName, std::span<const Value> flattened);
    // Business call through a complex reference: runs every segment's
    // `continue` around the target method, or a reference-class dual.
    Value invoke(const ReferencePtr& ref, std::string_view method, std::vector<Value> args);
    // Ordinary call on a root handle, no resolution.
    Value callDirect(RootHandle target, std::string_view method, std::vector<Value> args);

    const ObjectTable& objects() const { return objects_; }
    std::optional<RootHandle> singleton(std::string_view conceptName) const;
    const Value& staticField(std::string_view declName, std::string_view field) const;
    const builtins::StorageInstance& storage(StorageHandle h) const { return storages_.at(h.index); }
    const std::vector<builtins::StorageInstance>& storages() const { return storages_; }
    std::size_t chainDepth() const { return chains_.size(); }
    std::uint64_t steps() const { return steps_; }

private:
    struct Frame;
    class Evaluator;
    friend class Evaluator;

    Value callMethod(const semantics::DeclInfo& decl, const ast::MethodDecl& method, bool inReference,
                     std::optional<RootHandle> self, Value context, const Slots* segment,
                     std::vector<Value> args, std::optional<std::size_t> chain = std::nullopt,
                     std::size_t step = 0);
    void runStep(std::size_t chainIndex, std::size_t step, Value context);
    void chainContinue(const Frame& frame, const Value& target);
    // Call on a value whose kind is only known at run time.
    Value dispatch(const Value& recv, const std::string& method, std::vector<Value> args);
    Value storageCall(StorageHandle h, const std::string& method, const std::vector<Value>& args);
    Value mapCall(MapHandle h, const std::string& method, const std::vector<Value>& args);

    Value coerce(Value v, const std::string& typeName) const;
    Value defaultValue(const std::string& typeName) const;
    Value fieldInitializer(const ast::FieldDecl& f);
    StorageHandle newStorage();
    MapHandle newMap();
    Slots& staticsOf(const std::string& declName);
    Slot& fieldSlot(RootHandle h, const std::string& name);
    void countStep();
    void emitTrace(const std::string& line);

    const semantics::CheckedProgram& program_;
    std::ostream& out_;
    std::ostream* trace_;
    RunOptions options_;

    ObjectTable objects_;
    std::vector<builtins::StorageInstance> storages_;
    std::vector<builtins::MapInstance> maps_;
    std::unordered_map<std::string, Slots> statics_;
    std::unordered_map<std::string, RootHandle> singletons_;
    std::vector<std::unique_ptr<ResolutionChain>> chains_;
    std::uint64_t steps_ = 0;
    std::size_t depth_ = 0;
    bool initialized_ = false;
};

struct RunResult {
    // 0 on success, 1 on a runtime error.
    int exitStatus = 0;
    // Location and text of the aborting runtime error.
    std::optional<SourceLoc> errorLoc;
    std::string error;
};

RunResult runProgram(const semantics::CheckedProgram& program, std::ostream& out, std::ostream* trace = nullptr,
                     RunOptions options = {});

} // namespace copl::runtime
