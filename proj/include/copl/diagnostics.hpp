#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace copl {

struct SourceLoc {
    int line = 1;
    int column = 1;

    friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
    friend auto operator<=>(const SourceLoc&, const SourceLoc&) = default;
};

struct Diagnostic {
    SourceLoc loc;
    std::string message;
};

// Renders `file:line:column: error: message`.
std::string formatDiagnostic(const std::string& file, const Diagnostic& d);

// Raised by the frontend (exactly one diagnostic) and by semantic analysis
// (one or more).
class CompileError : public std::runtime_error {
public:
    explicit CompileError(std::vector<Diagnostic> diags);
    CompileError(SourceLoc loc, std::string message);

    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

} // namespace copl
