#include "copl/diagnostics.hpp"

namespace copl {

namespace {

std::string joinMessages(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out += "; ";
        out += std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " + d.message;
    }
    return out;
}

} // namespace

std::string formatDiagnostic(const std::string& file, const Diagnostic& d) {
    return file + ":" + std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) +
           ": error: " + d.message;
}

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(joinMessages(diags)), diags_(std::move(diags)) {}

CompileError::CompileError(SourceLoc loc, std::string message)
    : CompileError(std::vector<Diagnostic>{Diagnostic{loc, std::move(message)}}) {}

} // namespace copl
