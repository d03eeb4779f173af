#include "copl/cli/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "copl/diagnostics.hpp"
#include "copl/frontend/lexer.hpp"
#include "copl/frontend/parser.hpp"
#include "copl/frontend/printer.hpp"
#include "copl/runtime/interpreter.hpp"
#include "copl/semantics/checker.hpp"

namespace copl::cli {

namespace {

enum class Mode { Run, Check, Tokens, Ast };

struct RunConfig {
    std::string sourcePath;
    bool traceEnabled = false;
    std::uint64_t maxSteps = 1'000'000;
    Mode mode = Mode::Run;
};

bool readFile(const std::string& path, std::string& text) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return false;
    text = buf.str();
    return true;
}

std::string quoted(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': r += "\\n"; break;
        case '\t': r += "\\t"; break;
        case '"': r += "\\\""; break;
        case '\\': r += "\\\\"; break;
        default: r += c;
        }
    }
    return r + "\"";
}

void dumpTokens(const std::vector<frontend::Token>& tokens, std::ostream& out) {
    for (const auto& t : tokens) {
        out << t.line << ':' << t.column << ' ' << frontend::toString(t.kind);
        if (t.kind == frontend::TokenKind::StringLiteral) out << ' ' << quoted(t.lexeme);
        else if (t.kind != frontend::TokenKind::EndOfInput) out << ' ' << t.lexeme;
        out << '\n';
    }
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string source;
    if (!readFile(cfg.sourcePath, source)) {
        err << cfg.sourcePath << ": error: cannot read file\n";
        return kExitUsage;
    }

    try {
        auto tokens = frontend::tokenize(source);
        if (cfg.mode == Mode::Tokens) {
            dumpTokens(tokens, out);
            return kExitOk;
        }
        auto ast = std::make_shared<const ast::ProgramAst>(frontend::parse(tokens));
        if (cfg.mode == Mode::Ast) {
            out << frontend::prettyPrint(*ast);
            return kExitOk;
        }
        auto program = semantics::analyze(ast);
        if (cfg.mode == Mode::Check) return kExitOk;

        runtime::RunOptions options;
        options.maxSteps = cfg.maxSteps;
        auto result = runtime::runProgram(program, out, cfg.traceEnabled ? &err : nullptr, options);
        if (result.exitStatus != 0) {
            err << cfg.sourcePath << ':';
            if (result.errorLoc) err << result.errorLoc->line << ':' << result.errorLoc->column << ':';
            err << " runtime error: " << result.error << '\n';
            return kExitRuntime;
        }
        return kExitOk;
    } catch (const CompileError& e) {
        for (const auto& d : e.diagnostics()) err << formatDiagnostic(cfg.sourcePath, d) << '\n';
        return kExitCompile;
    }
}

} // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Interpreter for concept-oriented programs", "copl"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto* run = app.add_subcommand("run", "Check and execute a program");
    run->add_option("file", cfg.sourcePath, "Source file")->required();
    run->add_flag("--trace", cfg.traceEnabled, "Write resolution events to stderr");
    run->add_option("--max-steps", cfg.maxSteps, "Step budget before aborting")->check(CLI::PositiveNumber);

    auto* checkCmd = app.add_subcommand("check", "Report diagnostics only");
    checkCmd->add_option("file", cfg.sourcePath, "Source file")->required();
    auto* tokensCmd = app.add_subcommand("tokens", "Dump the token stream");
    tokensCmd->add_option("file", cfg.sourcePath, "Source file")->required();
    auto* astCmd = app.add_subcommand("ast", "Pretty-print the parsed program");
    astCmd->add_option("file", cfg.sourcePath, "Source file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends still exit 0.
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (checkCmd->parsed()) cfg.mode = Mode::Check;
    else if (tokensCmd->parsed()) cfg.mode = Mode::Tokens;
    else if (astCmd->parsed()) cfg.mode = Mode::Ast;
    return execute(cfg, out, err);
}

} // namespace copl::cli
