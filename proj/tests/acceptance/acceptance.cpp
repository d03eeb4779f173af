// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "copl/frontend/ast.hpp"
#include "copl/frontend/parser.hpp"
#include "copl/frontend/printer.hpp"
#include "copl/runtime/interpreter.hpp"
#include "copl/semantics/checker.hpp"
#include "generators.hpp"
#include "harness.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace copl;
using namespace copl::testing;

namespace {

// Collects the first few problems of a criterion.
struct Outcome {
    std::vector<std::string> problems;
    std::string detail;

    void fail(std::string why) {
        if (problems.size() < 5) problems.push_back(std::move(why));
        else if (problems.size() == 5) problems.push_back("...");
    }
    bool ok() const { return problems.empty(); }
};

semantics::CheckedProgram compile(const std::string& source) {
    return semantics::analyze(std::make_shared<const ast::ProgramAst>(frontend::parseSource(source)));
}

std::string corpusFile(const std::string& name) { return readFile(fs::path(COPL_CORPUS_DIR) / name); }

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::string trimLeft(const std::string& s) {
    std::size_t i = s.find_first_not_of(' ');
    return i == std::string::npos ? "" : s.substr(i);
}

// Reference transcript of a session, shell prompt included.
const char* kTranscriptStorage = "$ > Start of resolution\n"
                           "$ * getBalance is called\n"
                           "$ < End of resolution\n"
                           "$ > Start of resolution\n"
                           "$ * setBalance is called\n"
                           "$ < End of resolution\n";

const char* kTranscriptNamed = "$ > Enter NamedObjects\n"
                           "$ > Enter Persistent\n"
                           "$ * getBalance is called\n"
                           "$ < Exit Persistent\n"
                           "$ < Exit NamedObjects\n"
                           "$ > Enter NamedObjects\n"
                           "$ > Enter Persistent\n"
                           "$ * setBalance is called\n"
                           "$ < Exit Persistent\n"
                           "$ < Exit NamedObjects\n";

// Golden-file reproduction of a reference transcript. The golden file must
// match stdout byte for byte; the transcript (after removing "$ ") must
// match line by line, modulo the indentation the typeset block collapses.
Outcome reproduce(const std::string& program, const char* transcriptText) {
    Outcome o;
    std::string golden = corpusFile(program + ".stdout");
    auto start = std::chrono::steady_clock::now();
    Execution ex = runCli({"run", (fs::path(COPL_CORPUS_DIR) / (program + ".cop")).string()});
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (ex.exitCode != 0) o.fail("exit code " + std::to_string(ex.exitCode) + ": " + ex.err);
    if (ex.out != golden) o.fail("stdout differs from " + program + ".stdout");
    auto transcript = splitLines(transcriptText);
    auto actual = splitLines(ex.out);
    if (transcript.size() != actual.size()) {
        o.fail("transcript has " + std::to_string(transcript.size()) + " lines, output has " +
               std::to_string(actual.size()));
    } else {
        for (std::size_t i = 0; i < transcript.size(); ++i)
            if (transcript[i].substr(2) != trimLeft(actual[i]))
                o.fail("line " + std::to_string(i + 1) + ": '" + actual[i] + "' vs transcript '" + transcript[i] + "'");
    }
    if (seconds >= 1.0) o.fail("took " + std::to_string(seconds) + " s");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu lines, %.3f s", actual.size(), seconds);
    o.detail = buf;
    return o;
}

Outcome oopDegeneration() {
    Outcome o;
    const int programs = 40;
    int directCalls = 0;
    for (int seed = 1; seed <= programs; ++seed) {
        OopModel model = generateOopModel(static_cast<std::uint32_t>(seed));
        std::string source = renderSource(model);
        std::string tag = "seed " + std::to_string(seed) + ": ";

        Execution ex = runSource(source, true);
        OopOracle oracle(model);
        std::string expected = oracle.runMain();
        if (ex.exitCode != 0) {
            o.fail(tag + "exit " + std::to_string(ex.exitCode) + " " + ex.err.substr(0, 200));
            continue;
        }
        if (ex.out != expected) o.fail(tag + "stdout differs from oracle");
        if (!linesWithPrefix(ex.err, "TRACE enter").empty() || !linesWithPrefix(ex.err, "TRACE exit").empty())
            o.fail(tag + "resolution events in trace");
        if (linesWithPrefix(ex.err, "TRACE call").empty()) o.fail(tag + "no calls traced");

        // Return values, one fresh receiver per call.
        auto program = compile(source);
        for (const auto& call : model.calls) {
            std::ostringstream sink;
            runtime::Interpreter in(program, sink);
            in.initialize();
            const MMethod& m = model.classes[call.cls].methods[call.method];
            auto self = in.instantiate("C" + std::to_string(call.cls), std::nullopt);
            std::vector<runtime::Value> args;
            for (const auto& a : call.args) args.push_back(toValue(a));
            if (m.objectParam >= 0) args.emplace_back(in.instantiate("C" + std::to_string(m.objectParam), std::nullopt));
            runtime::Value got = in.callDirect(self, "m" + std::to_string(call.method), args);
            OopOracle fresh(model);
            OracleValue want = fresh.callFresh(call);
            if (!sameValue(got, want)) o.fail(tag + "return value differs, expected " + describe(want));
            if (sink.str() != fresh.output()) o.fail(tag + "call output differs");
            if (in.chainDepth() != 0) o.fail(tag + "chain stack not empty");
            ++directCalls;
        }
    }
    o.detail = std::to_string(programs) + " programs, " + std::to_string(directCalls) + " direct calls";
    return o;
}

Outcome nesting() {
    Outcome o;
    const int programs = 150;
    int invocations = 0;
    for (int seed = 1; seed <= programs; ++seed) {
        int depth = 1 + seed % 6;
        NestingProgram p = generateNestingProgram(static_cast<std::uint32_t>(1000 + seed), depth);
        std::string tag = "seed " + std::to_string(seed) + " depth " + std::to_string(depth) + ": ";
        Execution ex = runSource(p.source, true);
        if (ex.exitCode != 0) {
            o.fail(tag + ex.err.substr(0, 200));
            continue;
        }
        if (ex.out != p.expectedStdout) o.fail(tag + "stdout differs from expanded chain");

        std::vector<std::string> expected;
        for (int k = 0; k < p.invocations; ++k) {
            for (int i = 1; i <= depth; ++i)
                expected.push_back("TRACE enter L" + std::to_string(i) + " seg=" + std::to_string(i));
            for (int i = depth; i >= 1; --i)
                expected.push_back("TRACE exit L" + std::to_string(i) + " seg=" + std::to_string(i));
        }
        std::vector<std::string> events;
        for (const auto& line : splitLines(ex.err))
            if (line.rfind("TRACE enter", 0) == 0 || line.rfind("TRACE exit", 0) == 0) events.push_back(line);
        if (events != expected) o.fail(tag + "enter/exit events out of order");
        invocations += p.invocations;
    }
    o.detail = std::to_string(programs) + " programs, " + std::to_string(invocations) + " invocations";
    return o;
}

Outcome returnPropagation() {
    Outcome o;
    int checked = 0;
    for (int depth = 1; depth <= 6; ++depth) {
        for (int variant = 0; variant < 8; ++variant) {
            NestingProgram p = generateNestingProgram(static_cast<std::uint32_t>(depth * 100 + variant), depth);
            std::string tag = "depth " + std::to_string(depth) + " variant " + std::to_string(variant) + ": ";
            auto program = compile(p.source);
            std::ostringstream sink;
            runtime::Interpreter in(program, sink);
            in.runMain();
            for (const auto& tg : p.targets) {
                std::vector<runtime::Value> keys;
                for (const auto& k : tg.keys) keys.push_back(toValue(k));
                std::vector<runtime::Value> fields;
                for (const auto& f : tg.fields) fields.push_back(toValue(f));
                auto direct = in.instantiate("T", std::nullopt, fields);
                for (const auto& [getter, field] : p.getters) {
                    auto ref = in.constructReference("T", keys);
                    runtime::Value through = in.invoke(ref, getter, {});
                    runtime::Value plain = in.callDirect(direct, getter, {});
                    const OracleValue& want = tg.fields[field];
                    if (!sameValue(through, want)) o.fail(tag + getter + " through chain != " + describe(want));
                    if (!sameValue(plain, want)) o.fail(tag + getter + " direct != " + describe(want));
                    if (in.chainDepth() != 0) o.fail(tag + "chain stack not empty");
                    ++checked;
                }
            }
        }
    }
    o.detail = std::to_string(checked) + " results at depths 1..6";
    return o;
}

Outcome stateRoundTrip() {
    Outcome o;
    const OracleValue want = 0.0 + 100.0;
    struct Case {
        const char* file;
        std::vector<runtime::Value> keys;
    };
    std::vector<Case> cases{{"listing2_3.cop", {runtime::Value(std::int64_t{42})}},
                            {"listing4.cop", {runtime::Value("db"), runtime::Value(std::int64_t{42})}}};
    for (const auto& c : cases) {
        auto program = compile(corpusFile(c.file));
        std::ostringstream sink;
        runtime::Interpreter in(program, sink);
        in.runMain();
        auto fresh = in.constructReference("Account", c.keys);
        runtime::Value balance = in.invoke(fresh, "getBalance", {});
        if (!sameValue(balance, want))
            o.fail(std::string(c.file) + ": balance " + (balance.isNumeric() ? runtime::renderNumber(balance) : "?"));
    }
    o.detail = "balance 100 after credit, both hierarchies";
    return o;
}

// Splits a trace into top-level invocations and counts open/close events
// per storage inside each.
struct Span {
    std::map<std::string, int> opens, closes;
    int enters = 0;
};

std::vector<Span> topLevelSpans(const std::string& trace) {
    std::vector<Span> spans;
    int depth = 0;
    for (const auto& line : splitLines(trace)) {
        if (line.rfind("TRACE enter", 0) == 0) {
            if (depth++ == 0) spans.emplace_back();
            spans.back().enters++;
        } else if (line.rfind("TRACE exit", 0) == 0) {
            --depth;
        } else if (line.rfind("TRACE open ", 0) == 0 && !spans.empty()) {
            spans.back().opens[line.substr(11)]++;
        } else if (line.rfind("TRACE close ", 0) == 0 && !spans.empty()) {
            spans.back().closes[line.substr(12)]++;
        }
    }
    return spans;
}

const char* kReentrantMain = R"(
class Main {
    void main() {
        Root db1 = new Persistent();
        Root db2 = new Persistent();
        NamedObjects.map.put("db1", db1);
        NamedObjects.map.put("db2", db2);
        db1.st.store(1, new Account());
        db1.st.store(2, new Account());
        db2.st.store(1, new Account());
        Source s = new Source();
        s.credit(Account@("db1", 1), 5);
        print(Account@("db1", 1).peek(Account@("db1", 2)));
        print("\n");
        print(Account@("db1", 2).peek(Account@("db2", 1)));
        print("\n");
    }
}
)";

Outcome openClose() {
    Outcome o;
    auto check = [&](const std::string& name, const std::string& source, std::size_t expectedSpans,
                     const std::vector<int>& storagesPerSpan) {
        Execution ex = runSource(source, true);
        if (ex.exitCode != 0) {
            o.fail(name + ": " + ex.err);
            return;
        }
        auto spans = topLevelSpans(ex.err);
        if (spans.size() != expectedSpans)
            o.fail(name + ": " + std::to_string(spans.size()) + " top-level invocations");
        for (std::size_t i = 0; i < spans.size() && i < storagesPerSpan.size(); ++i) {
            if (static_cast<int>(spans[i].opens.size()) != storagesPerSpan[i])
                o.fail(name + ": invocation " + std::to_string(i + 1) + " touched " +
                       std::to_string(spans[i].opens.size()) + " storages");
            for (const auto& [label, n] : spans[i].opens)
                if (n != 1 || spans[i].closes[label] != 1)
                    o.fail(name + ": invocation " + std::to_string(i + 1) + " " + label + " opened " +
                           std::to_string(n) + "x, closed " + std::to_string(spans[i].closes[label]) + "x");
            if (spans[i].closes.size() != spans[i].opens.size()) o.fail(name + ": unmatched close");
        }

        auto program = compile(source);
        std::ostringstream sink;
        runtime::Interpreter in(program, sink);
        in.runMain();
        for (const auto& st : in.storages())
            if (st.openCount() != 0) o.fail(name + ": " + st.label() + " left open");
    };

    check("listing4", corpusFile("listing4.cop"), 2, {1, 1});

    // Same declarations with a re-entrant business method.
    std::string decls = corpusFile("listing4.cop");
    decls = decls.substr(0, decls.find("class Main"));
    std::string peek = "    double peek(Account other) {\n"
                       "        print(\" * peek\\n\");\n"
                       "        return other.getBalance() + b;\n"
                       "    }\n";
    std::size_t at = decls.find("    void setBalance");
    decls.insert(at, peek);
    check("re-entrant", decls + kReentrantMain, 4, {1, 1, 1, 2});
    o.detail = "one open/close per storage per top-level invocation, nested included";
    return o;
}

fs::path writeTemp(const std::string& name, const std::string& text) {
    fs::path dir = fs::temp_directory_path() / "copl-acceptance";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

Outcome errorSurfacing() {
    Outcome o;
    std::string decls = corpusFile("listing4.cop");
    decls = decls.substr(0, decls.find("class Main"));
    auto program = [&](const std::string& ref) {
        return decls + "class Main {\n    void main() {\n        Root db = new Persistent();\n"
                       "        NamedObjects.map.put(\"db\", db);\n        db.st.store(42, new Account());\n"
                       "        print(" +
               ref + ".getBalance());\n    }\n}\n";
    };
    struct Case {
        std::string name;
        std::string source;
        int exit;
        std::vector<std::string> mentions;
    };
    std::vector<Case> cases{
        {"missing-storage-key.cop", program("Account@(\"db\", 99)"), 1, {"Storage key 99", "'Persistent'"}},
        {"missing-map-key.cop", program("Account@(\"nodb\", 42)"), 1, {"Map key nodb", "'NamedObjects'"}},
        {"cycle.cop",
         "concept A in B\n  class { }\n  reference { }\nconcept B in A\n  class { }\n  reference { }\n"
         "class Main {\n    void main() { }\n}\n",
         3,
         {"inclusion cycle"}},
    };
    for (const auto& c : cases) {
        fs::path file = writeTemp(c.name, c.source);
        Execution ex = runCli({"run", file.string()});
        if (ex.exitCode != c.exit)
            o.fail(c.name + ": exit " + std::to_string(ex.exitCode) + ", wanted " + std::to_string(c.exit));
        for (const auto& m : c.mentions)
            if (ex.err.find(m) == std::string::npos) o.fail(c.name + ": message lacks \"" + m + "\": " + ex.err);
    }
    o.detail = "storage key, map key, cycle";
    return o;
}

Outcome frontendStability() {
    Outcome o;
    int n = 0;
    for (const auto& file : corpusPrograms()) {
        auto first = frontend::parseSource(readFile(file));
        std::string printed = frontend::prettyPrint(first);
        auto second = frontend::parseSource(printed);
        if (!ast::structurallyEqual(first, second)) o.fail(file.filename().string() + " changes on round trip");
        if (frontend::prettyPrint(second) != printed) o.fail(file.filename().string() + " printer not idempotent");
        ++n;
    }
    if (n == 0) o.fail("empty corpus");
    o.detail = std::to_string(n) + " corpus programs";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* title;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {"Storage example transcript", [] { return reproduce("listing2_3", kTranscriptStorage); }},
        {"Named storage example transcript", [] { return reproduce("listing4", kTranscriptNamed); }},
        {"OOP programs match direct-dispatch oracle", oopDegeneration},
        {"Enter/Exit nesting at depths 1..6", nesting},
        {"Return values through chains", returnPropagation},
        {"State survives store-back", stateRoundTrip},
        {"Open/close discipline", openClose},
        {"Missing keys and cycles reported", errorSurfacing},
        {"Corpus print/parse round trip", frontendStability},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s  %zu  %s", out.ok() ? "PASS" : "FAIL", i + 1, criteria[i].title);
        if (!out.detail.empty()) std::printf(" (%s)", out.detail.c_str());
        std::printf("\n");
        for (const auto& p : out.problems) std::printf("        %s\n", p.c_str());
        if (!out.ok()) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
