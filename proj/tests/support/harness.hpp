#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace copl::testing {

struct Execution {
    int exitCode = 0;
    std::string out;
    std::string err;
};

// parse -> check -> run on in-memory source, mirroring the CLI's exit codes.
Execution runSource(const std::string& source, bool trace = false, std::uint64_t maxSteps = 1'000'000);

// Runs the CLI entry point with captured streams; args exclude argv[0].
Execution runCli(const std::vector<std::string>& args);

std::vector<std::filesystem::path> corpusPrograms();
std::string readFile(const std::filesystem::path& p);

// Lines of `text` starting with `prefix`.
std::vector<std::string> linesWithPrefix(const std::string& text, const std::string& prefix);

} // namespace copl::testing
