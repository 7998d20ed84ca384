#pragma once

#include <filesystem>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

namespace gpvw::cli {

using json = nlohmann::ordered_json;

/// Process exit codes of every subcommand.
enum ExitCode : int {
    exit_ok = 0,             ///< all checks passed
    exit_check_failed = 1,   ///< the run completed but a check failed
    exit_usage = 2,          ///< bad arguments, config or input file
    exit_not_converged = 3,  ///< numerical non-convergence
};

/// A command-line usage problem detected after parsing (missing or conflicting values).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a flat JSON object whose keys are long option names of `sub` (without
/// the leading dashes) and applies each value to an option that was not given on
/// the command line. Unknown keys and invalid values raise UsageError.
void merge_json_config(CLI::App& sub, const std::filesystem::path& path);

/// Every option of `sub` with its resolved value (given, from config or default).
json resolved_options(const CLI::App& sub);

/// Common report header: tool name, version, command and resolved config.
json report_header(const std::string& command, const json& config);

/// Parses a JSON file; malformed content raises UsageError.
json read_json_file(const std::filesystem::path& path);

/// Writes `j` with two-space indentation, creating parent directories.
void write_json(const std::filesystem::path& path, const json& j);

/// Creates the parent directory of an output file.
void prepare_output(const std::filesystem::path& path);

/// Named pass/fail checks with their measured values and limits.
class CheckList {
public:
    void add(const std::string& name, bool passed, json measured, json limit);
    void skip(const std::string& name, const std::string& reason);
    void append(const CheckList& other);
    bool passed() const { return passed_; }
    const json& items() const { return items_; }

private:
    json items_ = json::array();
    bool passed_ = true;
};

/// Exit code for a completed run.
inline int exit_for(const CheckList& checks) { return checks.passed() ? exit_ok : exit_check_failed; }

}  // namespace gpvw::cli
