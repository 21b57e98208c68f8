#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hhx::cli {

enum ExitStatus : int {
    kOk = 0,
    kValidationFailure = 1,
    kParseError = 2,
    kBudgetExceeded = 3,
};

struct RunConfig {
    std::string subcommand;
    std::optional<std::string> space_path;
    std::optional<std::string> builtin;
    std::optional<std::string> algebra_path;
    std::optional<std::string> module_path;
    std::optional<std::string> template_path;
    std::uint32_t max_degree = 2;
    std::optional<std::string> field;
    std::optional<std::uint32_t> paranoid_cap;
    bool override_slots = false;
    std::string format = "text";
    std::uint64_t budget = 200000;
};

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_actions(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_cohomology(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hhx::cli
