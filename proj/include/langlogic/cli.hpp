#pragma once

// The `check | derive | prove` commands, independent of argument parsing.

#include <optional>
#include <ostream>
#include <string>

namespace langlogic {

enum class Subcommand { Check, Derive, Prove };
enum class OutputFormat { Text, Json };

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNoProof = 3;
}  // namespace exit_code

struct CliInvocation {
    Subcommand subcommand = Subcommand::Check;
    std::string lang_path;
    std::string pre = "true";
    std::optional<std::string> goal;
    OutputFormat format = OutputFormat::Text;
    /// Comma-separated metavariables; replaces the file's %ineffectual directive.
    std::optional<std::string> ineffectual;
    std::optional<unsigned> max_passes;
};

/// Runs one invocation and returns its exit code (see exit_code).
int run(const CliInvocation& inv, std::ostream& out, std::ostream& err);

}  // namespace langlogic
