#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace egress {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int usage = 2;
inline constexpr int unreadable = 3;  // missing file or unparseable content
inline constexpr int invalid = 4;     // scenario failed validation
inline constexpr int unwritable = 5;
}  // namespace exit_code

/// Directory holding the bundled no1a..no4b scenario files. EGRESS_PRESET_DIR
/// takes precedence over the compiled-in location.
std::filesystem::path preset_dir();

/// Entry point for the egress tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace egress
