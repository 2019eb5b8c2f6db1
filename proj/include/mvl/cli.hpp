#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvl
{

namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int mismatch = 1;
inline constexpr int usage = 2;
inline constexpr int io = 3;
} // namespace exit_code

/// Runs the mvl command line (args exclude the program name) and returns the
/// process exit code.
int run_cli( std::vector<std::string> const& args, std::ostream& out, std::ostream& err );

} // namespace mvl
