#pragma once

// Command-line front end. Subcommands: simulate, quadrature, locallimit,
// verify. Exit codes: 0 success, 1 check or computation failure, 2 usage
// error.

#include <iosfwd>
#include <string>
#include <vector>

namespace nntlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Library version string.
const char* version();

/// 64-bit FNV-1a, used for the config hash in output trailers.
unsigned long long fnv1a(const std::string& text);

/// Parses "4", "2..10" or "2,3,5" into a list of integers.
/// Throws std::invalid_argument on malformed input.
std::vector<int> parse_int_list(const std::string& text);

}  // namespace nntlab
