#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "imcf/errors.hpp"

namespace imcf::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kPass = 0, kUsage = 1, kBreakdown = 2 };

/// Bad flags, config entries or list syntax.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Entry point of `imcf-profile`; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// key=value lines; '#' starts a comment, blank lines are skipped. Throws UsageError.
std::map<std::string, std::string> parse_config(std::istream& is);

/// Comma-separated numbers; throws UsageError on malformed entries.
std::vector<double> parse_list(const std::string& text);

/// IMCF_PROFILE_THREADS when set to a positive integer, else the hardware concurrency (>= 1).
std::size_t pool_size();

}  // namespace imcf::cli
