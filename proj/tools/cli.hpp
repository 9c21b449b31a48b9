#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace omaf::cli {

// Exit statuses; stable across versions.
inline constexpr int kOk = 0;
inline constexpr int kFailures = 1;  // validation, conformance or domain failures
inline constexpr int kUsage = 2;
inline constexpr int kIoError = 3;  // I/O or parse errors

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace omaf::cli
