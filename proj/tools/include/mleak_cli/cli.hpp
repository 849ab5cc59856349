#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mleak::cli {

inline constexpr const char* kToolVersion = "0.3.0";

// Exit codes: 0 ok, 2 parse, 3 validation, 4 domain, 5 solver.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mleak::cli
