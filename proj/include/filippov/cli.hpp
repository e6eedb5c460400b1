#ifndef FILIPPOV_CLI_HPP
#define FILIPPOV_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace filippov
{

inline constexpr const char *tool_name = "filippov";
inline constexpr const char *tool_version = "1.0.0";

// Exit codes: 0 holds / success, 1 mathematical failure, 2 input error.
// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace filippov

#endif
