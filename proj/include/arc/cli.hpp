#ifndef ARC_CLI_HPP
#define ARC_CLI_HPP

namespace arc::cli {

// Exit codes: 0 success, 1 audit verdict FAIL, 2 invalid input, 3 internal error.
int run(int argc, const char* const* argv);

}  // namespace arc::cli

#endif
