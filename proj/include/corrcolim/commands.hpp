#ifndef CORRCOLIM_COMMANDS_HPP
#define CORRCOLIM_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace corrcolim {

// Exit codes: 0 when every check passes, 1 on a failed check or invalid input, 2 on usage errors.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name, e.g. {"colimit", "coeq.dsl", "--tol", "1e-9"}.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corrcolim

#endif
