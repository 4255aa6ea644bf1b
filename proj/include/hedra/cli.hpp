#ifndef HEDRA_CLI_HPP
#define HEDRA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hedra {

// exit codes: 0 success, 1 usage error, 2 not found within budget, 3 I/O or
// format error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int env_thread_cap();   // HEDRA_THREADS, defaulting to the hardware count

} // namespace hedra

#endif
