#ifndef GENSUB_TOOLS_CLI_HPP
#define GENSUB_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gensub::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalid = 2,
    kNoConvergence = 3,
};

struct RunConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string output;
    double dt = 1e-3;
    double t_final = 1.0;
    std::uint64_t seed = 1;
    double tol = 1e-8;
    int modes = 2;
    int det_sweep = 0;
    bool csv = false;
};

/// Default tolerance: GENSUB_TOL when set and parseable, 1e-8 otherwise.
double default_tolerance();

const std::vector<std::string>& commands();
std::string usage();

/// Runs one command.  The report goes to `output` when set, else to `out`;
/// diagnostics go to `err`.  Returns an ExitCode.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace gensub::cli

#endif // GENSUB_TOOLS_CLI_HPP
