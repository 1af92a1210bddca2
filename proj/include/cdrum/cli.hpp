#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdrum {

// Runs one CLI invocation. Machine-readable JSON goes to `out`, diagnostics
// and timings to `err`. Returns the process exit code: 0 when the requested
// check holds or the work succeeded, 1 when a verdict is negative (axiom
// failure, infeasible test, model mismatch), 2 on input or usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdrum
