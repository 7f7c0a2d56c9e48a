#pragma once

#include <ostream>

#include "run_config.hpp"

namespace mamax::cli {

// Executes the configured experiment under config.output_dir, writing
// results.csv (one row per trial, streamed), manifest.json (the resolved
// configuration and root seed), per-trial records under trials/, and, for the
// convergence experiment, per-iteration traces under traces/. With audit,
// every recorded placement is re-solved from its trial record afterwards and
// compared against the recorded rate at 1e-9. Returns 0 on success, 2 when
// any trial failed or an audit recompute disagreed.
int run(const RunConfig& config, bool audit, std::ostream& log);

}  // namespace mamax::cli
