#pragma once

#include <vector>

#include "sdq/simulator.hpp"

namespace sdq {

// Replication r runs on stream options.stream + r; results are merged in r order,
// so the parallel and serial versions agree bit for bit.
StationaryRun run_replications(const ScaledSystem& sys, const RunOptions& options, int replications);
StationaryRun run_replications_serial(const ScaledSystem& sys, const RunOptions& options, int replications);

// Unmerged replications, in order.
std::vector<StationaryRun> run_each_replication(const ScaledSystem& sys, const RunOptions& options,
                                                int replications);

}  // namespace sdq
