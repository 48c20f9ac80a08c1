#pragma once

namespace sdq {

// Worker threads for replication loops: SDQ_WORKERS if set, else the OpenMP default.
int worker_count();

}  // namespace sdq
