#include "sdq/replicate.hpp"

#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>

#include "sdq/parallel.hpp"

#ifdef SDQ_OMP
#include <omp.h>
#endif

namespace sdq {

int worker_count() {
  if (const char* env = std::getenv("SDQ_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("SDQ_WORKERS: expected a positive integer, got '") + env + "'");
  }
#ifdef SDQ_OMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

StationaryRun merge_in_order(std::vector<StationaryRun>& runs) {
  StationaryRun out = std::move(runs.front());
  for (std::size_t r = 1; r < runs.size(); ++r) out.merge(runs[r]);
  return out;
}

void check_count(int replications) {
  if (replications < 1) throw std::invalid_argument("replications: must be >= 1");
}

}  // namespace

std::vector<StationaryRun> run_each_replication(const ScaledSystem& sys, const RunOptions& options,
                                                int replications) {
  check_count(replications);
  std::vector<StationaryRun> runs(static_cast<std::size_t>(replications));
  std::exception_ptr failure;
#ifdef SDQ_OMP
  const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
  for (int r = 0; r < replications; ++r) {
    try {
      RunOptions opt = options;
      opt.stream = options.stream + static_cast<std::uint64_t>(r);
      runs[static_cast<std::size_t>(r)] = run_stationary(sys, opt);
    } catch (...) {
#ifdef SDQ_OMP
#pragma omp critical(sdq_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return runs;
}

StationaryRun run_replications(const ScaledSystem& sys, const RunOptions& options, int replications) {
  std::vector<StationaryRun> runs = run_each_replication(sys, options, replications);
  return merge_in_order(runs);
}

StationaryRun run_replications_serial(const ScaledSystem& sys, const RunOptions& options, int replications) {
  check_count(replications);
  std::vector<StationaryRun> runs;
  runs.reserve(static_cast<std::size_t>(replications));
  for (int r = 0; r < replications; ++r) {
    RunOptions opt = options;
    opt.stream = options.stream + static_cast<std::uint64_t>(r);
    runs.push_back(run_stationary(sys, opt));
  }
  return merge_in_order(runs);
}

}  // namespace sdq
