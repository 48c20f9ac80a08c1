#pragma once

#include <cstdint>

#include "sdq/primitives.hpp"

namespace sdq {

std::uint64_t splitmix64(std::uint64_t x);

// Independent stream for (seed, index). Replication r of a run uses index r.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

}  // namespace sdq
