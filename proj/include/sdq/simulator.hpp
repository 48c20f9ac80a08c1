#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sdq/law.hpp"
#include "sdq/palm.hpp"
#include "sdq/profile.hpp"

namespace sdq {

enum class EventKind { Arrival, Departure, Simultaneous };

struct SystemState {
  std::int64_t L = 0;
  double Re = 0.0;
  double Rd = 0.0;
  double t = 0.0;

  bool operator==(const SystemState&) const = default;
};

// What happened at the epoch, with the clock values just before the jumps.
struct StepOutcome {
  EventKind event;
  double dt;
  std::int64_t L_before;
  double Re_pre;   // R_e(t-)
  double Rd_pre;   // R_d(t-), 0 for the departure half of a tie
};

// Speeds per queue length, filled lazily.
class SpeedTable {
 public:
  explicit SpeedTable(const ScaledSystem& sys) : sys_(&sys) {}
  const Speeds& operator[](std::int64_t ell) {
    if (static_cast<std::size_t>(ell) >= cache_.size()) grow(ell);
    return cache_[static_cast<std::size_t>(ell)];
  }
  const ScaledSystem& system() const { return *sys_; }

 private:
  void grow(std::int64_t ell);
  const ScaledSystem* sys_;
  std::vector<Speeds> cache_;
};

StepOutcome step(const ScaledSystem& sys, SystemState& state, Rng& rng);
StepOutcome step(SpeedTable& speeds, SystemState& state, Rng& rng);

struct EmpiricalLaw {
  int n = 1;
  std::vector<double> time_weights;  // post burn-in sojourn time per queue length
  double total_time = 0.0;           // = sum of time_weights
  double burn_in_time = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t events = 0;          // post burn-in event epochs
  std::uint64_t burn_in_events = 0;
  std::int64_t start_length = 0;     // summed over merged runs
  std::int64_t end_length = 0;
  std::uint64_t seed = 0;
  std::uint32_t replications = 1;

  double mass(std::int64_t ell) const;
  LatticeLaw distribution() const;
  void merge(const EmpiricalLaw& other);
};

struct RunOptions {
  std::uint64_t events = 1000000;
  double burn_in_fraction = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  bool allow_unstable = false;
  std::int64_t length_cap = 10000000;
  std::optional<SystemState> initial;  // default: L=0 and fresh clock draws
};

struct StationaryRun {
  EmpiricalLaw law;
  PalmAccumulators palm;

  void merge(const StationaryRun& other) {
    law.merge(other.law);
    palm.merge(other.palm);
  }
};

// Thrown when a run is started on a system with gamma_inf >= 0 without override.
class UnstableSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

StationaryRun run_stationary(const ScaledSystem& sys, const RunOptions& options);

// Lbar_y(t) = L(y t) / y from the state (floor(y), y, y).
std::vector<double> run_fluid(const ScaledSystem& sys, double y, const std::vector<double>& t_grid,
                              std::uint64_t seed);

}  // namespace sdq
