#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdq/law.hpp"
#include "sdq/profile.hpp"

namespace sdq {

struct EmpiricalLaw;

// Sums of x, x^2, x^3, x^4 over epochs.
struct EpochMoments {
  std::uint64_t count = 0;
  std::array<double, 4> pow{};

  void add(double x) {
    ++count;
    double p = x;
    for (double& s : pow) {
      s += p;
      p *= x;
    }
  }
  void merge(const EpochMoments& o) {
    count += o.count;
    for (std::size_t j = 0; j < pow.size(); ++j) pow[j] += o.pow[j];
  }
};

// Epoch statistics of one run. Residuals are checked: min(R, sqrt(n)).
struct PalmAccumulators {
  double cap = 1.0;
  std::uint64_t arr_count = 0;
  std::uint64_t dep_count = 0;
  double total_time = 0.0;
  std::vector<EpochMoments> at_arrival;    // keyed by L(0-), moments of R_d(0-)
  std::vector<EpochMoments> at_departure;  // keyed by L(0), moments of R_e(0)
  double max_arrival_Re_pre = 0.0;         // should stay ~0
  double max_departure_Rd_pre = 0.0;

  void record_arrival(std::int64_t L_before, double Rd_pre);
  void record_departure(std::int64_t L_after, double Re_post);
  void merge(const PalmAccumulators& o);

  const EpochMoments& arrivals_at(std::int64_t q) const;
  const EpochMoments& departures_at(std::int64_t q) const;
};

struct IntensityReport {
  double alpha_e, alpha_d;
  double r1, r1_bound;
  double r2, r3;
};

IntensityReport intensity_identity_report(const EmpiricalLaw& law, const PalmAccumulators& acc,
                                          const ScaledSystem& sys);

struct CrossingBalance {
  double arrivals_at_or_below;    // fraction of arrivals with L(0-) <= ell
  double departures_at_or_below;  // fraction of departures with L(0) <= ell
  double diff_std_error;
};

CrossingBalance level_crossing_balance(const PalmAccumulators& acc, std::int64_t ell);

struct PalmEstimate {
  double x = 0.0;
  std::int64_t q = 0;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t epochs_used = 0;
  bool sufficient = false;
};

inline constexpr std::uint64_t kMinPalmEpochs = 200;

PalmEstimate estimate_H(const PalmAccumulators& acc, const ScaledSystem& sys, double x,
                        std::uint64_t min_epochs = kMinPalmEpochs);
PalmEstimate estimate_Delta(const PalmAccumulators& acc, const EmpiricalLaw& law, const ScaledSystem& sys, double x,
                            std::uint64_t min_epochs = kMinPalmEpochs);

// -n^{-1/2} E[bhat(Lhat) 1(Lhat > q/sqrt n)] and n^{-1/2} E[bhat 1(Lhat <= q/sqrt n)] + mu(0) P[L=0]
struct DeltaTargets {
  double upper;
  double lower;
};
DeltaTargets delta_identity_targets(const LatticeLaw& law, const ScaledSystem& sys, std::int64_t q);

struct BoundaryReport {
  double lhs;  // mu(0) sqrt(n) P[L=0]
  double rhs;  // -E[bhat(Lhat)]
  double rel_err;
};

BoundaryReport boundary_identity_report(const LatticeLaw& law, const ScaledSystem& sys);

// default probes: 0.25, 0.5, level points and region midpoints
std::vector<double> default_probes(const SpeedProfile& profile);

}  // namespace sdq
