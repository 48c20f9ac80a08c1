#include <cmath>
#include <vector>

#include "doctest.h"
#include "sdq/analyzer.hpp"
#include "sdq/palm.hpp"
#include "sdq/replicate.hpp"
#include "sdq/simulator.hpp"
#include "support.hpp"

using namespace sdq;

namespace {

StationaryRun mm1_family_run(int n, std::uint64_t events, std::uint64_t seed) {
  const ScaledSystem sys(n, fixtures::single_region(), fixtures::expo(), fixtures::expo());
  RunOptions opt;
  opt.events = events;
  opt.seed = seed;
  return run_stationary(sys, opt);
}

}  // namespace

TEST_SUITE("palm") {
  TEST_CASE("intensity identities on a long run") {
    const ScaledSystem sys(100, fixtures::single_region(), fixtures::expo(), fixtures::expo());
    const StationaryRun r = mm1_family_run(100, 5000000, 31);
    const IntensityReport rep = intensity_identity_report(r.law, r.palm, sys);
    CHECK(rep.r1 <= rep.r1_bound);
    CHECK(rep.r2 / rep.alpha_e <= 0.01);
    CHECK(rep.r3 / rep.alpha_d <= 0.01);
    // sup of the arrival speed is 1, up to counting noise
    CHECK(rep.alpha_e <= 1.0 + 4.0 / std::sqrt(static_cast<double>(r.palm.arr_count)));
  }

  TEST_CASE("counting bound holds exactly on short runs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ScaledSystem sys(25, fixtures::two_region(), make_renewal(RenewalKind::Erlang, {.k = 2}), fixtures::expo());
      RunOptions opt;
      opt.events = 5000 + 37 * seed;
      opt.seed = seed;
      const StationaryRun r = run_stationary(sys, opt);
      const IntensityReport rep = intensity_identity_report(r.law, r.palm, sys);
      CHECK(rep.r1 <= rep.r1_bound + 1e-15);
    }
  }

  TEST_CASE("level-crossing balance") {
    const StationaryRun r = mm1_family_run(100, 2000000, 5);
    for (std::int64_t l : {0, 3, 10, 25, 60}) {
      const CrossingBalance b = level_crossing_balance(r.palm, l);
      CAPTURE(l);
      CHECK(std::abs(b.arrivals_at_or_below - b.departures_at_or_below) <= 3.0 * b.diff_std_error);
    }
  }

  TEST_CASE("empty filter gives zero and the insufficient marker") {
    const ScaledSystem sys(100, fixtures::single_region(), fixtures::expo(), fixtures::expo());
    const StationaryRun r = mm1_family_run(100, 20000, 5);
    const PalmEstimate h = estimate_H(r.palm, sys, 1000.0);
    CHECK(h.value == 0.0);
    CHECK_FALSE(h.sufficient);
    CHECK(h.epochs_used == 0);
    const PalmEstimate d = estimate_Delta(r.palm, r.law, sys, 1000.0);
    CHECK(d.value == 0.0);
    CHECK_FALSE(d.sufficient);
  }

  TEST_CASE("H for memoryless clocks is minus the arrival rate into the level") {
    // E[R - R^2] = -1 and E[3R - R^2] = 1 for unit exponentials, so H ~ -alpha P_e[L = q]
    const ScaledSystem sys(100, fixtures::single_region(), fixtures::expo(), fixtures::expo());
    const StationaryRun r = mm1_family_run(100, 4000000, 77);
    const double alpha = static_cast<double>(r.palm.arr_count) / r.palm.total_time;
    for (double x : default_probes(sys.profile())) {
      const PalmEstimate h = estimate_H(r.palm, sys, x);
      REQUIRE(h.sufficient);
      const double pe = static_cast<double>(r.palm.arrivals_at(h.q).count) / static_cast<double>(r.palm.arr_count);
      CAPTURE(x);
      CHECK(std::abs(h.value + alpha * pe) <= 3.0 * h.std_error);
    }
  }

  TEST_CASE("Delta matches both drift expressions") {
    for (int n : {25, 100}) {
      const ScaledSystem sys(n, fixtures::two_region(), fixtures::expo(), fixtures::expo());
      RunOptions opt;
      opt.events = 4000000;
      opt.seed = 123 + n;
      const StationaryRun r = run_stationary(sys, opt);
      const LatticeLaw law = r.law.distribution();
      for (double x : {0.25, 0.5, 1.0, 1.5}) {
        const PalmEstimate d = estimate_Delta(r.palm, r.law, sys, x);
        REQUIRE(d.sufficient);
        const DeltaTargets t = delta_identity_targets(law, sys, d.q);
        const double allowance = 1.0 / n;
        CAPTURE(n);
        CAPTURE(x);
        CHECK(std::abs(d.value - t.upper) <= 3.0 * d.std_error + allowance);
        CHECK(std::abs(d.value - t.lower) <= 3.0 * d.std_error + allowance);
      }
    }
  }

  TEST_CASE("checked residual moments stay bounded in n") {
    for (int n : {25, 100, 400}) {
      const StationaryRun r = mm1_family_run(n, 1000000, 9);
      const ScaledSystem sys(n, fixtures::single_region(), fixtures::expo(), fixtures::expo());
      const std::int64_t q = sys.level_index(0.5);
      const EpochMoments& m = r.palm.arrivals_at(q);
      REQUIRE(m.count > 0);
      const double c = static_cast<double>(m.count);
      // conditional moments of a unit exponential are 1, 2, 6
      CHECK(m.pow[0] / c < 2.0);
      CHECK(m.pow[1] / c < 4.0);
      CHECK(m.pow[2] / c < 12.0);
    }
  }

  TEST_CASE("boundary identity on exact laws") {
    const ScaledSystem one(100, fixtures::single_region(), fixtures::expo(), fixtures::expo());
    const BoundaryReport a = boundary_identity_report(birth_death_oracle(one).lattice(), one);
    CHECK(a.rhs == doctest::Approx(1.0 / 1.1).epsilon(1e-10));  // P[L >= 1] = rho
    CHECK(a.rel_err <= 1e-10);

    const ScaledSystem two(10000, fixtures::two_region(), fixtures::expo(), fixtures::expo());
    const BoundaryReport b = boundary_identity_report(birth_death_oracle(two).lattice(), two);
    CHECK(b.rel_err <= 0.05);
    const LimitDensity h(fixtures::two_region(), fixtures::expo(), fixtures::expo());
    CHECK(std::abs(b.lhs - h.boundary_target()) / h.boundary_target() <= 0.05);
  }

  TEST_CASE("balanced family under override reports a vanishing drift") {
    const ScaledSystem sys(100, SpeedProfile::single({1.0, 1.0, 0.0, 0.0}), fixtures::expo(), fixtures::expo());
    RunOptions opt;
    opt.events = 20000;
    opt.allow_unstable = true;
    const StationaryRun r = run_stationary(sys, opt);
    const BoundaryReport rep = boundary_identity_report(r.law.distribution(), sys);
    CHECK(rep.rhs == 0.0);
    CHECK(std::isfinite(rep.lhs));
  }

  TEST_CASE("accumulators merge additively") {
    StationaryRun a = mm1_family_run(25, 30000, 1);
    const StationaryRun b = mm1_family_run(25, 30000, 2);
    const std::uint64_t q_count = a.palm.arrivals_at(3).count + b.palm.arrivals_at(3).count;
    const double q_sum = a.palm.departures_at(4).pow[1] + b.palm.departures_at(4).pow[1];
    a.merge(b);
    CHECK(a.palm.arrivals_at(3).count == q_count);
    CHECK(a.palm.departures_at(4).pow[1] == doctest::Approx(q_sum));
    CHECK_THROWS_AS(a.palm.merge(mm1_family_run(100, 10000, 1).palm), std::invalid_argument);
  }

  TEST_CASE("default probes cover interior and level points") {
    const std::vector<double> p = default_probes(fixtures::two_region());
    CHECK(p == std::vector<double>{0.25, 0.5, 1.0});
    const std::vector<double> q = default_probes(SpeedProfile({1.0, 2.0}, {{}, {}, {}}));
    CHECK(q == std::vector<double>{0.25, 0.5, 1.0, 1.5, 2.0});
  }
}
