#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sdq/analyzer.hpp"
#include "sdq/diffusion.hpp"
#include "support.hpp"

using namespace sdq;

namespace {

DiffusionConfig exp1_config(std::int64_t steps, double dt) {
  DiffusionConfig cfg;
  cfg.coeffs = constant_coefficients(-1.0, 2.0);  // stationary law Exp(1)
  cfg.dt = dt;
  cfg.steps = steps;
  cfg.burn_in = steps / 10;
  cfg.bin_width = 0.01;
  cfg.hist_max = 40.0;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_SUITE("diffusion") {
  TEST_CASE("coefficients follow the limit fields") {
    const LimitDensity h(fixtures::two_region(), fixtures::expo(), fixtures::expo());
    const DiffusionCoefficients c = coefficients_from(h);
    REQUIRE(c.drift.size() == 2);
    CHECK(c.drift[0] == -1.0);
    CHECK(c.drift[1] == -2.0);
    CHECK(c.sigma[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.sigma[1] == doctest::Approx(2.0));
    CHECK(c.region(1.0) == 0);
    CHECK(c.region(1.0001) == 1);
  }

  TEST_CASE("zero steps give an empty histogram") {
    const DiffusionRun r = simulate_rbm(exp1_config(0, 1e-3));
    CHECK(r.samples == 0);
    CHECK(r.hist.total() == 0.0);
    CHECK(r.complementarity_proxy() == 0.0);
  }

  TEST_CASE("invalid settings are rejected") {
    CHECK_THROWS_AS(simulate_rbm(exp1_config(10, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(simulate_rbm(exp1_config(10, 0.0)), std::invalid_argument);
    DiffusionConfig up = exp1_config(10, 1e-3);
    up.coeffs = constant_coefficients(0.0, 1.0);
    CHECK_THROWS_AS(simulate_rbm(up), std::invalid_argument);
    CHECK_THROWS_AS(constant_coefficients(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(reflection_scheme_from_string("clamp"), std::invalid_argument);
    CHECK(reflection_scheme_from_string(to_string(ReflectionScheme::Projection)) == ReflectionScheme::Projection);
  }

  TEST_CASE("paths stay non-negative and are reproducible") {
    for (ReflectionScheme s : {ReflectionScheme::Mirror, ReflectionScheme::Projection}) {
      DiffusionConfig cfg = exp1_config(200000, 5e-3);
      cfg.scheme = s;
      const DiffusionRun a = simulate_rbm(cfg);
      const DiffusionRun b = simulate_rbm(cfg);
      CHECK(a.min_state >= 0.0);
      CHECK(a.hist.weight == b.hist.weight);
      CHECK(a.reflection_total == b.reflection_total);
      const DiffusionRun c = simulate_rbm(cfg, 1);
      CHECK(a.hist.weight != c.hist.weight);
    }
  }

  TEST_CASE("regulator grows at rate -b") {
    const DiffusionRun r = simulate_rbm_paths(exp1_config(1000000, 1e-3), 4);
    const double rate = r.reflection_total / (static_cast<double>(r.samples) * r.dt);
    CHECK(rate == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("complementarity proxy shrinks with the step") {
    DiffusionConfig coarse = exp1_config(200000, 0.05);
    DiffusionConfig fine = exp1_config(2000000, 1e-3);
    coarse.eps = fine.eps = 0.2;
    const double pc = simulate_rbm(coarse).complementarity_proxy();
    const double pf = simulate_rbm(fine).complementarity_proxy();
    CHECK(pf < pc);
    CHECK(pf <= 1e-3);
  }

  TEST_CASE("short run is close to the stationary law") {
    const LimitDensity h(fixtures::single_region(), fixtures::expo(), fixtures::expo());
    DiffusionConfig cfg = exp1_config(1000000, 1e-3);
    cfg.coeffs = coefficients_from(h);
    const DiffusionRun r = simulate_rbm_paths(cfg, 4);
    CHECK(ks_distance(step_cdf(r.hist), h) <= 0.05);
  }

  TEST_CASE("projection reflection is biased towards zero") {
    const LimitDensity h(fixtures::single_region(), fixtures::expo(), fixtures::expo());
    DiffusionConfig cfg = exp1_config(1000000, 1e-2);
    cfg.coeffs = coefficients_from(h);
    const DiffusionRun m = simulate_rbm_paths(cfg, 2);
    cfg.scheme = ReflectionScheme::Projection;
    const DiffusionRun p = simulate_rbm_paths(cfg, 2);
    // projection piles mass on the first bin
    CHECK(p.hist.weight[0] > m.hist.weight[0]);
    CHECK(ks_distance(step_cdf(m.hist), h) < ks_distance(step_cdf(p.hist), h));
  }
}
