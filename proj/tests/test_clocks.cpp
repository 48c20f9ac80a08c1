#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sdq/clocks.hpp"
#include "support.hpp"

using namespace sdq;

namespace {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_SUITE("clocks") {
  TEST_CASE("theta zero gives zero clocks") {
    const ClockSolution s = solve_clocks(fixtures::expo(), fixtures::expo(), 0.0, 100);
    CHECK(s.eta == 0.0);
    CHECK(s.zeta == 0.0);
    CHECK(s.residual_eta == 0.0);
  }

  TEST_CASE("untruncated exponential clocks have closed forms") {
    ClockOptions opt;
    opt.untruncated = true;
    const ClockSolution s = solve_clocks(fixtures::expo(), fixtures::expo(), 0.1, 100, opt);
    CHECK(s.eta == doctest::Approx(std::expm1(0.1)).epsilon(1e-10));
    CHECK(s.eta == doctest::Approx(0.105170918).epsilon(1e-9));
    CHECK(s.zeta == doctest::Approx(std::expm1(-0.1)).epsilon(1e-10));
    CHECK(std::abs(s.residual_eta) <= 1e-12);
    CHECK(std::abs(s.residual_zeta) <= 1e-12);
  }

  TEST_CASE("truncated exponential clocks match quadrature references") {
    struct Row {
      int n;
      double eta, zeta;
    };
    // parameter 1/sqrt(n), cap sqrt(n)
    for (const Row& r : {Row{100, 0.10517276151310049831, -0.095172708664977247117},
                         Row{1000, 0.032128088996035955482, -0.031128005659926063515},
                         Row{10000, 0.010050167084168057542, -0.0099501662508319464261}}) {
      const ClockSolution s = solve_clocks(fixtures::expo(), fixtures::expo(), 1.0 / std::sqrt(r.n), r.n);
      CAPTURE(r.n);
      CHECK(s.eta == doctest::Approx(r.eta).epsilon(1e-11));
      CHECK(s.zeta == doctest::Approx(r.zeta).epsilon(1e-11));
      CHECK(std::abs(s.residual_eta) <= 1e-12);
      CHECK(std::abs(s.residual_zeta) <= 1e-12);
    }
  }

  TEST_CASE("residuals are tiny for every kind and sign") {
    const std::vector<RenewalSpec> kinds{fixtures::expo(), make_renewal(RenewalKind::Erlang, {.k = 4}),
                                         make_renewal(RenewalKind::HyperExponential, {.p = 0.2, .r1 = 0.3, .r2 = 4.0}),
                                         make_renewal(RenewalKind::Uniform, {.half_width = 0.5}),
                                         make_renewal(RenewalKind::Deterministic)};
    for (const RenewalSpec& a : kinds)
      for (int n : {4, 100, 10000})
        for (double th : {-0.9, -0.2, 0.05, 0.4, 1.0}) {
          if (std::abs(th) > 0.5 * std::sqrt(n)) continue;
          const ClockSolution s = solve_clocks(a, a, th, n);
          CAPTURE(to_string(a.kind()));
          CAPTURE(n);
          CAPTURE(th);
          CHECK(std::abs(s.residual_eta) <= 1e-12);
          CHECK(std::abs(s.residual_zeta) <= 1e-12);
        }
  }

  TEST_CASE("clocks are monotone in theta") {
    double pe = -1e9, pz = 1e9;
    for (double th = -2.0; th <= 2.0; th += 0.25) {
      const ClockSolution s = solve_clocks(fixtures::expo(), make_renewal(RenewalKind::Erlang, {.k = 2}), th, 100);
      CHECK(s.eta > pe);
      CHECK(s.zeta < pz);
      pe = s.eta;
      pz = s.zeta;
    }
  }

  TEST_CASE("deterministic clocks solve exactly") {
    const RenewalSpec d = make_renewal(RenewalKind::Deterministic);
    const auto [re, rz] = expansion_residual(d, d, 1.0, 100);
    CHECK(re <= 1e-15);
    CHECK(rz <= 1e-15);
  }

  TEST_CASE("second-order expansion error decays like n^-3/2") {
    const std::vector<int> ns{100, 1000, 10000};
    std::vector<double> x, ye, yz;
    for (int n : ns) {
      const auto [re, rz] = expansion_residual(fixtures::expo(), fixtures::expo(), 1.0, n);
      x.push_back(n);
      ye.push_back(re);
      yz.push_back(rz);
    }
    CHECK(ye[0] == doctest::Approx(1.7e-4).epsilon(0.05));
    CHECK(ye[2] == doctest::Approx(1.67e-7).epsilon(0.05));
    CHECK(std::abs(log_log_slope(x, ye) + 1.5) <= 0.2);
    CHECK(std::abs(log_log_slope(x, yz) + 1.5) <= 0.2);
  }

  TEST_CASE("fitted constants bound the clocks inside the radius") {
    const RenewalSpec a = fixtures::expo();
    const RenewalSpec s = make_renewal(RenewalKind::HyperExponential, {.p = 0.3, .r1 = 0.5, .r2 = 2.0});
    const ClockConstants c = fit_clock_constants(a, s, {16, 100, 400}, {-2.0, -1.0, 1.0, 2.0});
    CHECK(c.d_A > 0.0);
    CHECK(c.d_S > 0.0);
    for (int n : {16, 100, 400})
      for (double th : {-1.5, -0.5, 0.3, 1.7}) {
        const ClockSolution sol = solve_clocks(a, s, th, n);
        const double rn = std::sqrt(n);
        CHECK(std::abs(sol.eta) <= c.d_A * std::abs(th) / rn + 1e-15);
        CHECK(std::abs(sol.zeta) <= c.d_S * std::abs(th) / rn + 1e-15);
      }
  }

  TEST_CASE("test factor tends to one") {
    double prev = 1e9;
    for (int n : {100, 1000, 10000, 100000}) {
      const ClockSolution s = solve_clocks(fixtures::expo(), fixtures::expo(), 1.0 / std::sqrt(n), n);
      const double gap = std::abs(test_factor(s, 2.0, 3.0) - 1.0);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-2);
  }

  TEST_CASE("theta outside the safe radius is rejected") {
    CHECK_THROWS_AS(solve_clocks(fixtures::expo(), fixtures::expo(), 6.0, 100), std::domain_error);
    CHECK_NOTHROW(solve_clocks(fixtures::expo(), fixtures::expo(), 5.0, 100));
    CHECK_THROWS_AS(solve_clocks(fixtures::expo(), fixtures::expo(), 1.0, 0), std::invalid_argument);
  }
}
