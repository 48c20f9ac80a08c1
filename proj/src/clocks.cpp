#include "sdq/clocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdq {

namespace {

constexpr double kTol = 1e-13;

double log_transform(const RenewalSpec& spec, double s, double cap) {
  const double L = truncated_laplace(spec, s, cap);
  return std::log(L);  // +inf when divergent
}

}  // namespace

double solve_clock_equation(const RenewalSpec& spec, double target_log, double cap) {
  if (target_log == 0.0) return 0.0;
  auto g = [&](double s) { return log_transform(spec, s, cap) - target_log; };

  // g is decreasing; want g(lo) > 0 > g(hi)
  double lo = -50.0, hi = 50.0;
  double glo = g(lo), ghi = g(hi);
  while (!(glo > 0.0) && lo > -1e6) {
    lo *= 2.0;
    glo = g(lo);
  }
  while (!(ghi < 0.0) && hi < 1e6) {
    hi *= 2.0;
    ghi = g(hi);
  }
  if (!(glo > 0.0) || !(ghi < 0.0)) throw std::runtime_error("clock equation: target outside the transform range");

  double s = 0.0;
  double gs = g(s);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(std::expm1(gs)) <= kTol) break;
    if (gs > 0.0)
      lo = s;
    else
      hi = s;
    double next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(gs)) {
      const double L0 = truncated_laplace_moment(spec, s, cap, 0);
      const double L1 = truncated_laplace_moment(spec, s, cap, 1);
      const double dg = -L1 / L0;
      if (dg < 0.0 && std::isfinite(dg)) next = s - gs / dg;
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == s) break;
    s = next;
    gs = g(s);
    if (hi - lo <= 1e-16 * (1.0 + std::abs(s))) break;
  }
  return s;
}

ClockSolution solve_clocks(const RenewalSpec& arrival, const RenewalSpec& service, double theta, int n,
                           const ClockOptions& options) {
  if (n < 1) throw std::invalid_argument("solve_clocks: n must be >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  if (!(std::abs(theta) <= options.radius * rn))
    throw std::domain_error("solve_clocks: |theta| outside the safe radius " + std::to_string(options.radius) +
                            " * sqrt(n)");
  const double cap = options.untruncated ? kNoCap : rn;
  ClockSolution sol;
  sol.theta = theta;
  sol.n = n;
  if (theta == 0.0) return sol;
  sol.eta = solve_clock_equation(arrival, -theta, cap);
  sol.zeta = solve_clock_equation(service, theta, cap);
  sol.residual_eta = std::expm1(log_transform(arrival, sol.eta, cap) + theta);
  sol.residual_zeta = std::expm1(log_transform(service, sol.zeta, cap) - theta);
  return sol;
}

std::pair<double, double> expansion_residual(const RenewalSpec& arrival, const RenewalSpec& service, double theta,
                                             int n) {
  const double nn = static_cast<double>(n);
  const double th = theta / std::sqrt(nn);
  const ClockSolution sol = solve_clocks(arrival, service, th, n);
  const double re = std::abs(sol.eta - th - arrival.scv() * theta * theta / (2.0 * nn));
  const double rz = std::abs(sol.zeta + th - service.scv() * theta * theta / (2.0 * nn));
  return {re, rz};
}

double test_factor(const ClockSolution& sol, double v1, double v2) {
  const double cap = std::sqrt(static_cast<double>(sol.n));
  return std::exp(-sol.eta * std::min(v1, cap) - sol.zeta * std::min(v2, cap));
}

ClockConstants fit_clock_constants(const RenewalSpec& arrival, const RenewalSpec& service,
                                   const std::vector<int>& n_list, const std::vector<double>& thetas) {
  ClockConstants c{0.0, 0.0};
  for (int n : n_list) {
    const double rn = std::sqrt(static_cast<double>(n));
    for (double th : thetas) {
      if (th == 0.0) continue;
      const ClockSolution sol = solve_clocks(arrival, service, th, n);
      c.d_A = std::max(c.d_A, rn * std::abs(sol.eta) / std::abs(th));
      c.d_S = std::max(c.d_S, rn * std::abs(sol.zeta) / std::abs(th));
    }
  }
  return c;
}

}  // namespace sdq
