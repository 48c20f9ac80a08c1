#pragma once

#include <utility>
#include <vector>

#include "sdq/primitives.hpp"

namespace sdq {

struct ClockSolution {
  double theta = 0.0;
  int n = 1;
  double eta = 0.0;
  double zeta = 0.0;
  double residual_eta = 0.0;   // e^{theta} E[e^{-eta T_A^c}] - 1
  double residual_zeta = 0.0;  // e^{-theta} E[e^{-zeta T_S^c}] - 1
};

struct ClockOptions {
  bool untruncated = false;  // cap = infinity instead of sqrt(n)
  double radius = 0.5;       // require |theta| <= radius * sqrt(n)
};

// s with log E[e^{-s (T ^ cap)}] = target_log
double solve_clock_equation(const RenewalSpec& spec, double target_log, double cap);

ClockSolution solve_clocks(const RenewalSpec& arrival, const RenewalSpec& service, double theta, int n,
                           const ClockOptions& options = {});

// |eta(theta/sqrt n) - theta/sqrt n - sA^2 theta^2/(2n)| and the zeta counterpart
std::pair<double, double> expansion_residual(const RenewalSpec& arrival, const RenewalSpec& service, double theta,
                                             int n);

// g(v) = exp(-eta (v1 ^ sqrt n) - zeta (v2 ^ sqrt n))
double test_factor(const ClockSolution& sol, double v1, double v2);

struct ClockConstants {
  double d_A;
  double d_S;
};

// sup over the grid of sqrt(n) |eta| / |theta| (resp. zeta); theta = 0 is skipped
ClockConstants fit_clock_constants(const RenewalSpec& arrival, const RenewalSpec& service,
                                   const std::vector<int>& n_list, const std::vector<double>& thetas);

}  // namespace sdq
