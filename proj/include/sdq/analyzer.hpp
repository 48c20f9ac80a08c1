#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sdq/law.hpp"
#include "sdq/profile.hpp"
#include "sdq/simulator.hpp"

namespace sdq {

class NotIntegrableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// h(u) = exp(int_0^u beta) / (C sigma^2(u)) for the limit fields of a profile.
class LimitDensity {
 public:
  LimitDensity(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service);

  double b(double u) const;
  double sigma2(double u) const;
  double beta(double u) const;
  double integrated_beta(double u) const;
  double h(double u) const;        // left-continuous at levels
  double h_right(double u) const;  // right limit
  double cdf(double u) const;
  double normalizer() const { return C_; }
  double tail_beta() const { return beta_.back(); }
  // -int b dnu, the limit of mu(0) sqrt(n) P[L=0]
  double boundary_target() const;
  // u beyond which the mass is below `tail`
  double upper_quantile(double tail) const;

  bool closed_form() const { return profile_.representation() == ProfileRepresentation::MultiLevel; }
  const SpeedProfile& profile() const { return profile_; }
  double sigma2_A() const { return sA2_; }
  double sigma2_S() const { return sS2_; }

 private:
  double unnormalized(std::size_t piece, double u) const;
  double piece_mass(std::size_t piece, double from, double to) const;

  SpeedProfile profile_;
  double sA2_, sS2_;
  std::vector<double> start_;  // 0, l_1, ..., l_K
  std::vector<double> beta_, sig2_, drift_;
  std::vector<double> B_;      // int_0^{start_i} beta
  std::vector<double> cum_;    // unnormalized mass below start_i
  std::vector<double> mass_;   // unnormalized mass of piece i
  double C_ = 0.0;
};

// Adaptive Simpson on [a, b], absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

struct BirthDeathLaw {
  int n = 1;
  std::vector<double> mass;
  std::int64_t truncation = 0;

  LatticeLaw lattice() const { return LatticeLaw{n, mass}; }
};

BirthDeathLaw birth_death_oracle(const ScaledSystem& sys);

// Right-continuous step CDF known at points x (F[i] = F(x[i])). Atomic laws jump at x;
// binned laws are only known at the bin edges.
struct StepCdf {
  std::vector<double> x;
  std::vector<double> F;
  bool atomic = true;
};

StepCdf step_cdf(const LatticeLaw& law);
StepCdf step_cdf(const Histogram& hist);

inline constexpr int kKsGrid = 10000;

double ks_distance(const StepCdf& a, const std::function<double(double)>& cdf, double grid_max, int grid = kKsGrid);
double ks_distance(const StepCdf& a, const LimitDensity& target, int grid = kKsGrid);
double ks_distance(const StepCdf& a, const StepCdf& b);
double ks_distance(const std::function<double(double)>& F, const std::function<double(double)>& G, double grid_max,
                   int grid = kKsGrid);

// h(level+)/h(level-) from log-linear fits of the density on each side of the level
std::optional<double> estimate_jump_ratio(const LatticeLaw& law, double level, double window);
std::optional<double> estimate_jump_ratio(const Histogram& hist, double level, double window);

enum class StudySource { Oracle, Simulation };

struct StudyOptions {
  StudySource source = StudySource::Oracle;
  RunOptions run;
  int replications = 1;
  double jump_window = 0.2;
};

struct StudyRow {
  int n = 0;
  double ks = 0.0;
  double boundary_mass = 0.0;  // sqrt(n) P[L=0]
  double boundary_lhs = 0.0;   // mu(0) sqrt(n) P[L=0]
  std::optional<double> jump_ratio;  // at the first level, if any
};

struct StudyTable {
  std::vector<StudyRow> rows;
  std::optional<bool> monotone;  // strictly decreasing KS; unset for one row
  bool conjecture = false;       // tabular profiles: comparison not covered by theory
};

StudyTable convergence_study(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service,
                             const std::vector<int>& n_list, const LimitDensity& target, const StudyOptions& options);
StudyTable convergence_study_serial(const SpeedProfile& profile, const RenewalSpec& arrival,
                                    const RenewalSpec& service, const std::vector<int>& n_list,
                                    const LimitDensity& target, const StudyOptions& options);

}  // namespace sdq
