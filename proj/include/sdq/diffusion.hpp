#pragma once

#include <cstdint>
#include <vector>

#include "sdq/analyzer.hpp"
#include "sdq/law.hpp"

namespace sdq {

enum class ReflectionScheme { Mirror, Projection };

// Step drift and volatility, left-continuous like the speed profile.
struct DiffusionCoefficients {
  std::vector<double> levels;
  std::vector<double> drift;  // one more than levels
  std::vector<double> sigma;

  std::size_t region(double z) const;
};

DiffusionCoefficients coefficients_from(const LimitDensity& density);
DiffusionCoefficients constant_coefficients(double b, double sigma2);

struct DiffusionConfig {
  DiffusionCoefficients coeffs;
  double dt = 1e-3;
  std::int64_t steps = 0;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 1;
  ReflectionScheme scheme = ReflectionScheme::Mirror;
  double bin_width = 1e-3;
  double hist_max = 50.0;
  double eps = 0.01;  // interior threshold of the complementarity proxy
  double z0 = 0.0;
};

struct DiffusionRun {
  Histogram hist;
  std::uint64_t samples = 0;
  double dt = 0.0;
  double reflection_total = 0.0;     // sum of regulator increments after burn-in
  double reflection_interior = 0.0;  // the part taken from states above eps
  double min_state = 0.0;

  // time average of 1(Z > eps) dY
  double complementarity_proxy() const {
    return samples > 0 ? reflection_interior / (static_cast<double>(samples) * dt) : 0.0;
  }
  void merge(const DiffusionRun& other);
};

DiffusionRun simulate_rbm(const DiffusionConfig& config, std::uint64_t stream = 0);

// independent paths on streams 0..paths-1, merged in order
DiffusionRun simulate_rbm_paths(const DiffusionConfig& config, int paths);
DiffusionRun simulate_rbm_paths_serial(const DiffusionConfig& config, int paths);

std::string to_string(ReflectionScheme s);
ReflectionScheme reflection_scheme_from_string(const std::string& name);

}  // namespace sdq
