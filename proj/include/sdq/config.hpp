#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdq/primitives.hpp"
#include "sdq/profile.hpp"

namespace sdq {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FluidSettings {
  double y = 1e4;
  std::vector<double> t_grid;  // empty: 0, 0.1, ..., 6

  bool operator==(const FluidSettings&) const = default;
};

struct DiffusionSettings {
  double dt = 1e-3;
  std::int64_t steps = 10000000;
  double burn_in_fraction = 0.1;
  std::string scheme = "mirror";
  double bin_width = 1e-3;
  double hist_max = 50.0;
  int paths = 1;

  bool operator==(const DiffusionSettings&) const = default;
};

struct LimitSettings {
  double grid_step = 0.01;
  double grid_max = 0.0;  // 0: up to where the tail mass drops below 1e-6

  bool operator==(const LimitSettings&) const = default;
};

struct ExperimentConfig {
  SpeedProfile model;
  RenewalSpec arrival;
  RenewalSpec service;
  std::vector<int> n_list{100};
  std::int64_t events = 1000000;
  double burn_in_fraction = 0.1;
  std::uint64_t seed = 1;
  int replications = 1;
  std::vector<double> probes;  // empty: default probe set
  std::string outputs = "out";
  bool allow_unstable = false;
  std::vector<double> thetas{0.0, 0.5, 1.0};
  bool clocks_untruncated = false;
  std::string source = "auto";  // compare: oracle | simulation | auto
  FluidSettings fluid;
  DiffusionSettings diffusion;
  LimitSettings limit;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
nlohmann::json to_json(const RenewalSpec& r);
RenewalSpec parse_renewal(const nlohmann::json& j, const std::string& where);
ExperimentConfig load_config(const std::string& path);

// FNV-1a of the canonical dump, hex
std::string config_hash(const nlohmann::json& j);

}  // namespace sdq
