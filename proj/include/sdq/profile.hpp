#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdq/primitives.hpp"

namespace sdq {

struct RegionSpeeds {
  double lambda = 1.0;
  double mu = 1.0;
  double lambda_star = 0.0;
  double mu_star = 0.0;

  bool operator==(const RegionSpeeds&) const = default;
};

enum class ProfileRepresentation { MultiLevel, Tabular };

// Step speed functions in scaled units. Region 0 covers [0, levels[0]],
// region i covers (levels[i-1], levels[i]], the last region is the tail.
class SpeedProfile {
 public:
  SpeedProfile();  // one region, lambda = mu = 1, no drift
  SpeedProfile(std::vector<double> levels, std::vector<RegionSpeeds> regions,
               ProfileRepresentation representation = ProfileRepresentation::MultiLevel);

  static SpeedProfile single(const RegionSpeeds& r) { return SpeedProfile({}, {r}); }
  // Levels first, first+spacing, ... up to reach, regions cycling through `cycle`.
  static SpeedProfile periodic(double first_level, double spacing, const std::vector<RegionSpeeds>& cycle,
                               double reach);

  std::size_t region_index(double u) const;
  const RegionSpeeds& region_at(double u) const { return regions_[region_index(u)]; }
  double lambda(double u) const { return region_at(u).lambda; }
  double mu(double u) const { return region_at(u).mu; }
  double lambda_star(double u) const { return region_at(u).lambda_star; }
  double mu_star(double u) const { return region_at(u).mu_star; }

  const std::vector<double>& levels() const { return levels_; }
  const std::vector<RegionSpeeds>& regions() const { return regions_; }
  const RegionSpeeds& tail() const { return regions_.back(); }
  ProfileRepresentation representation() const { return representation_; }

  // lambda(u) == mu(u) everywhere, i.e. a heavy-traffic family
  bool balanced() const;

  bool operator==(const SpeedProfile&) const = default;

 private:
  std::vector<double> levels_;
  std::vector<RegionSpeeds> regions_;
  ProfileRepresentation representation_ = ProfileRepresentation::MultiLevel;
};

struct Speeds {
  double arrival;
  double service;
};

struct DriftFields {
  double b;
  double sigma2;
  double beta;
};

class ScaledSystem {
 public:
  ScaledSystem(int n, SpeedProfile profile, RenewalSpec arrival, RenewalSpec service);

  int n() const { return n_; }
  double sqrt_n() const { return sqrt_n_; }
  const SpeedProfile& profile() const { return profile_; }
  const RenewalSpec& arrival() const { return arrival_; }
  const RenewalSpec& service() const { return service_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Speeds speeds_at(std::int64_t ell) const;
  // q = floor(sqrt(n) x), tolerant to round-off in the product
  std::int64_t level_index(double x) const;
  // integer queue length whose step (ell-1, ell] contains sqrt(n) u
  std::int64_t lattice_cell(double u) const;

 private:
  int n_;
  double sqrt_n_;
  SpeedProfile profile_;
  RenewalSpec arrival_;
  RenewalSpec service_;
  std::vector<std::string> warnings_;
};

DriftFields hat_fields(const ScaledSystem& sys, double u);
DriftFields limit_fields(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service,
                         double u);

struct StabilityReport {
  double gamma_inf;
  std::optional<double> b_inf;  // none when the tail is not balanced
  bool stable;
  bool ht_stable;
};

StabilityReport stability_report(const ScaledSystem& sys);

std::string to_string(ProfileRepresentation r);

}  // namespace sdq
