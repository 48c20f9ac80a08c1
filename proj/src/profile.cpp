#include "sdq/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdq {

namespace {

void check_region(const RegionSpeeds& r, std::size_t i) {
  const std::string where = "regions[" + std::to_string(i) + "].";
  if (!(r.lambda > 0.0 && std::isfinite(r.lambda))) throw std::invalid_argument(where + "lambda: must be positive");
  if (!(r.mu > 0.0 && std::isfinite(r.mu))) throw std::invalid_argument(where + "mu: must be positive");
  if (!std::isfinite(r.lambda_star)) throw std::invalid_argument(where + "lambda_star: must be finite");
  if (!std::isfinite(r.mu_star)) throw std::invalid_argument(where + "mu_star: must be finite");
}

}  // namespace

SpeedProfile::SpeedProfile() : regions_{RegionSpeeds{}} {}

SpeedProfile::SpeedProfile(std::vector<double> levels, std::vector<RegionSpeeds> regions,
                           ProfileRepresentation representation)
    : levels_(std::move(levels)), regions_(std::move(regions)), representation_(representation) {
  if (regions_.size() != levels_.size() + 1)
    throw std::invalid_argument("regions: need exactly one more region than levels (the last is the tail)");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!(levels_[i] > 0.0 && std::isfinite(levels_[i])))
      throw std::invalid_argument("levels[" + std::to_string(i) + "]: must be positive and finite");
    if (i > 0 && !(levels_[i] > levels_[i - 1]))
      throw std::invalid_argument("levels[" + std::to_string(i) + "]: levels must be strictly increasing");
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) check_region(regions_[i], i);
}

SpeedProfile SpeedProfile::periodic(double first_level, double spacing, const std::vector<RegionSpeeds>& cycle,
                                    double reach) {
  if (cycle.empty()) throw std::invalid_argument("periodic: empty region cycle");
  if (!(first_level > 0.0) || !(spacing > 0.0)) throw std::invalid_argument("periodic: levels must be positive");
  if (!(reach >= first_level)) throw std::invalid_argument("periodic: reach below the first level");
  std::vector<double> levels;
  std::vector<RegionSpeeds> regions;
  for (std::size_t i = 0;; ++i) {
    const double l = first_level + spacing * static_cast<double>(i);
    if (l > reach) break;
    levels.push_back(l);
    regions.push_back(cycle[i % cycle.size()]);
  }
  regions.push_back(cycle[levels.size() % cycle.size()]);
  return SpeedProfile(std::move(levels), std::move(regions));
}

std::size_t SpeedProfile::region_index(double u) const {
  return static_cast<std::size_t>(std::lower_bound(levels_.begin(), levels_.end(), u) - levels_.begin());
}

bool SpeedProfile::balanced() const {
  return std::all_of(regions_.begin(), regions_.end(), [](const RegionSpeeds& r) { return r.lambda == r.mu; });
}

ScaledSystem::ScaledSystem(int n, SpeedProfile profile, RenewalSpec arrival, RenewalSpec service)
    : n_(n), sqrt_n_(std::sqrt(static_cast<double>(n))), profile_(std::move(profile)),
      arrival_(std::move(arrival)), service_(std::move(service)) {
  if (n < 1) throw std::invalid_argument("n: must be a positive integer");
  const double sa = arrival_.scv(), ss = service_.scv();
  if (sa + ss <= 0.0) throw std::invalid_argument("arrival/service: both deterministic, the limit variance vanishes");
  if (sa == 0.0 || ss == 0.0) warnings_.push_back("one primitive is deterministic; ties between clocks are possible");
  for (std::size_t i = 0; i < profile_.regions().size(); ++i) {
    const RegionSpeeds& r = profile_.regions()[i];
    if (!(r.lambda + r.lambda_star / sqrt_n_ > 0.0) || !(r.mu + r.mu_star / sqrt_n_ > 0.0))
      throw std::invalid_argument("regions[" + std::to_string(i) + "]: speeds of the n=" + std::to_string(n) +
                                  " system are not positive");
  }
  if (!profile_.balanced())
    warnings_.push_back("lambda != mu in some region; heavy-traffic limit fields do not apply");
}

Speeds ScaledSystem::speeds_at(std::int64_t ell) const {
  if (ell < 0) throw std::invalid_argument("speeds_at: negative queue length");
  const double u = static_cast<double>(ell) / sqrt_n_;
  const RegionSpeeds& r = profile_.region_at(u);
  const double lam = r.lambda + r.lambda_star / sqrt_n_;
  if (ell == 0) return {lam, lam};
  return {lam, r.mu + r.mu_star / sqrt_n_};
}

std::int64_t ScaledSystem::level_index(double x) const {
  const double v = sqrt_n_ * x;
  return static_cast<std::int64_t>(std::floor(v + 1e-9 * std::max(1.0, std::abs(v))));
}

std::int64_t ScaledSystem::lattice_cell(double u) const {
  const double v = sqrt_n_ * u;
  if (v <= 0.0) return 0;
  return static_cast<std::int64_t>(std::ceil(v - 1e-9 * std::max(1.0, v)));
}

DriftFields hat_fields(const ScaledSystem& sys, double u) {
  if (u < 0.0) throw std::invalid_argument("hat_fields: u must be non-negative");
  const Speeds s = sys.speeds_at(sys.lattice_cell(u));
  const double b = sys.sqrt_n() * (s.arrival - s.service);
  const double sigma2 = s.arrival * sys.arrival().scv() + s.service * sys.service().scv();
  return {b, sigma2, 2.0 * b / sigma2};
}

DriftFields limit_fields(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service,
                         double u) {
  const RegionSpeeds& r = profile.region_at(u);
  const double b = r.lambda_star - r.mu_star;
  const double sigma2 = r.lambda * arrival.scv() + r.mu * service.scv();
  return {b, sigma2, 2.0 * b / sigma2};
}

StabilityReport stability_report(const ScaledSystem& sys) {
  const RegionSpeeds& t = sys.profile().tail();
  StabilityReport rep{};
  rep.gamma_inf = (t.lambda + t.lambda_star / sys.sqrt_n()) - (t.mu + t.mu_star / sys.sqrt_n());
  rep.stable = rep.gamma_inf < 0.0;
  if (t.lambda == t.mu) rep.b_inf = t.lambda_star - t.mu_star;
  rep.ht_stable = rep.b_inf.has_value() && *rep.b_inf < 0.0;
  return rep;
}

std::string to_string(ProfileRepresentation r) {
  return r == ProfileRepresentation::Tabular ? "tabular" : "multilevel";
}

}  // namespace sdq
