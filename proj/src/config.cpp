#include "sdq/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace sdq {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where.empty() ? "config" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

std::string path(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double get_number(const json& j, const std::string& where, const std::string& key, double def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path(where, key), "expected a number");
  return v.get<double>();
}

double require_number(const json& j, const std::string& where, const std::string& key) {
  if (!j.contains(key)) fail(path(where, key), "missing");
  return get_number(j, where, key, 0.0);
}

std::int64_t get_int(const json& j, const std::string& where, const std::string& key, std::int64_t def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path(where, key), "expected an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const json& j, const std::string& where, const std::string& key, bool def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(path(where, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& where, const std::string& key, const std::string& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_string()) fail(path(where, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& where, const std::string& key,
                                const std::vector<double>& def) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_array()) fail(path(where, key), "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path(where, key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

RegionSpeeds parse_region(const json& j, const std::string& where) {
  check_keys(j, where, {"lambda", "mu", "lambda_star", "mu_star"});
  RegionSpeeds r;
  r.lambda = require_number(j, where, "lambda");
  r.mu = require_number(j, where, "mu");
  r.lambda_star = get_number(j, where, "lambda_star", 0.0);
  r.mu_star = get_number(j, where, "mu_star", 0.0);
  return r;
}

json region_json(const RegionSpeeds& r) {
  return json{{"lambda", r.lambda}, {"mu", r.mu}, {"lambda_star", r.lambda_star}, {"mu_star", r.mu_star}};
}

SpeedProfile parse_model(const json& j) {
  if (!j.contains("regions")) fail("regions", "missing");
  if (!j.at("regions").is_array() || j.at("regions").empty()) fail("regions", "expected a non-empty array");
  std::vector<RegionSpeeds> regions;
  for (std::size_t i = 0; i < j.at("regions").size(); ++i)
    regions.push_back(parse_region(j.at("regions")[i], "regions[" + std::to_string(i) + "]"));
  const std::vector<double> levels = get_numbers(j, "", "levels", {});
  const std::string rep = get_string(j, "", "representation", "multilevel");
  ProfileRepresentation r;
  if (rep == "multilevel")
    r = ProfileRepresentation::MultiLevel;
  else if (rep == "tabular")
    r = ProfileRepresentation::Tabular;
  else
    fail("representation", "expected 'multilevel' or 'tabular'");
  try {
    return SpeedProfile(levels, regions, r);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

RenewalSpec parse_renewal(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const std::string kind_name = get_string(j, where, "kind", "");
  if (kind_name.empty()) fail(path(where, "kind"), "missing");
  RenewalKind kind;
  try {
    kind = renewal_kind_from_string(kind_name);
  } catch (const std::invalid_argument& e) {
    fail(path(where, "kind"), e.what());
  }
  RenewalParams p;
  switch (kind) {
    case RenewalKind::Exponential:
    case RenewalKind::Deterministic:
      check_keys(j, where, {"kind"});
      break;
    case RenewalKind::Erlang:
      check_keys(j, where, {"kind", "k"});
      p.k = static_cast<int>(get_int(j, where, "k", 2));
      break;
    case RenewalKind::HyperExponential:
      check_keys(j, where, {"kind", "p", "r1", "r2"});
      p.p = require_number(j, where, "p");
      p.r1 = require_number(j, where, "r1");
      p.r2 = require_number(j, where, "r2");
      break;
    case RenewalKind::Uniform:
      check_keys(j, where, {"kind", "half_width"});
      p.half_width = require_number(j, where, "half_width");
      break;
  }
  try {
    return make_renewal(kind, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + "." + e.what());
  }
}

json to_json(const RenewalSpec& r) {
  json j{{"kind", to_string(r.kind())}};
  const RenewalParams& p = r.params();
  switch (r.kind()) {
    case RenewalKind::Erlang: j["k"] = p.k; break;
    case RenewalKind::HyperExponential:
      j["p"] = p.p;
      j["r1"] = p.r1;
      j["r2"] = p.r2;
      break;
    case RenewalKind::Uniform: j["half_width"] = p.half_width; break;
    default: break;
  }
  return j;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "",
             {"levels", "regions", "representation", "arrival", "service", "n_list", "events", "burn_in_fraction",
              "seed", "replications", "probes", "outputs", "allow_unstable", "thetas", "clocks_untruncated", "source",
              "fluid", "diffusion", "limit"});
  ExperimentConfig c;
  c.model = parse_model(j);
  if (j.contains("arrival")) c.arrival = parse_renewal(j.at("arrival"), "arrival");
  if (j.contains("service")) c.service = parse_renewal(j.at("service"), "service");
  if (c.arrival.scv() + c.service.scv() <= 0.0) fail("arrival/service", "both deterministic, zero limit variance");

  if (j.contains("n_list")) {
    const json& v = j.at("n_list");
    if (!v.is_array() || v.empty()) fail("n_list", "expected a non-empty array of integers");
    c.n_list.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 1)
        fail("n_list[" + std::to_string(i) + "]", "expected a positive integer");
      c.n_list.push_back(v[i].get<int>());
    }
  }
  c.events = get_int(j, "", "events", c.events);
  if (c.events < 10000) fail("events", "must be at least 10000");
  c.burn_in_fraction = get_number(j, "", "burn_in_fraction", c.burn_in_fraction);
  if (!(c.burn_in_fraction >= 0.0 && c.burn_in_fraction < 1.0)) fail("burn_in_fraction", "must lie in [0,1)");
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  c.replications = static_cast<int>(get_int(j, "", "replications", c.replications));
  if (c.replications < 1) fail("replications", "must be at least 1");
  c.probes = get_numbers(j, "", "probes", {});
  for (double x : c.probes)
    if (!(x >= 0.0)) fail("probes", "scaled levels must be non-negative");
  c.outputs = get_string(j, "", "outputs", c.outputs);
  c.allow_unstable = get_bool(j, "", "allow_unstable", false);
  c.thetas = get_numbers(j, "", "thetas", c.thetas);
  c.clocks_untruncated = get_bool(j, "", "clocks_untruncated", false);
  c.source = get_string(j, "", "source", c.source);
  if (c.source != "auto" && c.source != "oracle" && c.source != "simulation")
    fail("source", "expected 'auto', 'oracle' or 'simulation'");

  if (j.contains("fluid")) {
    const json& f = j.at("fluid");
    check_keys(f, "fluid", {"y", "t_grid"});
    c.fluid.y = get_number(f, "fluid", "y", c.fluid.y);
    c.fluid.t_grid = get_numbers(f, "fluid", "t_grid", {});
  }
  if (!(c.fluid.y >= 1.0)) fail("fluid.y", "must be >= 1");
  for (std::size_t i = 0; i < c.fluid.t_grid.size(); ++i)
    if (!(c.fluid.t_grid[i] >= 0.0) || (i > 0 && c.fluid.t_grid[i] < c.fluid.t_grid[i - 1]))
      fail("fluid.t_grid", "must be non-negative and non-decreasing");

  if (j.contains("diffusion")) {
    const json& d = j.at("diffusion");
    check_keys(d, "diffusion", {"dt", "steps", "burn_in_fraction", "scheme", "bin_width", "hist_max", "paths"});
    DiffusionSettings& s = c.diffusion;
    s.dt = get_number(d, "diffusion", "dt", s.dt);
    s.steps = get_int(d, "diffusion", "steps", s.steps);
    s.burn_in_fraction = get_number(d, "diffusion", "burn_in_fraction", s.burn_in_fraction);
    s.scheme = get_string(d, "diffusion", "scheme", s.scheme);
    s.bin_width = get_number(d, "diffusion", "bin_width", s.bin_width);
    s.hist_max = get_number(d, "diffusion", "hist_max", s.hist_max);
    s.paths = static_cast<int>(get_int(d, "diffusion", "paths", s.paths));
  }
  {
    const DiffusionSettings& s = c.diffusion;
    if (!(s.dt > 0.0 && s.dt < 0.1)) fail("diffusion.dt", "must lie in (0, 0.1)");
    if (s.steps < 0) fail("diffusion.steps", "must be non-negative");
    if (!(s.burn_in_fraction >= 0.0 && s.burn_in_fraction < 1.0)) fail("diffusion.burn_in_fraction", "must lie in [0,1)");
    if (s.scheme != "mirror" && s.scheme != "projection") fail("diffusion.scheme", "expected 'mirror' or 'projection'");
    if (!(s.bin_width > 0.0)) fail("diffusion.bin_width", "must be positive");
    if (!(s.hist_max > s.bin_width)) fail("diffusion.hist_max", "must exceed bin_width");
    if (s.paths < 1) fail("diffusion.paths", "must be at least 1");
  }

  if (j.contains("limit")) {
    const json& l = j.at("limit");
    check_keys(l, "limit", {"grid_step", "grid_max"});
    c.limit.grid_step = get_number(l, "limit", "grid_step", c.limit.grid_step);
    c.limit.grid_max = get_number(l, "limit", "grid_max", c.limit.grid_max);
  }
  if (!(c.limit.grid_step > 0.0)) fail("limit.grid_step", "must be positive");
  if (!(c.limit.grid_max >= 0.0)) fail("limit.grid_max", "must be non-negative");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json regions = json::array();
  for (const RegionSpeeds& r : c.model.regions()) regions.push_back(region_json(r));
  json j;
  j["levels"] = c.model.levels();
  j["regions"] = regions;
  j["representation"] = to_string(c.model.representation());
  j["arrival"] = to_json(c.arrival);
  j["service"] = to_json(c.service);
  j["n_list"] = c.n_list;
  j["events"] = c.events;
  j["burn_in_fraction"] = c.burn_in_fraction;
  j["seed"] = c.seed;
  j["replications"] = c.replications;
  j["probes"] = c.probes;
  j["outputs"] = c.outputs;
  j["allow_unstable"] = c.allow_unstable;
  j["thetas"] = c.thetas;
  j["clocks_untruncated"] = c.clocks_untruncated;
  j["source"] = c.source;
  j["fluid"] = {{"y", c.fluid.y}, {"t_grid", c.fluid.t_grid}};
  j["diffusion"] = {{"dt", c.diffusion.dt},
                    {"steps", c.diffusion.steps},
                    {"burn_in_fraction", c.diffusion.burn_in_fraction},
                    {"scheme", c.diffusion.scheme},
                    {"bin_width", c.diffusion.bin_width},
                    {"hist_max", c.diffusion.hist_max},
                    {"paths", c.diffusion.paths}};
  j["limit"] = {{"grid_step", c.limit.grid_step}, {"grid_max", c.limit.grid_max}};
  return j;
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(file + ": " + e.what());
  }
  return parse_config(j);
}

std::string config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sdq
