// sdq: command-line driver for the state-dependent queue experiments.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sdq/analyzer.hpp"
#include "sdq/clocks.hpp"
#include "sdq/config.hpp"
#include "sdq/diffusion.hpp"
#include "sdq/palm.hpp"
#include "sdq/replicate.hpp"
#include "sdq/report.hpp"
#include "sdq/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdq;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> events;
  std::optional<int> replications;
  std::vector<int> n;
  bool allow_unstable = false;
};

class Session {
 public:
  Session(std::string command, const Overrides& o) : command_(std::move(command)) {
    cfg_ = load_config(o.config);
    json j = to_json(cfg_);
    if (!o.out.empty()) j["outputs"] = o.out;
    if (o.seed) j["seed"] = *o.seed;
    if (o.events) j["events"] = *o.events;
    if (o.replications) j["replications"] = *o.replications;
    if (!o.n.empty()) j["n_list"] = o.n;
    if (o.allow_unstable) j["allow_unstable"] = true;
    cfg_ = parse_config(j);  // re-validate with the overrides applied
    fs::create_directories(cfg_.outputs);
  }

  const ExperimentConfig& cfg() const { return cfg_; }

  RunOptions run_options() const {
    RunOptions r;
    r.events = static_cast<std::uint64_t>(cfg_.events);
    r.burn_in_fraction = cfg_.burn_in_fraction;
    r.seed = cfg_.seed;
    r.allow_unstable = cfg_.allow_unstable;
    return r;
  }

  ScaledSystem system(int n) const {
    ScaledSystem sys(n, cfg_.model, cfg_.arrival, cfg_.service);
    for (const std::string& w : sys.warnings()) std::cerr << "warning: " << w << "\n";
    return sys;
  }

  void write(const std::string& name, const std::string& text) {
    write_text((fs::path(cfg_.outputs) / name).string(), text);
    outputs_.push_back(name);
  }

  void finish() {
    const std::string name = "manifest_" + command_ + ".json";
    write_text((fs::path(cfg_.outputs) / name).string(),
               manifest(command_, to_json(cfg_), cfg_.seed, outputs_).dump(2) + "\n");
    std::cout << command_ << ": wrote " << outputs_.size() << " files to " << cfg_.outputs << "\n";
  }

 private:
  std::string command_;
  ExperimentConfig cfg_;
  std::vector<std::string> outputs_;
};

std::vector<double> probes_of(const ExperimentConfig& c) {
  return c.probes.empty() ? default_probes(c.model) : c.probes;
}

std::string palm_table(const StationaryRun& run, const ScaledSystem& sys, const std::vector<double>& probes) {
  std::vector<PalmEstimate> H, D;
  for (double x : probes) {
    H.push_back(estimate_H(run.palm, sys, x));
    D.push_back(estimate_Delta(run.palm, run.law, sys, x));
  }
  return palm_csv(H, D);
}

void cmd_simulate(Session& s) {
  for (int n : s.cfg().n_list) {
    const ScaledSystem sys = s.system(n);
    const StationaryRun run = run_replications(sys, s.run_options(), s.cfg().replications);
    const std::string tag = "_n" + std::to_string(n);
    s.write("law" + tag + ".csv", law_csv(run.law.distribution()));
    s.write("law" + tag + ".json", law_json(run.law).dump(2) + "\n");
    s.write("palm" + tag + ".csv", palm_table(run, sys, probes_of(s.cfg())));
  }
}

void cmd_palm_report(Session& s) {
  for (int n : s.cfg().n_list) {
    const ScaledSystem sys = s.system(n);
    const StationaryRun run = run_replications(sys, s.run_options(), s.cfg().replications);
    const IntensityReport ir = intensity_identity_report(run.law, run.palm, sys);
    const BoundaryReport br = boundary_identity_report(run.law.distribution(), sys);
    json crossings = json::array();
    for (double x : probes_of(s.cfg())) {
      const std::int64_t q = sys.level_index(x);
      const CrossingBalance cb = level_crossing_balance(run.palm, q);
      crossings.push_back({{"x", x},
                           {"q", q},
                           {"arrivals_at_or_below", cb.arrivals_at_or_below},
                           {"departures_at_or_below", cb.departures_at_or_below},
                           {"std_error", cb.diff_std_error}});
    }
    const json report{{"n", n},
                      {"alpha_e", ir.alpha_e},
                      {"alpha_d", ir.alpha_d},
                      {"r1", ir.r1},
                      {"r1_bound", ir.r1_bound},
                      {"r2", ir.r2},
                      {"r3", ir.r3},
                      {"boundary", {{"lhs", br.lhs}, {"rhs", br.rhs}, {"rel_err", br.rel_err}}},
                      {"level_crossing", crossings},
                      {"max_arrival_Re_pre", run.palm.max_arrival_Re_pre},
                      {"max_departure_Rd_pre", run.palm.max_departure_Rd_pre}};
    const std::string tag = "_n" + std::to_string(n);
    s.write("palm" + tag + ".csv", palm_table(run, sys, probes_of(s.cfg())));
    s.write("palm_report" + tag + ".json", report.dump(2) + "\n");
  }
}

void cmd_limit(Session& s) {
  const LimitDensity h(s.cfg().model, s.cfg().arrival, s.cfg().service);
  const double top = s.cfg().limit.grid_max > 0.0 ? s.cfg().limit.grid_max : h.upper_quantile(1e-6);
  s.write("limit.csv", limit_csv(h, s.cfg().limit.grid_step, top));
  s.write("limit.json", limit_json(h, s.cfg().limit.grid_step, top).dump(2) + "\n");
}

void cmd_compare(Session& s) {
  const ExperimentConfig& c = s.cfg();
  const LimitDensity h(c.model, c.arrival, c.service);
  const bool exponential =
      c.arrival.kind() == RenewalKind::Exponential && c.service.kind() == RenewalKind::Exponential;
  StudyOptions opt;
  opt.source = StudySource::Simulation;
  if (c.source == "oracle" || (c.source == "auto" && exponential)) opt.source = StudySource::Oracle;
  opt.run = s.run_options();
  opt.replications = c.replications;
  for (int n : c.n_list) s.system(n);  // surface warnings once
  const StudyTable t = convergence_study(c.model, c.arrival, c.service, c.n_list, h, opt);
  s.write("compare.csv", study_csv(t));
  json summary{{"source", opt.source == StudySource::Oracle ? "oracle" : "simulation"},
               {"conjecture", t.conjecture},
               {"boundary_target", h.boundary_target()}};
  summary["monotone"] = t.monotone ? json(*t.monotone) : json(nullptr);
  s.write("compare.json", summary.dump(2) + "\n");
  if (t.conjecture) std::cerr << "note: tabular profile, the comparison is a conjecture check\n";
}

void cmd_diffusion(Session& s) {
  const ExperimentConfig& c = s.cfg();
  const LimitDensity h(c.model, c.arrival, c.service);
  DiffusionConfig d;
  d.coeffs = coefficients_from(h);
  d.dt = c.diffusion.dt;
  // like events, steps counts the burn-in
  d.burn_in = static_cast<std::int64_t>(
      std::floor(c.diffusion.burn_in_fraction * static_cast<double>(c.diffusion.steps)));
  d.steps = c.diffusion.steps - d.burn_in;
  d.seed = c.seed;
  d.scheme = reflection_scheme_from_string(c.diffusion.scheme);
  d.bin_width = c.diffusion.bin_width;
  d.hist_max = c.diffusion.hist_max;
  const DiffusionRun run = simulate_rbm_paths(d, c.diffusion.paths);
  json meta = histogram_json(run, c.seed);
  meta["scheme"] = c.diffusion.scheme;
  meta["ks_to_limit"] = ks_distance(step_cdf(run.hist), h);
  s.write("diffusion.csv", histogram_csv(run.hist));
  s.write("diffusion.json", meta.dump(2) + "\n");
}

void cmd_clocks(Session& s) {
  const ExperimentConfig& c = s.cfg();
  ClockOptions opt;
  opt.untruncated = c.clocks_untruncated;
  std::vector<ClockSolution> rows;
  for (int n : c.n_list)
    for (double th : c.thetas) rows.push_back(solve_clocks(c.arrival, c.service, th, n, opt));
  s.write("clocks.csv", clocks_csv(rows));
}

void cmd_fluid(Session& s) {
  const ExperimentConfig& c = s.cfg();
  std::vector<double> grid = c.fluid.t_grid;
  if (grid.empty())
    for (int i = 0; i <= 60; ++i) grid.push_back(0.1 * i);
  const ScaledSystem sys = s.system(c.n_list.front());
  const std::vector<double> L = run_fluid(sys, c.fluid.y, grid, c.seed);
  CsvWriter w({"t", "L_bar"});
  for (std::size_t i = 0; i < grid.size(); ++i) w.row({format_number(grid[i]), format_number(L[i])});
  s.write("fluid.csv", w.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of queues with state-dependent speeds"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Overrides o;
  struct Command {
    const char* name;
    const char* help;
    void (*run)(Session&);
  };
  const std::vector<Command> commands{
      {"simulate", "simulate the n-th system and write laws and Palm estimates", cmd_simulate},
      {"limit", "tabulate the limit density", cmd_limit},
      {"compare", "KS convergence study over n_list", cmd_compare},
      {"diffusion", "Euler scheme for the reflected diffusion", cmd_diffusion},
      {"clocks", "solve the clock equations over the theta grid", cmd_clocks},
      {"fluid", "fluid-scaled path from a large initial queue", cmd_fluid},
      {"palm-report", "Palm identity diagnostics", cmd_palm_report},
  };
  std::vector<CLI::App*> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", o.config, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--events", o.events, "events per replication")->check(CLI::PositiveNumber);
    sub->add_option("--replications", o.replications, "independent replications")->check(CLI::PositiveNumber);
    sub->add_option("--n", o.n, "scaling indices, replaces n_list")->check(CLI::PositiveNumber);
    sub->add_flag("--allow-unstable", o.allow_unstable, "run even if gamma_inf >= 0");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      Session s(commands[i].name, o);
      commands[i].run(s);
      s.finish();
      return 0;
    } catch (const UnstableSystemError& e) {
      std::cerr << "error: " << e.what() << " (pass --allow-unstable to run anyway)\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 1;
}
