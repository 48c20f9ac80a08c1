#include "sdq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdq/rng.hpp"

namespace sdq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// relative gap below which two clocks are treated as firing together
constexpr double kTieTol = 1e-12;

struct Schedule {
  double dt;
  EventKind event;
};

Schedule next_event(const Speeds& v, const SystemState& s) {
  const double te = s.Re / v.arrival;
  const double td = s.L > 0 ? s.Rd / v.service : kInf;
  if (s.L > 0 && std::abs(te - td) <= kTieTol * std::max(te, td)) return {std::min(te, td), EventKind::Simultaneous};
  if (te < td) return {te, EventKind::Arrival};
  return {td, EventKind::Departure};
}

}  // namespace

void SpeedTable::grow(std::int64_t ell) {
  const std::size_t want = std::max<std::size_t>(static_cast<std::size_t>(ell) + 1, 2 * cache_.size());
  for (std::size_t i = cache_.size(); i < want; ++i)
    cache_.push_back(sys_->speeds_at(static_cast<std::int64_t>(i)));
}

StepOutcome step(SpeedTable& speeds, SystemState& s, Rng& rng) {
  const Speeds& v = speeds[s.L];
  const Schedule next = next_event(v, s);
  if (!std::isfinite(next.dt) || next.dt < 0.0)
    throw std::runtime_error("step: non-finite time to next event (zero speed?)");
  const ScaledSystem& sys = speeds.system();

  StepOutcome out{next.event, next.dt, s.L, 0.0, 0.0};
  out.Re_pre = s.Re - v.arrival * next.dt;
  out.Rd_pre = s.L > 0 ? s.Rd - v.service * next.dt : s.Rd;
  s.t += next.dt;
  switch (next.event) {
    case EventKind::Arrival:
      ++s.L;
      s.Re = sample(sys.arrival(), rng);
      s.Rd = std::max(out.Rd_pre, 0.0);
      break;
    case EventKind::Departure:
      --s.L;
      s.Rd = sample(sys.service(), rng);
      s.Re = std::max(out.Re_pre, 0.0);
      break;
    case EventKind::Simultaneous:
      // arrival first, then the departure from the intermediate state
      s.Re = sample(sys.arrival(), rng);
      s.Rd = sample(sys.service(), rng);
      break;
  }
  return out;
}

StepOutcome step(const ScaledSystem& sys, SystemState& state, Rng& rng) {
  SpeedTable table(sys);
  return step(table, state, rng);
}

double EmpiricalLaw::mass(std::int64_t ell) const {
  if (total_time <= 0.0 || ell < 0 || static_cast<std::size_t>(ell) >= time_weights.size()) return 0.0;
  return time_weights[static_cast<std::size_t>(ell)] / total_time;
}

LatticeLaw EmpiricalLaw::distribution() const {
  LatticeLaw out;
  out.n = n;
  if (total_time <= 0.0) return out;
  out.mass.resize(time_weights.size());
  for (std::size_t i = 0; i < time_weights.size(); ++i) out.mass[i] = time_weights[i] / total_time;
  return out;
}

void EmpiricalLaw::merge(const EmpiricalLaw& o) {
  if (o.n != n) throw std::invalid_argument("EmpiricalLaw::merge: different n");
  if (o.time_weights.size() > time_weights.size()) time_weights.resize(o.time_weights.size(), 0.0);
  for (std::size_t i = 0; i < o.time_weights.size(); ++i) time_weights[i] += o.time_weights[i];
  total_time += o.total_time;
  burn_in_time += o.burn_in_time;
  arrivals += o.arrivals;
  departures += o.departures;
  events += o.events;
  burn_in_events += o.burn_in_events;
  start_length += o.start_length;
  end_length += o.end_length;
  replications += o.replications;
}

StationaryRun run_stationary(const ScaledSystem& sys, const RunOptions& opt) {
  const StabilityReport stab = stability_report(sys);
  if (!stab.stable && !opt.allow_unstable) {
    std::ostringstream msg;
    msg << "unstable system: gamma_inf = " << stab.gamma_inf << " >= 0; rerun with the override flag";
    throw UnstableSystemError(msg.str());
  }
  if (!(opt.burn_in_fraction >= 0.0 && opt.burn_in_fraction < 1.0))
    throw std::invalid_argument("burn_in_fraction: must lie in [0,1)");

  Rng rng = make_stream(opt.seed, opt.stream);
  SystemState s;
  if (opt.initial) {
    s = *opt.initial;
  } else {
    s.Re = sample(sys.arrival(), rng);
    s.Rd = sample(sys.service(), rng);
  }

  StationaryRun run;
  EmpiricalLaw& law = run.law;
  PalmAccumulators& palm = run.palm;
  law.n = sys.n();
  law.seed = opt.seed;
  palm.cap = sys.sqrt_n();

  SpeedTable speeds(sys);
  const auto burn = static_cast<std::uint64_t>(std::floor(opt.burn_in_fraction * static_cast<double>(opt.events)));
  auto guard = [&] {
    if (s.L > opt.length_cap) throw std::overflow_error("queue length exceeded cap " + std::to_string(opt.length_cap));
  };
  for (std::uint64_t i = 0; i < burn; ++i) {
    step(speeds, s, rng);
    guard();
  }
  law.burn_in_time = s.t;
  law.burn_in_events = burn;
  law.start_length = s.L;

  std::vector<double>& w = law.time_weights;
  for (std::uint64_t i = burn; i < opt.events; ++i) {
    const StepOutcome o = step(speeds, s, rng);
    const auto lb = static_cast<std::size_t>(o.L_before);
    if (lb >= w.size()) w.resize(lb + 1, 0.0);
    w[lb] += o.dt;
    switch (o.event) {
      case EventKind::Arrival:
        palm.record_arrival(o.L_before, o.Rd_pre);
        palm.max_arrival_Re_pre = std::max(palm.max_arrival_Re_pre, std::abs(o.Re_pre));
        ++law.arrivals;
        break;
      case EventKind::Departure:
        palm.record_departure(s.L, s.Re);
        palm.max_departure_Rd_pre = std::max(palm.max_departure_Rd_pre, std::abs(o.Rd_pre));
        ++law.departures;
        break;
      case EventKind::Simultaneous:
        palm.record_arrival(o.L_before, 0.0);
        palm.record_departure(s.L, s.Re);
        palm.max_arrival_Re_pre = std::max(palm.max_arrival_Re_pre, std::abs(o.Re_pre));
        palm.max_departure_Rd_pre = std::max(palm.max_departure_Rd_pre, std::abs(o.Rd_pre));
        ++law.arrivals;
        ++law.departures;
        break;
    }
    ++law.events;
    guard();
  }
  law.end_length = s.L;
  double total = 0.0;
  for (double x : w) total += x;
  law.total_time = total;
  palm.total_time = total;
  return run;
}

std::vector<double> run_fluid(const ScaledSystem& sys, double y, const std::vector<double>& t_grid,
                              std::uint64_t seed) {
  const StabilityReport stab = stability_report(sys);
  if (!stab.stable) throw UnstableSystemError("run_fluid: needs gamma_inf < 0");
  if (!(y >= 1.0)) throw std::invalid_argument("run_fluid: y must be >= 1");
  Rng rng = make_stream(seed, 0);
  SystemState s{static_cast<std::int64_t>(std::floor(y)), y, y, 0.0};
  SpeedTable speeds(sys);
  std::vector<double> out;
  out.reserve(t_grid.size());
  double prev = 0.0;
  for (double t : t_grid) {
    if (!(t >= prev)) throw std::invalid_argument("run_fluid: t_grid must be non-negative and non-decreasing");
    prev = t;
    const double target = y * t;
    while (s.t + next_event(speeds[s.L], s).dt <= target) step(speeds, s, rng);
    out.push_back(static_cast<double>(s.L) / y);
  }
  return out;
}

}  // namespace sdq
