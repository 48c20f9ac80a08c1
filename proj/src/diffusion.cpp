#include "sdq/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>

#include "sdq/parallel.hpp"
#include "sdq/rng.hpp"

namespace sdq {

std::size_t DiffusionCoefficients::region(double z) const {
  return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), z) - levels.begin());
}

DiffusionCoefficients coefficients_from(const LimitDensity& density) {
  DiffusionCoefficients c;
  c.levels = density.profile().levels();
  for (std::size_t i = 0; i < c.levels.size() + 1; ++i) {
    // a point inside region i
    double u = 0.0;
    if (i > 0) u = i < c.levels.size() ? 0.5 * (c.levels[i - 1] + c.levels[i]) : c.levels.back() + 1.0;
    c.drift.push_back(density.b(u));
    c.sigma.push_back(std::sqrt(density.sigma2(u)));
  }
  return c;
}

DiffusionCoefficients constant_coefficients(double b, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("diffusion: sigma^2 must be positive");
  return DiffusionCoefficients{{}, {b}, {std::sqrt(sigma2)}};
}

void DiffusionRun::merge(const DiffusionRun& o) {
  if (o.samples == 0) return;
  if (samples == 0) {
    *this = o;
    return;
  }
  if (o.dt != dt) throw std::invalid_argument("DiffusionRun::merge: different step sizes");
  hist.merge(o.hist);
  samples += o.samples;
  reflection_total += o.reflection_total;
  reflection_interior += o.reflection_interior;
  min_state = std::min(min_state, o.min_state);
}

DiffusionRun simulate_rbm(const DiffusionConfig& cfg, std::uint64_t stream) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("diffusion: dt must be positive");
  if (cfg.dt >= 0.1) throw std::invalid_argument("diffusion: dt must be below 0.1");
  const DiffusionCoefficients& c = cfg.coeffs;
  if (c.drift.size() != c.levels.size() + 1 || c.sigma.size() != c.drift.size())
    throw std::invalid_argument("diffusion: coefficient tables do not match the levels");
  for (double s : c.sigma)
    if (!(s > 0.0)) throw std::invalid_argument("diffusion: sigma must be positive");
  if (!(c.drift.back() < 0.0)) throw std::invalid_argument("diffusion: needs b_inf < 0");
  if (cfg.steps < 0 || cfg.burn_in < 0) throw std::invalid_argument("diffusion: negative step count");
  if (!(cfg.z0 >= 0.0)) throw std::invalid_argument("diffusion: z0 must be non-negative");

  DiffusionRun run;
  run.dt = cfg.dt;
  run.hist.width = cfg.bin_width;
  run.hist.weight.assign(static_cast<std::size_t>(std::ceil(cfg.hist_max / cfg.bin_width)), 0.0);
  run.min_state = cfg.z0;

  Rng rng = make_stream(cfg.seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sq = std::sqrt(cfg.dt);
  const bool mirror = cfg.scheme == ReflectionScheme::Mirror;
  double z = cfg.z0;
  for (std::int64_t k = 0; k < cfg.burn_in + cfg.steps; ++k) {
    const std::size_t r = c.region(z);
    const double pre = z + c.drift[r] * cfg.dt + c.sigma[r] * sq * normal(rng);
    double dy = 0.0;
    double next = pre;
    if (pre < 0.0) {
      next = mirror ? -pre : 0.0;
      dy = mirror ? -2.0 * pre : -pre;
    }
    if (k >= cfg.burn_in) {
      run.reflection_total += dy;
      if (z > cfg.eps) run.reflection_interior += dy;
      run.hist.add(next);
      ++run.samples;
      run.min_state = std::min(run.min_state, next);
    }
    z = next;
  }
  if (run.samples == 0) run.min_state = 0.0;
  return run;
}

namespace {

DiffusionRun merge_paths(std::vector<DiffusionRun>& runs) {
  DiffusionRun out = std::move(runs.front());
  for (std::size_t i = 1; i < runs.size(); ++i) out.merge(runs[i]);
  return out;
}

}  // namespace

DiffusionRun simulate_rbm_paths(const DiffusionConfig& cfg, int paths) {
  if (paths < 1) throw std::invalid_argument("diffusion: paths must be >= 1");
  std::vector<DiffusionRun> runs(static_cast<std::size_t>(paths));
  std::exception_ptr failure;
#ifdef SDQ_OMP
  const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
  for (int p = 0; p < paths; ++p) {
    try {
      runs[static_cast<std::size_t>(p)] = simulate_rbm(cfg, static_cast<std::uint64_t>(p));
    } catch (...) {
#ifdef SDQ_OMP
#pragma omp critical(sdq_rbm_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return merge_paths(runs);
}

DiffusionRun simulate_rbm_paths_serial(const DiffusionConfig& cfg, int paths) {
  if (paths < 1) throw std::invalid_argument("diffusion: paths must be >= 1");
  std::vector<DiffusionRun> runs;
  for (int p = 0; p < paths; ++p) runs.push_back(simulate_rbm(cfg, static_cast<std::uint64_t>(p)));
  return merge_paths(runs);
}

std::string to_string(ReflectionScheme s) { return s == ReflectionScheme::Mirror ? "mirror" : "projection"; }

ReflectionScheme reflection_scheme_from_string(const std::string& name) {
  if (name == "mirror") return ReflectionScheme::Mirror;
  if (name == "projection") return ReflectionScheme::Projection;
  throw std::invalid_argument("unknown reflection scheme '" + name + "'");
}

}  // namespace sdq
