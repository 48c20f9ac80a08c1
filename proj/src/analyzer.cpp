#include "sdq/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include "sdq/parallel.hpp"
#include "sdq/replicate.hpp"

namespace sdq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-10;
constexpr double kTruncate = 1e-12;

// int_0^d e^{beta v} dv
double exp_integral(double beta, double d) {
  if (std::isinf(d)) return -1.0 / beta;
  if (beta == 0.0) return d;
  return std::expm1(beta * d) / beta;
}

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

struct Line {
  double slope, intercept;
};

std::optional<Line> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  if (k < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return Line{slope, my - slope * mx};
}

std::optional<double> jump_from_points(const std::vector<double>& lu, const std::vector<double>& ld,
                                       const std::vector<double>& ru, const std::vector<double>& rd, double level) {
  const auto left = fit_line(lu, ld);
  const auto right = fit_line(ru, rd);
  if (!left || !right) return std::nullopt;
  return std::exp((right->intercept + right->slope * level) - (left->intercept + left->slope * level));
}

double step_value(const StepCdf& a, double u) {
  const auto it = std::upper_bound(a.x.begin(), a.x.end(), u);
  if (it == a.x.begin()) return 0.0;
  return a.F[static_cast<std::size_t>(it - a.x.begin()) - 1];
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 50);
}

LimitDensity::LimitDensity(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service)
    : profile_(profile), sA2_(arrival.scv()), sS2_(service.scv()) {
  if (!profile_.balanced())
    throw std::invalid_argument("limit density: profile is not a heavy-traffic family (lambda != mu)");
  const auto& regions = profile_.regions();
  const std::size_t pieces = regions.size();
  start_.push_back(0.0);
  for (double l : profile_.levels()) start_.push_back(l);
  for (const RegionSpeeds& r : regions) {
    const double s2 = r.lambda * sA2_ + r.mu * sS2_;
    if (!(s2 > 0.0)) throw std::invalid_argument("limit density: sigma^2 must be positive");
    drift_.push_back(r.lambda_star - r.mu_star);
    sig2_.push_back(s2);
    beta_.push_back(2.0 * drift_.back() / s2);
  }
  if (!(drift_.back() < 0.0)) {
    std::ostringstream msg;
    msg << "not integrable: b_inf = " << drift_.back() << " >= 0";
    throw NotIntegrableError(msg.str());
  }
  B_.assign(pieces, 0.0);
  for (std::size_t i = 1; i < pieces; ++i) B_[i] = B_[i - 1] + beta_[i - 1] * (start_[i] - start_[i - 1]);

  mass_.assign(pieces, 0.0);
  cum_.assign(pieces, 0.0);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double end = i + 1 < pieces ? start_[i + 1] : kInf;
    mass_[i] = piece_mass(i, start_[i], end);
    if (i + 1 < pieces) cum_[i + 1] = cum_[i] + mass_[i];
  }
  C_ = cum_.back() + mass_.back();
  if (!(C_ > 0.0) || !std::isfinite(C_)) throw NotIntegrableError("not integrable: normalizing constant is not finite");
}

double LimitDensity::unnormalized(std::size_t i, double u) const {
  return std::exp(B_[i] + beta_[i] * (u - start_[i])) / sig2_[i];
}

double LimitDensity::piece_mass(std::size_t i, double from, double to) const {
  if (!(to > from)) return 0.0;
  if (closed_form()) return unnormalized(i, from) * exp_integral(beta_[i], to - from);
  auto f = [this, i](double u) { return unnormalized(i, u); };
  if (std::isinf(to)) {
    // stop where the integrand drops below the truncation level
    const double f0 = unnormalized(i, from);
    to = from;
    if (f0 > kTruncate) to = from + std::log(kTruncate / f0) / beta_[i];
  }
  return adaptive_simpson(f, from, to, kQuadTol);
}

double LimitDensity::b(double u) const { return drift_[profile_.region_index(u)]; }
double LimitDensity::sigma2(double u) const { return sig2_[profile_.region_index(u)]; }
double LimitDensity::beta(double u) const { return beta_[profile_.region_index(u)]; }

double LimitDensity::integrated_beta(double u) const {
  const std::size_t i = profile_.region_index(u);
  return B_[i] + beta_[i] * (u - start_[i]);
}

double LimitDensity::h(double u) const {
  if (u < 0.0) return 0.0;
  return unnormalized(profile_.region_index(u), u) / C_;
}

double LimitDensity::h_right(double u) const {
  const auto& lv = profile_.levels();
  const auto i = static_cast<std::size_t>(std::upper_bound(lv.begin(), lv.end(), u) - lv.begin());
  return unnormalized(i, u) / C_;
}

double LimitDensity::cdf(double u) const {
  if (u <= 0.0) return 0.0;
  const std::size_t i = profile_.region_index(u);
  return std::min(1.0, (cum_[i] + piece_mass(i, start_[i], u)) / C_);
}

double LimitDensity::boundary_target() const {
  double s = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) s += drift_[i] * mass_[i];
  return -s / C_;
}

double LimitDensity::upper_quantile(double tail) const {
  const std::size_t k = start_.size() - 1;
  const double at_start = unnormalized(k, start_[k]) / (-beta_[k]) / C_;
  if (at_start <= tail) return start_[k];
  return start_[k] + std::log(tail / at_start) / beta_[k];
}

BirthDeathLaw birth_death_oracle(const ScaledSystem& sys) {
  if (sys.arrival().kind() != RenewalKind::Exponential || sys.service().kind() != RenewalKind::Exponential)
    throw std::invalid_argument("birth-death oracle: both primitives must be exponential");
  const StabilityReport stab = stability_report(sys);
  if (!stab.stable) throw UnstableSystemError("birth-death oracle: system is not stable");
  const RegionSpeeds& t = sys.profile().tail();
  const double rho_tail = (t.lambda + t.lambda_star / sys.sqrt_n()) / (t.mu + t.mu_star / sys.sqrt_n());
  const double last_level = sys.profile().levels().empty() ? 0.0 : sys.profile().levels().back();
  const auto in_tail = static_cast<std::int64_t>(std::floor(last_level * sys.sqrt_n())) + 1;

  std::vector<double> w{1.0};
  double sum = 1.0;
  for (std::int64_t l = 0;; ++l) {
    if (l > 100000000) throw std::runtime_error("birth-death oracle: truncation point too large");
    const double r = sys.speeds_at(l).arrival / sys.speeds_at(l + 1).service;
    const double next = w.back() * r;
    w.push_back(next);
    sum += next;
    if (sum > 1e250) {
      for (double& x : w) x *= 1e-250;
      sum *= 1e-250;
    }
    if (l + 1 >= in_tail && w.back() * rho_tail / (1.0 - rho_tail) <= 1e-13 * sum) break;
  }
  BirthDeathLaw law;
  law.n = sys.n();
  law.truncation = static_cast<std::int64_t>(w.size()) - 1;
  law.mass.resize(w.size());
  double total = 0.0;
  for (double x : w) total += x;
  for (std::size_t i = 0; i < w.size(); ++i) law.mass[i] = w[i] / total;
  return law;
}

StepCdf step_cdf(const LatticeLaw& law) {
  StepCdf out;
  const double rn = std::sqrt(static_cast<double>(law.n));
  double c = 0.0;
  for (std::size_t l = 0; l < law.mass.size(); ++l) {
    c += law.mass[l];
    out.x.push_back(static_cast<double>(l) / rn);
    out.F.push_back(std::min(c, 1.0));
  }
  return out;
}

StepCdf step_cdf(const Histogram& hist) {
  StepCdf out;
  out.atomic = false;
  const double total = hist.total();
  if (total <= 0.0) return out;
  double c = 0.0;
  for (std::size_t i = 0; i < hist.weight.size(); ++i) {
    c += hist.weight[i];
    out.x.push_back(static_cast<double>(i + 1) * hist.width);
    out.F.push_back(c / total);
  }
  return out;
}

double ks_distance(const StepCdf& a, const std::function<double(double)>& cdf, double grid_max, int grid) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double G = cdf(a.x[i]);
    d = std::max(d, std::abs(a.F[i] - G));
    if (a.atomic) d = std::max(d, std::abs((i > 0 ? a.F[i - 1] : 0.0) - G));
  }
  if (a.atomic && grid > 1) {
    for (int k = 0; k < grid; ++k) {
      const double u = grid_max * k / (grid - 1);
      d = std::max(d, std::abs(step_value(a, u) - cdf(u)));
    }
  }
  return d;
}

double ks_distance(const StepCdf& a, const LimitDensity& target, int grid) {
  const double top = std::max(a.x.empty() ? 0.0 : a.x.back(), target.upper_quantile(1e-12));
  return ks_distance(a, [&target](double u) { return target.cdf(u); }, top, grid);
}

double ks_distance(const StepCdf& a, const StepCdf& b) {
  double d = 0.0;
  for (double u : a.x) d = std::max(d, std::abs(step_value(a, u) - step_value(b, u)));
  for (double u : b.x) d = std::max(d, std::abs(step_value(a, u) - step_value(b, u)));
  return d;
}

double ks_distance(const std::function<double(double)>& F, const std::function<double(double)>& G, double grid_max,
                   int grid) {
  double d = 0.0;
  for (int k = 0; k < grid; ++k) {
    const double u = grid_max * k / (grid - 1);
    d = std::max(d, std::abs(F(u) - G(u)));
  }
  return d;
}

std::optional<double> estimate_jump_ratio(const LatticeLaw& law, double level, double window) {
  const double rn = std::sqrt(static_cast<double>(law.n));
  const double eps = 1e-12 * std::max(1.0, level);
  std::vector<double> lu, ld, ru, rd;
  for (std::size_t l = 0; l < law.mass.size(); ++l) {
    const double u = static_cast<double>(l) / rn;
    if (law.mass[l] <= 0.0) continue;
    const double logd = std::log(law.mass[l] * rn);
    if (u > level - window && u <= level + eps) {
      lu.push_back(u);
      ld.push_back(logd);
    } else if (u > level + eps && u <= level + window) {
      ru.push_back(u);
      rd.push_back(logd);
    }
  }
  return jump_from_points(lu, ld, ru, rd, level);
}

std::optional<double> estimate_jump_ratio(const Histogram& hist, double level, double window) {
  const double total = hist.total();
  if (total <= 0.0) return std::nullopt;
  const double w = hist.width;
  const double eps = 1e-9 * w;
  std::vector<double> lu, ld, ru, rd;
  for (std::size_t i = 0; i < hist.weight.size(); ++i) {
    const double lo = static_cast<double>(i) * w, hi = lo + w;
    if (hist.weight[i] <= 0.0) continue;
    const double c = 0.5 * (lo + hi);
    const double logd = std::log(hist.weight[i] / (total * w));
    if (lo >= level - window - eps && hi <= level + eps) {
      lu.push_back(c);
      ld.push_back(logd);
    } else if (lo >= level - eps && hi <= level + window + eps) {
      ru.push_back(c);
      rd.push_back(logd);
    }
  }
  return jump_from_points(lu, ld, ru, rd, level);
}

namespace {

StudyRow study_row(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service, int n,
                   const LimitDensity& target, const StudyOptions& opt) {
  const ScaledSystem sys(n, profile, arrival, service);
  LatticeLaw law;
  if (opt.source == StudySource::Oracle) {
    law = birth_death_oracle(sys).lattice();
  } else {
    law = run_replications_serial(sys, opt.run, opt.replications).law.distribution();
  }
  StudyRow row;
  row.n = n;
  row.ks = ks_distance(step_cdf(law), target);
  row.boundary_mass = sys.sqrt_n() * law.at(0);
  row.boundary_lhs = sys.speeds_at(0).service * row.boundary_mass;
  if (!profile.levels().empty()) row.jump_ratio = estimate_jump_ratio(law, profile.levels().front(), opt.jump_window);
  return row;
}

void finish(StudyTable& t, const SpeedProfile& profile) {
  t.conjecture = profile.representation() == ProfileRepresentation::Tabular;
  if (t.rows.size() < 2) return;
  bool dec = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) dec = dec && t.rows[i].ks < t.rows[i - 1].ks;
  t.monotone = dec;
}

}  // namespace

StudyTable convergence_study(const SpeedProfile& profile, const RenewalSpec& arrival, const RenewalSpec& service,
                             const std::vector<int>& n_list, const LimitDensity& target, const StudyOptions& options) {
  StudyTable t;
  t.rows.resize(n_list.size());
  std::exception_ptr failure;
  const int count = static_cast<int>(n_list.size());
#ifdef SDQ_OMP
  const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
#endif
  for (int i = 0; i < count; ++i) {
    try {
      t.rows[static_cast<std::size_t>(i)] =
          study_row(profile, arrival, service, n_list[static_cast<std::size_t>(i)], target, options);
    } catch (...) {
#ifdef SDQ_OMP
#pragma omp critical(sdq_study_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  finish(t, profile);
  return t;
}

StudyTable convergence_study_serial(const SpeedProfile& profile, const RenewalSpec& arrival,
                                    const RenewalSpec& service, const std::vector<int>& n_list,
                                    const LimitDensity& target, const StudyOptions& options) {
  StudyTable t;
  for (int n : n_list) t.rows.push_back(study_row(profile, arrival, service, n, target, options));
  finish(t, profile);
  return t;
}

}  // namespace sdq
