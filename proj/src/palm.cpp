#include "sdq/palm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdq/simulator.hpp"

namespace sdq {

namespace {

const EpochMoments kEmpty{};

void record(std::vector<EpochMoments>& table, std::int64_t key, double x) {
  const auto k = static_cast<std::size_t>(key);
  if (k >= table.size()) table.resize(k + 1);
  table[k].add(x);
}

void merge_table(std::vector<EpochMoments>& dst, const std::vector<EpochMoments>& src) {
  if (src.size() > dst.size()) dst.resize(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) dst[i].merge(src[i]);
}

// sum of f(r) = c1 r - r^2 and of f(r)^2 from the stored power sums
std::pair<double, double> quadratic_sums(const EpochMoments& m, double c1) {
  const double s1 = m.pow[0], s2 = m.pow[1], s3 = m.pow[2], s4 = m.pow[3];
  return {c1 * s1 - s2, c1 * c1 * s2 - 2.0 * c1 * s3 + s4};
}

double mean_variance(double sum, double sum_sq, double N) {
  if (N <= 0.0) return 0.0;
  const double m = sum / N;
  return std::max(sum_sq / N - m * m, 0.0) / N;
}

}  // namespace

void PalmAccumulators::record_arrival(std::int64_t L_before, double Rd_pre) {
  ++arr_count;
  record(at_arrival, L_before, std::min(std::max(Rd_pre, 0.0), cap));
}

void PalmAccumulators::record_departure(std::int64_t L_after, double Re_post) {
  ++dep_count;
  record(at_departure, L_after, std::min(Re_post, cap));
}

void PalmAccumulators::merge(const PalmAccumulators& o) {
  if (o.cap != cap) throw std::invalid_argument("PalmAccumulators::merge: different truncation caps");
  arr_count += o.arr_count;
  dep_count += o.dep_count;
  total_time += o.total_time;
  merge_table(at_arrival, o.at_arrival);
  merge_table(at_departure, o.at_departure);
  max_arrival_Re_pre = std::max(max_arrival_Re_pre, o.max_arrival_Re_pre);
  max_departure_Rd_pre = std::max(max_departure_Rd_pre, o.max_departure_Rd_pre);
}

const EpochMoments& PalmAccumulators::arrivals_at(std::int64_t q) const {
  if (q < 0 || static_cast<std::size_t>(q) >= at_arrival.size()) return kEmpty;
  return at_arrival[static_cast<std::size_t>(q)];
}

const EpochMoments& PalmAccumulators::departures_at(std::int64_t q) const {
  if (q < 0 || static_cast<std::size_t>(q) >= at_departure.size()) return kEmpty;
  return at_departure[static_cast<std::size_t>(q)];
}

IntensityReport intensity_identity_report(const EmpiricalLaw& law, const PalmAccumulators& acc,
                                          const ScaledSystem& sys) {
  IntensityReport r{};
  const double T = law.total_time;
  if (T <= 0.0) return r;
  r.alpha_e = static_cast<double>(acc.arr_count) / T;
  r.alpha_d = static_cast<double>(acc.dep_count) / T;
  r.r1 = std::abs(r.alpha_e - r.alpha_d);
  r.r1_bound = static_cast<double>(law.start_length + law.end_length) / T;
  double lam = 0.0, mu = 0.0;
  for (std::size_t l = 0; l < law.time_weights.size(); ++l) {
    const Speeds v = sys.speeds_at(static_cast<std::int64_t>(l));
    const double p = law.time_weights[l] / T;
    lam += v.arrival * p;
    if (l > 0) mu += v.service * p;
  }
  r.r2 = std::abs(r.alpha_e - lam);
  r.r3 = std::abs(r.alpha_d - mu);
  return r;
}

CrossingBalance level_crossing_balance(const PalmAccumulators& acc, std::int64_t ell) {
  CrossingBalance out{};
  if (acc.arr_count == 0 || acc.dep_count == 0) return out;
  double a = 0.0, d = 0.0;
  for (std::int64_t q = 0; q <= ell; ++q) {
    a += static_cast<double>(acc.arrivals_at(q).count);
    d += static_cast<double>(acc.departures_at(q).count);
  }
  const double Ne = static_cast<double>(acc.arr_count), Nd = static_cast<double>(acc.dep_count);
  out.arrivals_at_or_below = a / Ne;
  out.departures_at_or_below = d / Nd;
  const double fa = out.arrivals_at_or_below, fd = out.departures_at_or_below;
  out.diff_std_error = std::sqrt(fa * (1.0 - fa) / Ne + fd * (1.0 - fd) / Nd);
  return out;
}

PalmEstimate estimate_H(const PalmAccumulators& acc, const ScaledSystem& sys, double x, std::uint64_t min_epochs) {
  PalmEstimate e;
  e.x = x;
  e.q = sys.level_index(x);
  const EpochMoments& A = acc.arrivals_at(e.q);
  const EpochMoments& D = acc.departures_at(e.q);
  e.epochs_used = A.count + D.count;
  e.sufficient = e.epochs_used >= min_epochs;
  if (acc.total_time <= 0.0 || acc.arr_count == 0 || acc.dep_count == 0) return e;
  const double alpha = static_cast<double>(acc.arr_count) / acc.total_time;
  const double Ne = static_cast<double>(acc.arr_count), Nd = static_cast<double>(acc.dep_count);
  const auto [sa, sa2] = quadratic_sums(A, sys.service().scv());
  const auto [sd, sd2] = quadratic_sums(D, sys.arrival().scv() + 2.0);
  e.value = 0.5 * alpha * (sa / Ne - sd / Nd);
  e.std_error = 0.5 * alpha * std::sqrt(mean_variance(sa, sa2, Ne) + mean_variance(sd, sd2, Nd));
  return e;
}

PalmEstimate estimate_Delta(const PalmAccumulators& acc, const EmpiricalLaw& law, const ScaledSystem& sys, double x,
                            std::uint64_t min_epochs) {
  PalmEstimate e;
  e.x = x;
  e.q = sys.level_index(x);
  const EpochMoments& A = acc.arrivals_at(e.q);
  const EpochMoments& D = acc.departures_at(e.q);
  e.epochs_used = A.count + D.count;
  e.sufficient = e.epochs_used >= min_epochs;
  if (law.total_time <= 0.0 || acc.arr_count == 0 || acc.dep_count == 0) return e;
  const double alpha = static_cast<double>(acc.arr_count) / law.total_time;
  const double Ne = static_cast<double>(acc.arr_count), Nd = static_cast<double>(acc.dep_count);
  const double c = static_cast<double>(A.count);
  // arrival epochs contribute R_d(0-) - 1, departure epochs R_e(0)
  const double sv = A.pow[0] - c, sv2 = A.pow[1] - 2.0 * A.pow[0] + c;
  const double sw = D.pow[0], sw2 = D.pow[1];
  e.value = alpha * (sv / Ne + sw / Nd);
  e.std_error = alpha * std::sqrt(mean_variance(sv, sv2, Ne) + mean_variance(sw, sw2, Nd));
  return e;
}

DeltaTargets delta_identity_targets(const LatticeLaw& law, const ScaledSystem& sys, std::int64_t q) {
  DeltaTargets t{0.0, 0.0};
  for (std::size_t l = 1; l < law.mass.size(); ++l) {
    const Speeds v = sys.speeds_at(static_cast<std::int64_t>(l));
    const double term = (v.arrival - v.service) * law.mass[l];  // n^{-1/2} bhat P
    if (static_cast<std::int64_t>(l) > q)
      t.upper -= term;
    else
      t.lower += term;
  }
  t.lower += sys.speeds_at(0).service * law.at(0);
  return t;
}

BoundaryReport boundary_identity_report(const LatticeLaw& law, const ScaledSystem& sys) {
  BoundaryReport r{};
  r.lhs = sys.speeds_at(0).service * sys.sqrt_n() * law.at(0);
  double e = 0.0;
  for (std::size_t l = 1; l < law.mass.size(); ++l) {
    const Speeds v = sys.speeds_at(static_cast<std::int64_t>(l));
    e += sys.sqrt_n() * (v.arrival - v.service) * law.mass[l];
  }
  r.rhs = -e;
  const double diff = std::abs(r.lhs - r.rhs);
  r.rel_err = r.rhs != 0.0 ? diff / std::abs(r.rhs) : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return r;
}

std::vector<double> default_probes(const SpeedProfile& profile) {
  std::vector<double> p{0.25, 0.5};
  const auto& lv = profile.levels();
  for (std::size_t i = 0; i < lv.size(); ++i) {
    p.push_back(lv[i]);
    p.push_back(0.5 * ((i == 0 ? 0.0 : lv[i - 1]) + lv[i]));
  }
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

}  // namespace sdq
