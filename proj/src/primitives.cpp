#include "sdq/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace sdq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

// x^j for small non-negative j, with 0^0 = 1
double ipow(double x, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= x;
  return r;
}

// E[(T^c)^j e^{-s T^c}] for Erlang(k) with rate r (k=1 is exponential)
double erlang_moment(int k, double r, double s, double c, int j) {
  const double a = r + s;
  double body = incomplete_gamma_integral(k - 1 + j, a, c);
  if (std::isinf(body)) return kInf;
  body *= std::pow(r, k) / factorial(k - 1);
  if (std::isinf(c)) return body;
  // atom at c carries P(T > c)
  double tail = 0.0, term = 1.0;
  for (int i = 0; i < k; ++i) {
    if (i > 0) term *= r * c / i;
    tail += term;
  }
  return body + ipow(c, j) * std::exp(-a * c) * tail;
}

double uniform_moment(double lo, double hi, double s, double c, int j) {
  if (hi <= lo || c <= lo) {
    const double t = std::min(c, lo);
    return ipow(t, j) * std::exp(-s * t);
  }
  const double top = std::min(c, hi);
  // shift t = lo + tau so the integral never subtracts two close numbers
  double body = 0.0;
  double binom = 1.0;
  for (int i = 0; i <= j; ++i) {
    if (i > 0) binom = binom * (j - i + 1) / i;
    body += binom * ipow(lo, j - i) * incomplete_gamma_integral(i, s, top - lo);
  }
  body *= std::exp(-s * lo) / (hi - lo);
  if (c < hi) body += (hi - c) / (hi - lo) * ipow(c, j) * std::exp(-s * c);
  return body;
}

}  // namespace

RenewalSpec::RenewalSpec() : kind_(RenewalKind::Exponential) {}

double RenewalSpec::scv() const {
  switch (kind_) {
    case RenewalKind::Exponential: return 1.0;
    case RenewalKind::Deterministic: return 0.0;
    case RenewalKind::Erlang: return 1.0 / norm_.k;
    case RenewalKind::HyperExponential: {
      const double m2 = 2.0 * (norm_.p / (norm_.r1 * norm_.r1) +
                               (1.0 - norm_.p) / (norm_.r2 * norm_.r2));
      return m2 - 1.0;
    }
    case RenewalKind::Uniform: return norm_.half_width * norm_.half_width / 3.0;
  }
  return 0.0;
}

double RenewalSpec::third_moment() const {
  switch (kind_) {
    case RenewalKind::Exponential: return 6.0;
    case RenewalKind::Deterministic: return 1.0;
    case RenewalKind::Erlang: {
      const double k = norm_.k;
      return (k + 1.0) * (k + 2.0) / (k * k);
    }
    case RenewalKind::HyperExponential:
      return 6.0 * (norm_.p / std::pow(norm_.r1, 3) + (1.0 - norm_.p) / std::pow(norm_.r2, 3));
    case RenewalKind::Uniform: return 1.0 + norm_.half_width * norm_.half_width;
  }
  return 0.0;
}

RenewalSpec make_renewal(RenewalKind kind, const RenewalParams& params) {
  RenewalSpec spec;
  spec.kind_ = kind;
  spec.raw_ = RenewalParams{};
  RenewalParams norm{};
  switch (kind) {
    case RenewalKind::Exponential:
    case RenewalKind::Deterministic:
      break;
    case RenewalKind::Erlang:
      if (params.k < 1) throw std::invalid_argument("erlang: k must be >= 1");
      spec.raw_.k = params.k;
      norm.k = params.k;
      break;
    case RenewalKind::HyperExponential: {
      if (!(params.p > 0.0 && params.p < 1.0))
        throw std::invalid_argument("hyperexponential: p must lie in (0,1)");
      if (!(params.r1 > 0.0 && std::isfinite(params.r1)) || !(params.r2 > 0.0 && std::isfinite(params.r2)))
        throw std::invalid_argument("hyperexponential: rates must be positive");
      spec.raw_.p = params.p;
      spec.raw_.r1 = params.r1;
      spec.raw_.r2 = params.r2;
      const double m = params.p / params.r1 + (1.0 - params.p) / params.r2;
      norm.p = params.p;
      norm.r1 = params.r1 * m;
      norm.r2 = params.r2 * m;
      break;
    }
    case RenewalKind::Uniform:
      if (!(params.half_width >= 0.0 && params.half_width < 1.0))
        throw std::invalid_argument("uniform: half_width must lie in [0,1)");
      spec.raw_.half_width = params.half_width;
      norm.half_width = params.half_width;
      break;
  }
  spec.norm_ = norm;
  return spec;
}

double sample(const RenewalSpec& spec, Rng& rng) {
  const RenewalParams& q = spec.normalized();
  switch (spec.kind()) {
    case RenewalKind::Exponential:
      return std::exponential_distribution<double>(1.0)(rng);
    case RenewalKind::Deterministic:
      return 1.0;
    case RenewalKind::Erlang:
      return std::gamma_distribution<double>(q.k, 1.0 / q.k)(rng);
    case RenewalKind::HyperExponential: {
      const bool first = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < q.p;
      return std::exponential_distribution<double>(first ? q.r1 : q.r2)(rng);
    }
    case RenewalKind::Uniform:
      if (q.half_width == 0.0) return 1.0;
      return std::uniform_real_distribution<double>(1.0 - q.half_width, 1.0 + q.half_width)(rng);
  }
  return 1.0;
}

double incomplete_gamma_integral(int m, double a, double c) {
  if (m < 0) throw std::invalid_argument("incomplete_gamma_integral: m < 0");
  if (!(c > 0.0)) return 0.0;
  if (std::isinf(c)) return a > 0.0 ? factorial(m) / std::pow(a, m + 1) : kInf;
  const double x = a * c;
  const double cm = std::pow(c, m + 1);
  if (x == 0.0) return cm / (m + 1);
  if (x > 0.0) {
    if (x > m + 1.0) {
      // complement of the regularized upper tail
      double term = 1.0, sum = 1.0;
      for (int j = 1; j <= m; ++j) {
        term *= x / j;
        sum += term;
      }
      return factorial(m) / std::pow(a, m + 1) * -std::expm1(std::log(sum) - x);
    }
    double term = 1.0 / (m + 1), sum = term;
    for (int j = 1; j < 1000; ++j) {
      term *= x / (m + 1 + j);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::exp(-x) * cm * sum;
  }
  // a < 0: all terms positive
  const double y = -x;
  double u = 1.0, sum = 1.0 / (m + 1);
  for (int j = 1; j < 100000; ++j) {
    u *= y / j;
    const double t = u / (m + 1 + j);
    sum += t;
    if (std::isinf(sum)) return kInf;
    if (j > y && t < 1e-17 * sum) break;
  }
  return cm * sum;
}

double truncated_laplace_moment(const RenewalSpec& spec, double s, double cap, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("truncated_laplace_moment: order must be 0, 1 or 2");
  if (!(cap > 0.0)) throw std::invalid_argument("truncated_laplace: cap must be positive");
  const RenewalParams& q = spec.normalized();
  switch (spec.kind()) {
    case RenewalKind::Exponential:
      return erlang_moment(1, 1.0, s, cap, order);
    case RenewalKind::Erlang:
      return erlang_moment(q.k, q.k, s, cap, order);
    case RenewalKind::HyperExponential:
      return q.p * erlang_moment(1, q.r1, s, cap, order) +
             (1.0 - q.p) * erlang_moment(1, q.r2, s, cap, order);
    case RenewalKind::Deterministic: {
      const double t = std::min(1.0, cap);
      return ipow(t, order) * std::exp(-s * t);
    }
    case RenewalKind::Uniform:
      return uniform_moment(1.0 - q.half_width, 1.0 + q.half_width, s, cap, order);
  }
  return kInf;
}

std::string to_string(RenewalKind kind) {
  switch (kind) {
    case RenewalKind::Exponential: return "exponential";
    case RenewalKind::Deterministic: return "deterministic";
    case RenewalKind::Erlang: return "erlang";
    case RenewalKind::HyperExponential: return "hyperexponential";
    case RenewalKind::Uniform: return "uniform";
  }
  return "?";
}

RenewalKind renewal_kind_from_string(std::string_view name) {
  if (name == "exponential") return RenewalKind::Exponential;
  if (name == "deterministic") return RenewalKind::Deterministic;
  if (name == "erlang") return RenewalKind::Erlang;
  if (name == "hyperexponential") return RenewalKind::HyperExponential;
  if (name == "uniform") return RenewalKind::Uniform;
  throw std::invalid_argument("unknown renewal kind '" + std::string(name) + "'");
}

}  // namespace sdq
