#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>

namespace sdq {

using Rng = std::mt19937_64;

// pass as the cap to get the untruncated transform
inline constexpr double kNoCap = std::numeric_limits<double>::infinity();

enum class RenewalKind { Exponential, Deterministic, Erlang, HyperExponential, Uniform };

struct RenewalParams {
  int k = 1;                // Erlang phases
  double p = 0.5;           // hyperexponential branch probability
  double r1 = 1.0;          // hyperexponential rates (rescaled to unit mean)
  double r2 = 1.0;
  double half_width = 0.0;  // uniform on [1-w, 1+w]

  bool operator==(const RenewalParams&) const = default;
};

// Unit-mean renewal law. Only make_renewal builds valid ones.
class RenewalSpec {
 public:
  RenewalSpec();  // Exponential(1)

  RenewalKind kind() const { return kind_; }
  // parameters as given by the user
  const RenewalParams& params() const { return raw_; }
  // rates after rescaling to mean 1
  const RenewalParams& normalized() const { return norm_; }

  double mean() const { return 1.0; }
  double scv() const;
  double second_moment() const { return 1.0 + scv(); }
  double third_moment() const;

  bool operator==(const RenewalSpec& o) const { return kind_ == o.kind_ && raw_ == o.raw_; }

 private:
  friend RenewalSpec make_renewal(RenewalKind, const RenewalParams&);
  RenewalKind kind_;
  RenewalParams raw_;
  RenewalParams norm_;
};

RenewalSpec make_renewal(RenewalKind kind, const RenewalParams& params = {});

double sample(const RenewalSpec& spec, Rng& rng);

// E[(T^c)^order exp(-s (T^c))] with T^c = min(T, cap), order 0..2.
// order 0 is the truncated Laplace transform. Returns +inf when it diverges.
double truncated_laplace_moment(const RenewalSpec& spec, double s, double cap, int order);

inline double truncated_laplace(const RenewalSpec& spec, double s, double cap) {
  return truncated_laplace_moment(spec, s, cap, 0);
}

// int_0^c t^m exp(-a t) dt, any sign of a; c may be +inf
double incomplete_gamma_integral(int m, double a, double c);

std::string to_string(RenewalKind kind);
RenewalKind renewal_kind_from_string(std::string_view name);

}  // namespace sdq
