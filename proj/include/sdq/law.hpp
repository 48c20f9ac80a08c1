#pragma once

#include <cstdint>
#include <vector>

namespace sdq {

// Probability masses on queue lengths 0,1,2,...; scaled point of ell is ell/sqrt(n).
struct LatticeLaw {
  int n = 1;
  std::vector<double> mass;

  double at(std::int64_t ell) const {
    return ell >= 0 && static_cast<std::size_t>(ell) < mass.size() ? mass[static_cast<std::size_t>(ell)] : 0.0;
  }
};

// Fixed-width histogram on [0, width * bins), plus overflow.
struct Histogram {
  double width = 1e-3;
  std::vector<double> weight;
  double overflow = 0.0;

  double total() const;
  void add(double x, double w = 1.0);
  void merge(const Histogram& other);
};

}  // namespace sdq
