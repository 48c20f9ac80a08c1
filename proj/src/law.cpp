#include "sdq/law.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sdq {

double Histogram::total() const {
  return std::accumulate(weight.begin(), weight.end(), 0.0) + overflow;
}

void Histogram::add(double x, double w) {
  const double k = std::floor(x / width);
  if (k < 0.0) throw std::invalid_argument("Histogram::add: negative value");
  if (k >= static_cast<double>(weight.size())) {
    overflow += w;
    return;
  }
  weight[static_cast<std::size_t>(k)] += w;
}

void Histogram::merge(const Histogram& other) {
  if (other.width != width) throw std::invalid_argument("Histogram::merge: bin widths differ");
  if (other.weight.size() > weight.size()) weight.resize(other.weight.size(), 0.0);
  for (std::size_t i = 0; i < other.weight.size(); ++i) weight[i] += other.weight[i];
  overflow += other.overflow;
}

}  // namespace sdq
