#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace iotauth {

// One multi-feature channel/device measurement. Flattened component order is
// rssi, cfo, gains[0..d). rssi is in dBm, cfo in kHz, gains unitless.
struct FeatureVector {
  double rssi = 0.0;
  double cfo = 0.0;
  std::vector<double> gains;

  std::size_t dim() const { return 2 + gains.size(); }

  double component(std::size_t i) const {
    if (i == 0) return rssi;
    if (i == 1) return cfo;
    if (i - 2 < gains.size()) return gains[i - 2];
    throw std::out_of_range("FeatureVector::component");
  }

  std::vector<double> flatten() const {
    std::vector<double> v;
    v.reserve(dim());
    v.push_back(rssi);
    v.push_back(cfo);
    v.insert(v.end(), gains.begin(), gains.end());
    return v;
  }

  bool finite() const {
    if (!std::isfinite(rssi) || !std::isfinite(cfo)) return false;
    for (double g : gains)
      if (!std::isfinite(g)) return false;
    return true;
  }
};

inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("squared_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a.component(i) - b.component(i);
    s += d * d;
  }
  return s;
}

inline double dot(const FeatureVector& a, const FeatureVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a.component(i) * b.component(i);
  return s;
}

}  // namespace iotauth
