#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "iotauth/feature.hpp"
#include "iotauth/rng.hpp"

namespace iotauth {

// Welford's online mean/variance.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  std::size_t count() const { return n_; }
  double mean() const { return n_ > 0 ? mean_ : 0.0; }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double stddev() const { return std::sqrt(variance()); }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct Verdict {
  std::vector<bool> flags;
  std::vector<double> z_scores;

  bool any() const {
    for (bool f : flags)
      if (f) return true;
    return false;
  }
};

// Per-feature online anomaly gate. During warmup every sample trains the
// profile and nothing is flagged; afterwards a sample whose |z| exceeds
// k_sigma is flagged and excluded from that feature's accumulator, so an
// adversary cannot drag the profile toward its own distribution.
class FeatureProfile {
 public:
  explicit FeatureProfile(std::vector<std::size_t> monitored_components,
                          std::size_t warmup_n = 30)
      : components_(std::move(monitored_components)),
        warmup_n_(warmup_n),
        stats_(components_.size()) {
    if (components_.empty())
      throw std::invalid_argument("FeatureProfile: nothing to monitor");
  }

  Verdict observe(const FeatureVector& sample, double k_sigma) {
    if (!(k_sigma > 0.0))
      throw std::invalid_argument("FeatureProfile::observe: k_sigma must be > 0");
    Verdict v;
    v.flags.resize(components_.size(), false);
    v.z_scores.resize(components_.size(), 0.0);
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const double x = sample.component(components_[i]);
      RunningStats& s = stats_[i];
      if (s.count() < warmup_n_) {
        s.push(x);
        continue;
      }
      const double sd = s.stddev();
      double z;
      if (sd > 0.0) {
        z = (x - s.mean()) / sd;
      } else {
        z = (x == s.mean()) ? 0.0 : std::numeric_limits<double>::infinity() *
                                        (x > s.mean() ? 1.0 : -1.0);
      }
      v.z_scores[i] = z;
      v.flags[i] = std::abs(z) > k_sigma;
      if (!v.flags[i]) s.push(x);
    }
    return v;
  }

  const RunningStats& stats(std::size_t i) const { return stats_.at(i); }
  const std::vector<std::size_t>& monitored() const { return components_; }
  std::size_t warmup() const { return warmup_n_; }

 private:
  std::vector<std::size_t> components_;
  std::size_t warmup_n_;
  std::vector<RunningStats> stats_;
};

// Behavioral evidence for on-off injection attacks: fires with probability
// p_detect while the attacker is active, p_false otherwise.
inline bool detect_injection(bool attack_active, double p_detect, double p_false,
                             Rng& rng) {
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(p_detect) || !in01(p_false))
    throw std::invalid_argument("detect_injection: probabilities must be in [0,1]");
  return bernoulli(rng, attack_active ? p_detect : p_false);
}

}  // namespace iotauth
