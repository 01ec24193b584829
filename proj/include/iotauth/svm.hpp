#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "iotauth/bits.hpp"
#include "iotauth/errors.hpp"
#include "iotauth/feature.hpp"

namespace iotauth {

enum class KernelKind { linear, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::rbf;
  double gamma = 1.0;  // rbf width, used iff kind == rbf

  static KernelSpec linear() { return {KernelKind::linear, 0.0}; }
  static KernelSpec rbf(double gamma) {
    KernelSpec k{KernelKind::rbf, gamma};
    k.validate();
    return k;
  }
  // gamma = 1/dim, assuming roughly unit-variance components.
  static KernelSpec rbf_for_dim(std::size_t feature_dim) {
    return rbf(1.0 / static_cast<double>(feature_dim));
  }

  void validate() const {
    if (kind == KernelKind::rbf && !(gamma > 0.0))
      throw std::invalid_argument("KernelSpec: rbf gamma must be > 0");
  }

  double operator()(const FeatureVector& a, const FeatureVector& b) const {
    switch (kind) {
      case KernelKind::linear:
        return dot(a, b);
      case KernelKind::rbf:
        return std::exp(-gamma * squared_distance(a, b));
    }
    return 0.0;  // unreachable
  }
};

// Trained decision surface: f(x) = sum_i dual_weights[i] * K(sp[i], x) + bias
// with dual_weights[i] = alpha_i * y_i for the retained support points.
struct Boundary {
  std::vector<FeatureVector> support_points;
  std::vector<double> dual_weights;
  double bias = 0.0;
  KernelSpec kernel;

  // Wire size when the gateway transmits the boundary: kind tag, gamma, bias,
  // counts, then one feature vector plus one weight per support point, all
  // doubles at 64 bits.
  std::uint64_t serialized_size_bits() const {
    const std::uint64_t dim =
        support_points.empty() ? 0 : support_points.front().dim();
    return 8 + 64 + 64 + 32 + 32 +
           static_cast<std::uint64_t>(support_points.size()) * (dim + 1) * 64;
  }
};

struct QuantizerConfig {
  double guard_epsilon = 0.5;   // drop rounds with |f| below this
  double soft_margin_C = 10.0;
  std::size_t target_bits = 128;

  void validate() const {
    if (guard_epsilon < 0.0)
      throw std::invalid_argument("QuantizerConfig: guard_epsilon must be >= 0");
    if (!(soft_margin_C > 0.0))
      throw std::invalid_argument("QuantizerConfig: soft_margin_C must be > 0");
    if (target_bits < 1)
      throw std::invalid_argument("QuantizerConfig: target_bits must be >= 1");
  }
};

struct QuantizedBits {
  BitString bits;
  std::vector<std::size_t> kept_indices;  // strictly increasing round indices
};

inline double decision_value(const Boundary& boundary, const FeatureVector& x) {
  double f = boundary.bias;
  for (std::size_t i = 0; i < boundary.support_points.size(); ++i)
    f += boundary.dual_weights[i] * boundary.kernel(boundary.support_points[i], x);
  return f;
}

// ---------------------------------------------------------------------------
// Unsupervised two-partition labeling (2-means with deterministic seeding).
// Label +1 goes to the cluster with the higher mean first component; remaining
// components break ties lexicographically.
// ---------------------------------------------------------------------------

inline std::vector<int> label_two_partitions(const std::vector<FeatureVector>& points) {
  if (points.size() < 2)
    throw DegenerateInput("label_two_partitions: need at least 2 points");
  const std::size_t n = points.size();
  const std::size_t d = points.front().dim();

  bool all_same = true;
  for (const auto& p : points) {
    if (p.dim() != d)
      throw std::invalid_argument("label_two_partitions: dimension mismatch");
    if (squared_distance(p, points.front()) > 0.0) all_same = false;
  }
  if (all_same) throw DegenerateInput("label_two_partitions: all points identical");

  auto flat = [&](std::size_t i) { return points[i].flatten(); };

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = flat(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += v[j] / static_cast<double>(n);
  }
  auto sqdist_to = [&](std::size_t i, const std::vector<double>& c) {
    const auto v = flat(i);
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += (v[j] - c[j]) * (v[j] - c[j]);
    return s;
  };

  // Farthest-point seeding; ties resolved by lower index.
  std::size_t seed0 = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sqdist_to(i, mean);
    if (s > best) { best = s; seed0 = i; }
  }
  std::vector<double> c0 = flat(seed0);
  std::size_t seed1 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sqdist_to(i, c0);
    if (s > best) { best = s; seed1 = i; }
  }
  std::vector<double> c1 = flat(seed1);

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 64; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = sqdist_to(i, c1) < sqdist_to(i, c0) ? 1 : 0;
      if (a != assign[i]) { assign[i] = a; changed = true; }
    }
    std::size_t n0 = 0, n1 = 0;
    for (int a : assign) (a == 0 ? n0 : n1)++;
    if (n0 == 0 || n1 == 0) {
      // Reseed the empty cluster with the point farthest from the other.
      const std::vector<double>& other = (n0 == 0) ? c1 : c0;
      std::size_t far = 0;
      best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = sqdist_to(i, other);
        if (s > best) { best = s; far = i; }
      }
      assign[far] = (n0 == 0) ? 0 : 1;
      changed = true;
    }
    std::vector<double> m0(d, 0.0), m1(d, 0.0);
    n0 = n1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = flat(i);
      if (assign[i] == 0) {
        ++n0;
        for (std::size_t j = 0; j < d; ++j) m0[j] += v[j];
      } else {
        ++n1;
        for (std::size_t j = 0; j < d; ++j) m1[j] += v[j];
      }
    }
    for (std::size_t j = 0; j < d; ++j) {
      m0[j] /= static_cast<double>(n0);
      m1[j] /= static_cast<double>(n1);
    }
    c0.swap(m0);
    c1.swap(m1);
    if (!changed && iter > 0) break;
  }

  int plus_cluster = 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (c0[j] > c1[j]) { plus_cluster = 0; break; }
    if (c0[j] < c1[j]) { plus_cluster = 1; break; }
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = (assign[i] == plus_cluster) ? +1 : -1;
  return labels;
}

// ---------------------------------------------------------------------------
// Soft-margin kernel SVM trained with SMO (pairwise analytic dual steps).
// ---------------------------------------------------------------------------

struct TrainOptions {
  double tol = 1e-3;             // KKT violation tolerance
  std::size_t max_passes = 10000;
};

struct TrainResult {
  Boundary boundary;
  std::vector<double> alphas;  // one per training point
  double bias = 0.0;
  std::size_t passes = 0;
  double dual_objective = 0.0;
  double max_kkt_violation = 0.0;
};

namespace detail {

class SmoSolver {
 public:
  SmoSolver(const std::vector<FeatureVector>& x, const std::vector<int>& y,
            const KernelSpec& kernel, double c, const TrainOptions& opts)
      : x_(x), y_(y), c_(c), opts_(opts), n_(x.size()),
        alpha_(n_, 0.0), g_(n_, 0.0), k_(n_ * n_), kernel_(kernel) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        k_[i * n_ + j] = k_[j * n_ + i] = kernel_(x_[i], x_[j]);
  }

  void solve() {
    bool examine_all = true;
    bool refined = false;  // bias already finalized for the current alphas
    std::size_t pass = 0;
    while (pass < opts_.max_passes) {
      ++pass;
      int changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!examine_all && (alpha_[i] <= 0.0 || alpha_[i] >= c_)) continue;
        changed += examine(i);
      }
      if (examine_all) {
        if (changed == 0) {
          // Converged under the running bias; settle the bias properly and
          // re-examine once, since correcting it can expose violations.
          finalize_bias();
          if (max_kkt_violation() <= opts_.tol || refined) {
            passes_ = pass;
            return;
          }
          refined = true;
          continue;
        }
        refined = false;
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    throw NoConvergence("svm: SMO pass cap reached", duality_gap());
  }

  double error(std::size_t i) const { return g_[i] + b_ - y_[i]; }

  double dual_objective() const {
    double obj = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      obj += alpha_[i] - 0.5 * alpha_[i] * y_[i] * g_[i];
    return obj;
  }

  double max_kkt_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double margin = y_[i] * (g_[i] + b_);
      double v = 0.0;
      if (alpha_[i] <= kBoundTol)
        v = std::max(0.0, 1.0 - margin);
      else if (alpha_[i] >= c_ - kBoundTol)
        v = std::max(0.0, margin - 1.0);
      else
        v = std::abs(margin - 1.0);
      worst = std::max(worst, v);
    }
    return worst;
  }

  double duality_gap() const {
    double primal = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      quad += alpha_[i] * y_[i] * g_[i];
      primal += c_ * std::max(0.0, 1.0 - y_[i] * (g_[i] + b_));
    }
    primal += 0.5 * quad;
    return primal - dual_objective();
  }

  const std::vector<double>& alphas() const { return alpha_; }
  double bias() const { return b_; }
  std::size_t passes() const { return passes_; }

 private:
  static constexpr double kBoundTol = 1e-10;
  static constexpr double kStepEps = 1e-12;

  int examine(std::size_t i2) {
    const double y2 = y_[i2];
    const double r2 = error(i2) * y2;
    const bool violated = (r2 < -opts_.tol && alpha_[i2] < c_) ||
                          (r2 > opts_.tol && alpha_[i2] > 0.0);
    if (!violated) return 0;

    // Second choice: largest |E1 - E2| among non-bound points.
    const double e2 = error(i2);
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) { best_gap = gap; best = i; }
    }
    if (best < n_ && take_step(best, i2)) return 1;
    // Then sweep non-bound, then everything, from a position-derived offset
    // to stay deterministic.
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i = (i2 + 1 + k) % n_;
      if (alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
      if (take_step(i, i2)) return 1;
    }
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i = (i2 + 1 + k) % n_;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double alph1 = alpha_[i1], alph2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = error(i1), e2 = error(i2);
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, alph2 - alph1);
      hi = std::min(c_, c_ + alph2 - alph1);
    } else {
      lo = std::max(0.0, alph1 + alph2 - c_);
      hi = std::min(c_, alph1 + alph2);
    }
    if (lo >= hi) return false;

    const double k11 = k_[i1 * n_ + i1];
    const double k12 = k_[i1 * n_ + i2];
    const double k22 = k_[i2 * n_ + i2];
    const double eta = k11 + k22 - 2.0 * k12;

    double a2;
    if (eta > 0.0) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // Objective is linear along the constraint segment; compare endpoints.
      const double lo_gain = objective_delta(i1, i2, lo);
      const double hi_gain = objective_delta(i1, i2, hi);
      if (lo_gain > hi_gain + kStepEps)
        a2 = lo;
      else if (hi_gain > lo_gain + kStepEps)
        a2 = hi;
      else
        return false;
    }
    if (std::abs(a2 - alph2) < kStepEps * (a2 + alph2 + kStepEps)) return false;

    double a1 = alph1 + s * (alph2 - a2);
    if (a1 < 0.0) a1 = 0.0;
    if (a1 > c_) a1 = c_;

    const double d1 = a1 - alph1, d2 = a2 - alph2;
    const double b1 = b_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
    const double b2 = b_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
    if (a1 > 0.0 && a1 < c_)
      b_ = b1;
    else if (a2 > 0.0 && a2 < c_)
      b_ = b2;
    else
      b_ = 0.5 * (b1 + b2);

    for (std::size_t k = 0; k < n_; ++k)
      g_[k] += y1 * d1 * k_[i1 * n_ + k] + y2 * d2 * k_[i2 * n_ + k];
    alpha_[i1] = a1;
    alpha_[i2] = a2;
    return true;
  }

  // The pairwise updates track the bias only through the last pair touched.
  // Recompute it from the final alphas: average y_i - g_i over free support
  // vectors, or the midpoint of the feasible interval when every alpha sits
  // at a bound (then the optimal bias is an interval, not a point).
  void finalize_bias() {
    double sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > kBoundTol && alpha_[i] < c_ - kBoundTol) {
        sum += y_[i] - g_[i];
        ++free_count;
      }
    }
    if (free_count > 0) {
      b_ = sum / static_cast<double>(free_count);
      return;
    }
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const bool at_zero = alpha_[i] <= kBoundTol;
      const double edge = y_[i] - g_[i];  // b making this point's margin exactly 1
      if ((at_zero && y_[i] > 0) || (!at_zero && y_[i] < 0))
        lo = std::max(lo, edge);
      else
        hi = std::min(hi, edge);
    }
    if (lo <= hi && std::isfinite(lo) && std::isfinite(hi))
      b_ = 0.5 * (lo + hi);
    else if (std::isfinite(lo))
      b_ = lo;
    else if (std::isfinite(hi))
      b_ = hi;
  }

  // Dual objective change if alpha_[i2] moved to a2 along the constraint line.
  double objective_delta(std::size_t i1, std::size_t i2, double a2) const {
    const double s = y_[i1] * y_[i2];
    const double d2 = a2 - alpha_[i2];
    const double d1 = -s * d2;
    const double k11 = k_[i1 * n_ + i1];
    const double k12 = k_[i1 * n_ + i2];
    const double k22 = k_[i2 * n_ + i2];
    return d1 + d2 - y_[i1] * d1 * g_[i1] - y_[i2] * d2 * g_[i2] -
           0.5 * (d1 * d1 * k11 + d2 * d2 * k22) - s * d1 * d2 * k12;
  }

  const std::vector<FeatureVector>& x_;
  const std::vector<int>& y_;
  double c_;
  TrainOptions opts_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> g_;  // g[i] = sum_j alpha_j y_j K(i,j), bias excluded
  std::vector<double> k_;
  KernelSpec kernel_;
  double b_ = 0.0;
  std::size_t passes_ = 0;
};

}  // namespace detail

inline TrainResult train_svm(const std::vector<FeatureVector>& points,
                             const std::vector<int>& labels,
                             const KernelSpec& kernel, double c,
                             const TrainOptions& opts = {}) {
  kernel.validate();
  if (points.size() != labels.size() || points.empty())
    throw std::invalid_argument("train_svm: points/labels size mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("train_svm: C must be > 0");
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw std::invalid_argument("train_svm: labels must be -1/+1");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("train_svm: both classes must be present");

  detail::SmoSolver solver(points, labels, kernel, c, opts);
  solver.solve();

  TrainResult result;
  result.alphas = solver.alphas();
  result.bias = solver.bias();
  result.passes = solver.passes();
  result.dual_objective = solver.dual_objective();
  result.max_kkt_violation = solver.max_kkt_violation();
  result.boundary.kernel = kernel;
  result.boundary.bias = solver.bias();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (result.alphas[i] > 1e-10) {
      result.boundary.support_points.push_back(points[i]);
      result.boundary.dual_weights.push_back(result.alphas[i] * labels[i]);
    }
  }
  return result;
}

inline Boundary train_boundary(const std::vector<FeatureVector>& points,
                               const std::vector<int>& labels,
                               const KernelSpec& kernel, double c,
                               const TrainOptions& opts = {}) {
  return train_svm(points, labels, kernel, c, opts).boundary;
}

// Dual objective recomputed from a boundary alone (zero-alpha points drop out).
inline double dual_objective(const Boundary& b) {
  double obj = 0.0;
  for (std::size_t i = 0; i < b.support_points.size(); ++i) {
    obj += std::abs(b.dual_weights[i]);
    for (std::size_t j = 0; j < b.support_points.size(); ++j)
      obj -= 0.5 * b.dual_weights[i] * b.dual_weights[j] *
             b.kernel(b.support_points[i], b.support_points[j]);
  }
  return obj;
}

// ---------------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------------

// bit = 1 iff f(probe) > 0; rounds with |f| < guard_epsilon are dropped.
inline QuantizedBits quantize(const std::vector<FeatureVector>& probes,
                              const Boundary& boundary,
                              const QuantizerConfig& config) {
  config.validate();
  if (probes.empty()) throw std::invalid_argument("quantize: no probes");
  QuantizedBits out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double f = decision_value(boundary, probes[i]);
    if (std::abs(f) < config.guard_epsilon) continue;
    out.bits.push_back(f > 0.0);
    out.kept_indices.push_back(i);
  }
  if (out.bits.size() < config.target_bits)
    throw InsufficientBits(out.bits.size(), config.target_bits);
  return out;
}

// RSS threshold baseline: bit = 1 iff rssi > threshold, every round kept.
inline QuantizedBits rss_baseline_quantize(const std::vector<FeatureVector>& probes,
                                           double threshold) {
  if (probes.empty())
    throw std::invalid_argument("rss_baseline_quantize: no probes");
  QuantizedBits out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    out.bits.push_back(probes[i].rssi > threshold);
    out.kept_indices.push_back(i);
  }
  return out;
}

}  // namespace iotauth
