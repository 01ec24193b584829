#pragma once

// Test-only exact reference for tiny soft-margin SVM duals.
//
// Enumerates every assignment of the n dual variables to {0, C, free}
// (3^n candidates, n <= 10), solves the KKT equality system for the free
// alphas and the bias, keeps feasible candidates, and returns the best dual
// objective. Concavity of the dual makes the best feasible KKT candidate the
// global optimum, independent of the SMO path under test.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "iotauth/feature.hpp"
#include "iotauth/svm.hpp"

namespace iotauth::oracle {

struct OracleSolution {
  double objective = 0.0;
  std::vector<double> alphas;
};

inline OracleSolution brute_force_dual_optimum(
    const std::vector<FeatureVector>& points, const std::vector<int>& labels,
    const KernelSpec& kernel, double c) {
  const std::size_t n = points.size();
  Eigen::MatrixXd k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i, j) = kernel(points[i], points[j]);

  auto objective_of = [&](const std::vector<double>& a) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      obj += a[i];
      for (std::size_t j = 0; j < n; ++j)
        obj -= 0.5 * a[i] * a[j] * labels[i] * labels[j] * k(i, j);
    }
    return obj;
  };

  OracleSolution best;
  best.objective = -1.0;
  bool found = false;

  std::vector<int> status(n, 0);  // 0 = zero, 1 = at C, 2 = free
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    std::vector<std::size_t> free_idx;
    std::vector<double> alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      status[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (status[i] == 1) alpha[i] = c;
      if (status[i] == 2) free_idx.push_back(i);
    }

    const std::size_t f = free_idx.size();
    if (f == 0) {
      // All at bounds: feasible iff the equality constraint already holds.
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += alpha[i] * labels[i];
      if (std::abs(sum) > 1e-9) continue;
    } else {
      // For free i: sum_j alpha_j y_j K(i,j) + b = y_i, plus sum alpha_j y_j = 0.
      Eigen::MatrixXd a(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      for (std::size_t r = 0; r < f; ++r) {
        const std::size_t i = free_idx[r];
        for (std::size_t s = 0; s < f; ++s) {
          const std::size_t j = free_idx[s];
          a(r, s) = labels[j] * k(i, j);
        }
        a(r, f) = 1.0;
        double fixed = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (status[j] == 1) fixed += c * labels[j] * k(i, j);
        rhs(r) = labels[i] - fixed;
      }
      for (std::size_t s = 0; s < f; ++s) a(f, s) = labels[free_idx[s]];
      a(f, f) = 0.0;
      double fixed_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (status[j] == 1) fixed_sum += c * labels[j];
      rhs(f) = -fixed_sum;

      const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
      if (!((a * sol - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()))) continue;
      bool feasible = true;
      for (std::size_t r = 0; r < f; ++r) {
        const double v = sol(r);
        if (v < -1e-9 || v > c + 1e-9) { feasible = false; break; }
        alpha[free_idx[r]] = std::clamp(v, 0.0, c);
      }
      if (!feasible) continue;
    }

    const double obj = objective_of(alpha);
    if (!found || obj > best.objective) {
      found = true;
      best.objective = obj;
      best.alphas = alpha;
    }
  }
  return best;
}

}  // namespace iotauth::oracle
