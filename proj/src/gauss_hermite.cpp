#include "catdec/gauss_hermite.hpp"

#include <algorithm>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace catdec {
namespace {

// Orthonormal Hermite recurrence evaluated at z. Returns p_n and p_{n-1}
// rescaled by a common factor exp(-log_scale) to stay inside double range.
struct HermiteValues {
  double pn;
  double pn_minus_1;
  double log_scale;
};

HermiteValues orthonormal_hermite(int n, double z) {
  constexpr double kRescale = 1e150;
  const double log_rescale = std::log(kRescale);
  double p1 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  double p2 = 0.0;
  double log_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
    if (std::abs(p1) > kRescale) {
      p1 /= kRescale;
      p2 /= kRescale;
      log_scale += log_rescale;
    }
  }
  return {p1, p2, log_scale};
}

GaussHermiteRule compute_rule(int n) {
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = std::sqrt(std::numbers::pi);
    return rule;
  }
  // Golub-Welsch: the nodes are the eigenvalues of the symmetric Jacobi
  // matrix with zero diagonal and off-diagonal sqrt(j/2).
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off_diagonal(n - 1);
  for (int j = 1; j < n; ++j) off_diagonal[j - 1] = std::sqrt(0.5 * j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off_diagonal, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Gauss-Hermite eigenvalue solve failed for order " +
                             std::to_string(n));
  }
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();

  // Newton polish of the positive half, then weights from the derivative;
  // symmetry fixes the negative half.
  for (int i = n / 2; i < n; ++i) {
    double z = eigenvalues[i];
    if (n % 2 == 1 && i == n / 2) z = 0.0;
    for (int iter = 0; iter < 3 && z != 0.0; ++iter) {
      const HermiteValues h = orthonormal_hermite(n, z);
      z -= h.pn / (std::sqrt(2.0 * n) * h.pn_minus_1);
    }
    const HermiteValues h = orthonormal_hermite(n, z);
    const double derivative = std::sqrt(2.0 * n) * h.pn_minus_1;
    const double weight =
        std::exp(std::log(2.0) - 2.0 * (std::log(std::abs(derivative)) + h.log_scale));
    rule.nodes[i] = z;
    rule.weights[i] = weight;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[n - 1 - i] = weight;
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite_rule(int order) {
  if (order < 1 || order > 4096) {
    throw std::invalid_argument("Gauss-Hermite order out of range: " + std::to_string(order));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(compute_rule(order));
  return *slot;
}

}  // namespace catdec
