#pragma once

#include <vector>

namespace catdec {

/// Nodes and weights for integral of f(x) exp(-x^2) over the real line.
/// Weights that underflow double precision are stored as exact zeros.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order (1 <= order <= 4096). Rules are computed once
/// and cached; the returned reference stays valid for the program lifetime.
const GaussHermiteRule& gauss_hermite_rule(int order);

}  // namespace catdec
