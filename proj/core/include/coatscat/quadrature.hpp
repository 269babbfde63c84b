#pragma once

#include <span>

namespace coatscat {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

inline constexpr int kMaxGaussOrder = 64;

/// Returns the n-point rule (1 <= n <= kMaxGaussOrder). Rules are computed
/// once on first use and shared.
GaussRule gauss_legendre(int n);

} // namespace coatscat
