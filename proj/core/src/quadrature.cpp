#include "coatscat/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace coatscat {
namespace {

struct RuleStore {
  std::array<std::vector<double>, kMaxGaussOrder + 1> nodes;
  std::array<std::vector<double>, kMaxGaussOrder + 1> weights;

  RuleStore() {
    for (int n = 1; n <= kMaxGaussOrder; ++n) {
      auto &x = nodes[n];
      auto &w = weights[n];
      x.resize(n);
      w.resize(n);
      for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = 0.0;
          for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
          }
          dp = n * (z * p0 - p1) / (z * z - 1.0);
          const double dz = p0 / dp;
          z -= dz;
          if (std::abs(dz) < 1e-16)
            break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
      }
      if (n % 2 == 1)
        x[n / 2] = 0.0;
    }
  }
};

const RuleStore &store() {
  static const RuleStore s;
  return s;
}

} // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1 || n > kMaxGaussOrder)
    throw std::out_of_range("gauss_legendre: unsupported order");
  const auto &s = store();
  return {s.nodes[n], s.weights[n]};
}

} // namespace coatscat
