#include "coatscat/spherical_bessel.hpp"

#include "coatscat/error.hpp"

#include <algorithm>
#include <cmath>

namespace coatscat {

std::vector<double> spherical_j(int nmax, double x) {
  if (nmax < 0 || !(x >= 0.0))
    throw Error("spherical_j: invalid order or argument");
  std::vector<double> j(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const double big = std::max(static_cast<double>(nmax), x);
  const int start = static_cast<int>(big + 30.0 + std::ceil(std::sqrt(40.0 * big)));

  double next = 0.0;  // j_{n+1}
  double cur = 1e-300; // j_n, arbitrary scale
  for (int n = start; n > 0; --n) {
    if (n <= nmax)
      j[n] = cur;
    const double prev = (2.0 * n + 1.0) / x * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      for (int k = n; k <= nmax; ++k)
        j[k] *= 1e-250;
    }
  }
  j[0] = cur;
  // next now holds the unnormalized j_1.
  const double j0 = std::sin(x) / x;
  const double j1 = x < 1e-4 ? x / 3.0 * (1.0 - x * x / 10.0) : (std::sin(x) / x - std::cos(x)) / x;
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / cur : j1 / next;
  for (auto &v : j)
    v *= scale;
  return j;
}

std::vector<double> spherical_y(int nmax, double x) {
  if (nmax < 0 || !(x > 0.0))
    throw Error("spherical_y: invalid order or argument");
  std::vector<double> y(static_cast<std::size_t>(nmax) + 1);
  y[0] = -std::cos(x) / x;
  if (nmax >= 1)
    y[1] = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < nmax; ++n)
    y[n + 1] = (2.0 * n + 1.0) / x * y[n] - y[n - 1];
  return y;
}

RiccatiBessel riccati_bessel(int nmax, double x) {
  if (!(x > 0.0))
    throw Error("riccati_bessel: argument must be positive");
  const auto j = spherical_j(nmax, x);
  const auto y = spherical_y(nmax, x);
  RiccatiBessel rb;
  const auto size = static_cast<std::size_t>(nmax) + 1;
  rb.psi.resize(size);
  rb.chi.resize(size);
  rb.dpsi.resize(size);
  rb.dchi.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    rb.psi[n] = x * j[n];
    rb.chi[n] = -x * y[n];
  }
  // psi_0' = cos x, chi_0' = -sin x (chi_0 = cos x)
  rb.dpsi[0] = std::cos(x);
  rb.dchi[0] = -std::sin(x);
  for (std::size_t n = 1; n < size; ++n) {
    const double nn = static_cast<double>(n);
    rb.dpsi[n] = rb.psi[n - 1] - nn * rb.psi[n] / x;
    rb.dchi[n] = rb.chi[n - 1] - nn * rb.chi[n] / x;
  }
  return rb;
}

} // namespace coatscat
