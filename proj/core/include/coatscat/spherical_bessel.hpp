#pragma once

#include <vector>

namespace coatscat {

/// j_0(x) ... j_nmax(x) by Miller's downward recurrence, normalized against
/// the closed forms of j_0 and j_1. Requires x >= 0.
std::vector<double> spherical_j(int nmax, double x);

/// y_0(x) ... y_nmax(x) by upward recurrence. Requires x > 0.
std::vector<double> spherical_y(int nmax, double x);

/// Riccati-Bessel values and derivatives for orders 0..nmax.
struct RiccatiBessel {
  std::vector<double> psi;   ///< x j_n(x)
  std::vector<double> dpsi;
  std::vector<double> chi;   ///< -x y_n(x)
  std::vector<double> dchi;
};

RiccatiBessel riccati_bessel(int nmax, double x);

} // namespace coatscat
