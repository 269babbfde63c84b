#include "coatscat/pulse.hpp"

#include "coatscat/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace coatscat {

PulseSpec::PulseSpec(double g_normalized, double kappa_max) : g_(g_normalized), kappa_max_(kappa_max) {
  if (!(g_ > 0.0) || !std::isfinite(g_))
    throw Error("pulse parameter g must be positive");
  if (!(kappa_max_ >= 0.0))
    throw Error("pulse truncation frequency must be non-negative");
}

PulseSpec PulseSpec::from_duration(double c_tau_over_a, double kappa_max) {
  if (!(c_tau_over_a > 0.0))
    throw Error("pulse duration must be positive");
  return PulseSpec(2.0 / c_tau_over_a, kappa_max);
}

double pulse_value(double ct_over_a, double z_over_a, const PulseSpec &pulse) {
  const double u = pulse.g() * (z_over_a - ct_over_a);
  return std::exp(-u * u);
}

double spectrum_value(double kappa, const PulseSpec &pulse) {
  const double g = pulse.g();
  return std::sqrt(std::numbers::pi) / g * std::exp(-kappa * kappa / (4.0 * g * g));
}

double truncation_fraction(const PulseSpec &pulse) {
  return std::erfc(pulse.kappa_max() / (2.0 * pulse.g()));
}

double truncation_fraction_quadrature(const PulseSpec &pulse) {
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [&](double k) { return spectrum_value(k, pulse); };
  const double inf = std::numeric_limits<double>::infinity();
  constexpr double tol = 1e-14;
  const double total = gauss_kronrod<double, 61>::integrate(f, 0.0, inf, 20, tol);
  const double tail = gauss_kronrod<double, 61>::integrate(f, pulse.kappa_max(), inf, 20, tol);
  return tail / total;
}

} // namespace coatscat
