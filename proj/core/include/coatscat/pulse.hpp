#pragma once

namespace coatscat {

/// Gaussian video pulse exp[-g^2 (z/c - t)^2], held in normalized units:
/// g a / c and the truncation frequency omega_max a / c.
class PulseSpec {
public:
  PulseSpec(double g_normalized, double kappa_max);

  /// From the duration c tau / a (tau = 2 / g).
  static PulseSpec from_duration(double c_tau_over_a, double kappa_max);

  double g() const { return g_; }
  /// c tau / a.
  double duration() const { return 2.0 / g_; }
  /// tau in c t / 2a units, the time axis of synthesized responses.
  double duration_half_units() const { return 1.0 / g_; }
  double kappa_max() const { return kappa_max_; }

private:
  double g_;
  double kappa_max_;
};

/// Incident pulse at time ct/a and axial position z/a; peaks at f(0, 0) = 1.
double pulse_value(double ct_over_a, double z_over_a, const PulseSpec &pulse);

/// Spectral density (sqrt(pi)/g) exp(-omega^2 / 4g^2), in units of a/c.
double spectrum_value(double kappa, const PulseSpec &pulse);

/// Share of the one-sided spectrum above kappa_max, from the erfc closed form.
double truncation_fraction(const PulseSpec &pulse);

/// The same ratio by adaptive Gauss-Kronrod quadrature of both integrals.
double truncation_fraction_quadrature(const PulseSpec &pulse);

} // namespace coatscat
