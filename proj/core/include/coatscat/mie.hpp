#pragma once

#include <complex>

namespace coatscat {

/// PEC sphere with an optional concentric lossless dielectric shell.
struct SphereSpec {
  double core_radius = 1.0;
  double shell_thickness = 0.0;
  double permittivity = 1.0;

  void validate() const;
};

/// Number of series terms used for a given outer size parameter (already
/// scaled by the refractive index of the densest medium).
int mie_term_count(double outer_size);

/// Backscatter amplitude e with sigma_back / (pi a^2) = |e|^2, a being the
/// unit length. Time dependence exp(+j omega t); phase referenced to the
/// sphere center, so a return from z0 carries exp(-2j kappa z0).
/// `terms` overrides the automatic truncation when positive.
std::complex<double> coated_sphere_fsr(double kappa, const SphereSpec &spec, int terms = 0);

/// Unit-radius PEC sphere.
std::complex<double> pec_sphere_fsr(double kappa, int terms = 0);

} // namespace coatscat
