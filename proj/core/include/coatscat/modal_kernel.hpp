#pragma once

#include "coatscat/geometry.hpp"

#include <complex>

namespace coatscat {

/// A point on a generatrix together with its unit tangent.
struct RingPoint {
  double rho = 0.0;
  double z = 0.0;
  double drho = 0.0;
  double dz = 0.0;
};

/// Azimuthal-mode integrals between an observation ring and a source ring,
/// integrated over the azimuth difference psi with weight exp(-j m psi).
/// Index 0 is the generatrix (t) direction, 1 the azimuthal direction;
/// the first index belongs to the observation point.
struct ModalKernels {
  std::complex<double> vector[2][2]{}; ///< e_q(psi) . e_p(0) G
  std::complex<double> scalar{};       ///< G
  std::complex<double> curl[2][2]{};   ///< e_q(psi) . (grad G x e_p(0))
};

/// G = exp(-j k R) / (4 pi R). Observation and source must not coincide.
ModalKernels modal_kernels(int m, const RingPoint &obs, const RingPoint &src, double k,
                           bool with_curl = true);

/// Azimuthal Fourier coefficient of the free-space Green's function,
/// integral over [0, 2 pi) of G cos(m psi). Coincident points are rejected.
std::complex<double> modal_green(int m, MeridianPoint src, MeridianPoint obs, double k);

} // namespace coatscat
