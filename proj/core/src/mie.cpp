#include "coatscat/mie.hpp"

#include "coatscat/error.hpp"
#include "coatscat/spherical_bessel.hpp"

#include <cmath>

namespace coatscat {

void SphereSpec::validate() const {
  if (!(core_radius > 0.0))
    throw Error("sphere core radius must be positive");
  if (!(shell_thickness >= 0.0))
    throw Error("sphere shell thickness must be non-negative");
  if (!(permittivity >= 1.0))
    throw Error("sphere shell permittivity must be >= 1");
}

int mie_term_count(double outer_size) {
  return static_cast<int>(std::ceil(outer_size + 4.0 * std::cbrt(outer_size) + 10.0));
}

std::complex<double> coated_sphere_fsr(double kappa, const SphereSpec &spec, int terms) {
  if (!(kappa > 0.0))
    throw Error("Mie series needs kappa > 0");
  spec.validate();
  using cd = std::complex<double>;
  constexpr cd I{0.0, 1.0};

  const double m = std::sqrt(spec.permittivity);
  const double outer = spec.core_radius + spec.shell_thickness;
  const double x = kappa * outer;
  const double xc = kappa * spec.core_radius;
  const int nmax = terms > 0 ? terms : mie_term_count(x * m);

  const auto out = riccati_bessel(nmax, x);
  const auto shell_outer = riccati_bessel(nmax, m * x);
  const auto shell_inner = riccati_bessel(nmax, m * xc);

  // exp(-i omega t) convention internally; conjugated on return.
  cd sum = 0.0;
  for (int n = 1; n <= nmax; ++n) {
    const auto k = static_cast<std::size_t>(n);
    const cd xi = cd(out.psi[k], -out.chi[k]);
    const cd dxi = cd(out.dpsi[k], -out.dchi[k]);

    // Shell radial functions vanishing appropriately on the conductor.
    const double ta = -shell_inner.dpsi[k] / shell_inner.dchi[k];
    const double tb = -shell_inner.psi[k] / shell_inner.chi[k];
    const double ua = shell_outer.psi[k] + ta * shell_outer.chi[k];
    const double dua = shell_outer.dpsi[k] + ta * shell_outer.dchi[k];
    const double ub = shell_outer.psi[k] + tb * shell_outer.chi[k];
    const double dub = shell_outer.dpsi[k] + tb * shell_outer.dchi[k];

    const cd an = (m * ua * out.dpsi[k] - out.psi[k] * dua) / (m * ua * dxi - xi * dua);
    const cd bn = (ub * out.dpsi[k] - m * out.psi[k] * dub) / (ub * dxi - m * xi * dub);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += (2.0 * n + 1.0) * sign * (bn - an);
  }
  return std::conj(I * sum / kappa);
}

std::complex<double> pec_sphere_fsr(double kappa, int terms) {
  return coated_sphere_fsr(kappa, SphereSpec{1.0, 0.0, 1.0}, terms);
}

} // namespace coatscat
