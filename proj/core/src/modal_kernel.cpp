#include "coatscat/modal_kernel.hpp"

#include "coatscat/error.hpp"
#include "coatscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace coatscat {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPsiOrder = 8;

/// Calls f(psi, weight) for a rule on (0, pi) graded towards psi = 0 when the
/// rings nearly touch. The peak of 1/R there has width ~ delta / sqrt(rho rho').
template <class F> void for_each_psi_node(double delta, double rho_product, double rho_sum, double k, F &&f) {
  const auto rule = gauss_legendre(kPsiOrder);
  const double max_width = std::min(kPi / 4, 4.0 / std::max(1e-12, k * rho_sum));

  auto emit = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < kPsiOrder; ++i)
      f(mid + half * rule.nodes[i], half * rule.weights[i]);
  };
  auto uniform = [&](double lo, double width) {
    const int count = static_cast<int>(std::ceil((kPi - lo) / width - 1e-12));
    const double step = (kPi - lo) / count;
    for (int i = 0; i < count; ++i)
      emit(lo + i * step, lo + (i + 1) * step);
  };

  const double spread = rho_product > 0.0 ? delta / std::sqrt(rho_product) : kPi;
  if (spread >= 1.0) {
    uniform(0.0, std::min(kPi / 2, max_width));
    return;
  }
  double lo = 0.0;
  double hi = std::max(spread, 1e-300);
  while (hi < max_width) {
    emit(lo, hi);
    lo = hi;
    hi *= 2.0;
  }
  uniform(lo, max_width);
}

} // namespace

ModalKernels modal_kernels(int m, const RingPoint &obs, const RingPoint &src, double k, bool with_curl) {
  const double drho = obs.rho - src.rho;
  const double dzz = obs.z - src.z;
  const double delta2 = drho * drho + dzz * dzz;
  const double rho_product = obs.rho * src.rho;
  if (delta2 == 0.0)
    throw Error("modal kernel evaluated at coincident points");

  using cd = std::complex<double>;
  cd vtt = 0.0, vtp = 0.0, vpt = 0.0, vpp = 0.0, sc = 0.0;
  cd ctt = 0.0, ctp = 0.0, cpt = 0.0, cpp = 0.0;
  const double inv4pi = 1.0 / (4.0 * kPi);

  for_each_psi_node(std::sqrt(delta2), rho_product, obs.rho + src.rho, k, [&](double psi, double w) {
    const double sh = std::sin(0.5 * psi), ch = std::cos(0.5 * psi);
    const double c = 1.0 - 2.0 * sh * sh;
    const double s = 2.0 * sh * ch;
    const double r = std::sqrt(delta2 + 4.0 * rho_product * sh * sh);
    const double kr = k * r;
    const cd phase(std::cos(kr), -std::sin(kr));
    const cd g = phase * (inv4pi / r);
    const double cm = std::cos(m * psi), sm = std::sin(m * psi);
    // Symmetric pair (psi, -psi): even parts get 2 cos(m psi), odd parts -2j sin(m psi).
    const cd even = (2.0 * w * cm) * g;
    const cd odd = cd(0.0, -2.0 * w * sm) * g;

    vtt += (obs.drho * src.drho * c + obs.dz * src.dz) * even;
    vpp += c * even;
    vtp += obs.drho * s * odd;
    vpt += -src.drho * s * odd;
    sc += even;

    if (with_curl) {
      const double dx = obs.rho * c - src.rho;
      const double dy = obs.rho * s;
      // -grad-G factor: (1 + j k R) exp(-j k R) / (4 pi R^3), sign folded below.
      const cd g2 = -g * cd(1.0, kr) / (r * r);
      const cd even2 = (2.0 * w * cm) * g2;
      const cd odd2 = cd(0.0, -2.0 * w * sm) * g2;
      ctt += (obs.drho * c * dy * src.dz + obs.drho * s * (dzz * src.drho - dx * src.dz) -
              obs.dz * dy * src.drho) *
             odd2;
      cpt += (-s * dy * src.dz + c * (dzz * src.drho - dx * src.dz)) * even2;
      ctp += (-obs.drho * c * dzz + obs.dz * dx) * even2;
      cpp += (s * dzz) * odd2;
    }
  });

  ModalKernels out;
  out.vector[0][0] = vtt;
  out.vector[0][1] = vtp;
  out.vector[1][0] = vpt;
  out.vector[1][1] = vpp;
  out.scalar = sc;
  out.curl[0][0] = ctt;
  out.curl[0][1] = ctp;
  out.curl[1][0] = cpt;
  out.curl[1][1] = cpp;
  return out;
}

std::complex<double> modal_green(int m, MeridianPoint src, MeridianPoint obs, double k) {
  if (src.rho < 0.0 || obs.rho < 0.0)
    throw Error("modal_green: rho must be non-negative");
  const RingPoint o{obs.rho, obs.z, 0.0, 0.0};
  const RingPoint s{src.rho, src.z, 0.0, 0.0};
  if ((obs.rho == 0.0 || src.rho == 0.0) && m != 0)
    return 0.0; // the azimuthal integrand is constant on the axis
  return modal_kernels(m, o, s, k, false).scalar;
}

} // namespace coatscat
