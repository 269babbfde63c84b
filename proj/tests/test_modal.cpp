#include "coatscat/modal_kernel.hpp"

#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

using namespace coatscat;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
using Vec = std::array<double, 3>;

Vec cross(const Vec &a, const Vec &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec &a, const Vec &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Unit vectors of the two current directions at azimuth phi.
std::array<Vec, 2> frame(const RingPoint &p, double phi) {
  return {Vec{p.drho * std::cos(phi), p.drho * std::sin(phi), p.dz}, Vec{-std::sin(phi), std::cos(phi), 0.0}};
}

// Trapezoid rule over the full period, which is spectrally accurate for
// smooth periodic integrands.
ModalKernels brute_force(int m, const RingPoint &obs, const RingPoint &src, double k, int n) {
  ModalKernels out;
  const auto es = frame(src, 0.0);
  const Vec rs{src.rho, 0.0, src.z};
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const double psi = h * i;
    const Vec ro{obs.rho * std::cos(psi), obs.rho * std::sin(psi), obs.z};
    const Vec d{ro[0] - rs[0], ro[1] - rs[1], ro[2] - rs[2]};
    const double r = std::sqrt(dot(d, d));
    const cd g = std::exp(cd(0.0, -k * r)) / (4.0 * kPi * r);
    const cd dg = -g * cd(1.0, k * r) / r;
    const cd w = std::exp(cd(0.0, -m * psi)) * h;
    const auto eo = frame(obs, psi);
    out.scalar += g * w;
    for (int q = 0; q < 2; ++q)
      for (int p = 0; p < 2; ++p) {
        out.vector[q][p] += dot(eo[q], es[p]) * g * w;
        const Vec c = cross(d, es[p]);
        out.curl[q][p] += dot(eo[q], c) / r * dg * w;
      }
  }
  return out;
}

} // namespace

TEST_SUITE("modal") {

TEST_CASE("modal Green's function vanishes on the axis for m = 1") {
  CHECK(std::abs(modal_green(1, {0.5, 0.0}, {0.0, 1.0}, 2.0)) < 1e-14);
  CHECK(std::abs(modal_green(1, {0.0, 0.3}, {0.7, 1.0}, 2.0)) < 1e-14);
}

TEST_CASE("modal Green's function against a brute-force azimuthal sum") {
  const struct {
    MeridianPoint src, obs;
    double k;
  } cases[] = {{{1.0, 0.0}, {0.6, 1.2}, 1.0}, {{0.4, -0.5}, {1.3, 0.9}, 2.25}, {{0.2, 0.0}, {0.25, 0.6}, 3.2}};
  for (const auto &c : cases)
    for (int m : {0, 1, 2}) {
      cd ref = 0.0;
      constexpr int n = 100000;
      for (int i = 0; i < n; ++i) {
        const double psi = 2.0 * kPi * i / n;
        const double r = std::sqrt(c.src.rho * c.src.rho + c.obs.rho * c.obs.rho -
                                   2.0 * c.src.rho * c.obs.rho * std::cos(psi) +
                                   (c.src.z - c.obs.z) * (c.src.z - c.obs.z));
        ref += std::exp(cd(0.0, -c.k * r)) / (4.0 * kPi * r) * std::cos(m * psi);
      }
      ref *= 2.0 * kPi / n;
      CHECK(std::abs(modal_green(m, c.src, c.obs, c.k) - ref) < 1e-10);
    }
}

TEST_CASE("static limit") {
  const auto a = modal_green(1, {1.0, 0.0}, {0.6, 1.2}, 1e-4);
  const auto b = modal_green(1, {1.0, 0.0}, {0.6, 1.2}, 1e-5);
  CHECK(std::abs(a / b - 1.0) < 1e-6);
}

TEST_CASE("vector, scalar and curl kernels") {
  const RingPoint obs{0.8, 0.3, 0.6, 0.8};
  const RingPoint src{0.5, -0.2, std::cos(0.4), -std::sin(0.4)};
  for (double k : {0.5, 2.0, 4.0}) {
    const auto got = modal_kernels(1, obs, src, k, true);
    const auto ref = brute_force(1, obs, src, k, 20000);
    CHECK(std::abs(got.scalar - ref.scalar) < 1e-9);
    for (int q = 0; q < 2; ++q)
      for (int p = 0; p < 2; ++p) {
        INFO("q = " << q << ", p = " << p << ", k = " << k);
        CHECK(std::abs(got.vector[q][p] - ref.vector[q][p]) < 1e-9);
        CHECK(std::abs(got.curl[q][p] - ref.curl[q][p]) < 1e-9);
      }
  }
}

TEST_CASE("nearby rings") {
  const RingPoint obs{0.8, 0.3, 0.6, 0.8};
  const RingPoint src{0.8, 0.3 + 1e-3, 0.6, 0.8};
  const auto got = modal_kernels(1, obs, src, 2.0, true);
  const auto ref = brute_force(1, obs, src, 2.0, 2000000);
  CHECK(std::abs(got.scalar - ref.scalar) < 1e-6 * std::abs(ref.scalar));
  CHECK(std::abs(got.vector[1][1] - ref.vector[1][1]) < 1e-6 * std::abs(ref.vector[1][1]));
}

TEST_CASE("coincident points are rejected") {
  const RingPoint p{0.8, 0.3, 0.6, 0.8};
  CHECK_THROWS(modal_kernels(1, p, p, 1.0));
  CHECK_THROWS(modal_green(1, {0.8, 0.3}, {0.8, 0.3}, 1.0));
}

}
