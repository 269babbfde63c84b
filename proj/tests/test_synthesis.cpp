#include "coatscat/error.hpp"
#include "coatscat/mie.hpp"
#include "coatscat/pulse.hpp"
#include "coatscat/synthesis.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <random>

using namespace coatscat;

namespace {

FsrTable tabulate(double kmin, double kmax, double dk, const std::function<std::complex<double>(double)> &f) {
  FsrTable t;
  const int n = static_cast<int>(std::lround((kmax - kmin) / dk));
  for (int i = 0; i <= n; ++i) {
    const double k = kmin + (kmax - kmin) * i / n;
    t.samples.push_back(FsrSample::from_complex(k, f(k)));
  }
  return t;
}

double gaussian(double g, double t_over_2a) { return std::exp(-g * g * 4.0 * t_over_2a * t_over_2a); }

} // namespace

TEST_SUITE("pulse") {

TEST_CASE("pulse parameters") {
  const auto p = PulseSpec::from_duration(4.0, 2.25);
  CHECK(p.g() == doctest::Approx(0.5));
  CHECK(p.duration() == doctest::Approx(4.0));
  CHECK(pulse_value(2.0, 0.0, p) == doctest::Approx(std::exp(-1.0)));
  CHECK(pulse_value(3.0, 3.0, p) == doctest::Approx(1.0));
  CHECK(spectrum_value(0.0, p) == doctest::Approx(std::sqrt(M_PI) / 0.5));
  CHECK_THROWS(PulseSpec::from_duration(0.0, 2.25));
  CHECK_THROWS(PulseSpec::from_duration(4.0, -1.0));
}

TEST_CASE("spectrum and travelling pulse") {
  const auto p = PulseSpec::from_duration(4.0, 2.25);
  CHECK(spectrum_value(2.0 * p.g(), p) / spectrum_value(0.0, p) == doctest::Approx(std::exp(-1.0)));
  CHECK(spectrum_value(-0.7, p) == spectrum_value(0.7, p));
  CHECK(pulse_value(0.0, 0.0, p) == 1.0);
  CHECK(pulse_value(0.5 * p.duration(), 0.0, p) == doctest::Approx(std::exp(-1.0)));
  for (double shift : {-1.3, 0.2, 4.0})
    CHECK(pulse_value(0.4 + shift, -0.9 + shift, p) == doctest::Approx(pulse_value(0.4, -0.9, p)).epsilon(1e-14));
}

TEST_CASE("truncation routes agree and vary monotonically") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> tau(0.2, 10.0), kmax(0.0, 8.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = PulseSpec::from_duration(tau(rng), kmax(rng));
    CHECK(std::abs(truncation_fraction(p) - truncation_fraction_quadrature(p)) < 1e-10);
  }
  double prev = 2.0;
  for (double k = 0.0; k <= 4.0; k += 0.25) {
    const double t = truncation_fraction(PulseSpec::from_duration(4.0, k));
    CHECK(t < prev);
    prev = t;
  }
  // A longer pulse has a narrower spectrum, so less of it lies beyond kappa_max.
  prev = 2.0;
  for (double tau_a = 1.0; tau_a <= 8.0; tau_a += 0.5) {
    const double t = truncation_fraction(PulseSpec::from_duration(tau_a, 1.0));
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("truncation fraction") {
  const auto p = PulseSpec::from_duration(4.0, 2.25);
  const double t = truncation_fraction(p);
  CHECK(t == doctest::Approx(0.00146).epsilon(0.005));
  CHECK(std::abs(t - truncation_fraction_quadrature(p)) < 1e-10);
  CHECK(truncation_fraction(PulseSpec::from_duration(4.0, 0.0)) == 1.0);
  // erfc(10)
  CHECK(truncation_fraction(PulseSpec::from_duration(4.0, 20.0 * 0.5)) ==
        doctest::Approx(2.088487583762545e-45).epsilon(1e-12));
  CHECK(truncation_fraction(PulseSpec::from_duration(4.0, 40.0)) == 0.0);
  for (double kmax : {0.3, 1.0, 3.0})
    CHECK(std::abs(truncation_fraction(PulseSpec::from_duration(2.0, kmax)) -
                   truncation_fraction_quadrature(PulseSpec::from_duration(2.0, kmax))) < 1e-10);
}

}

TEST_SUITE("synthesis") {

TEST_CASE("identity and delay responses reproduce the pulse") {
  const auto pulse = PulseSpec::from_duration(4.0, 6.0);
  const double g = pulse.g();
  const TimeGrid grid{-6.0, 0.01, 1201}; // |ct/a| <= 3 tau
  const auto identity = tabulate(0.005, 6.0, 0.005, [](double) { return std::complex<double>(1.0, 0.0); });
  const auto a = synthesize(identity, pulse, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.count; ++i)
    worst = std::max(worst, std::abs(a.values[i] - gaussian(g, grid.at(i))));
  CHECK(worst < 1e-6);

  const double t0 = 1.7;
  const auto delay = tabulate(0.005, 6.0, 0.005, [&](double k) { return std::polar(1.0, -2.0 * k * t0); });
  const auto b = synthesize(delay, pulse, grid);
  worst = 0.0;
  for (std::size_t i = 0; i < grid.count; ++i)
    worst = std::max(worst, std::abs(b.values[i] - gaussian(g, grid.at(i) - t0)));
  CHECK(worst < 1e-6);
}

TEST_CASE("synthesis is linear") {
  const auto pulse = PulseSpec::from_duration(4.0, 2.25);
  const auto fsr = tabulate(0.05, 2.25, 0.05, [](double k) { return pec_sphere_fsr(k); });
  auto scaled = fsr;
  for (auto &s : scaled.samples)
    s = FsrSample::from_complex(s.kappa, 2.5 * s.e);
  const TimeGrid grid{-3.0, 0.05, 121};
  const auto a = synthesize(fsr, pulse, grid);
  const auto b = synthesize(scaled, pulse, grid);
  for (std::size_t i = 0; i < grid.count; ++i)
    CHECK(b.values[i] == doctest::Approx(2.5 * a.values[i]).epsilon(1e-12));
}

TEST_CASE("one and two sided forms agree") {
  const auto pulse = PulseSpec::from_duration(4.0, 2.25);
  const auto fsr = tabulate(0.05, 2.25, 0.05, [](double k) { return pec_sphere_fsr(k); });
  const std::vector<double> times{-2.0, -0.5, 0.0, 0.7, 2.5};
  const auto one = synthesize_at(fsr, pulse, times);
  const auto two = synthesize_two_sided(fsr, pulse, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(one[i] == doctest::Approx(two[i]).epsilon(1e-10));
}

TEST_CASE("grid beyond the alias-free range is rejected") {
  const auto pulse = PulseSpec::from_duration(4.0, 2.25);
  const auto fsr = tabulate(0.25, 2.25, 0.25, [](double k) { return pec_sphere_fsr(k); });
  CHECK(alias_free_limit(fsr) == doctest::Approx(M_PI / 0.25));
  CHECK_THROWS_AS(synthesize(fsr, pulse, TimeGrid{-20.0, 0.1, 401}), SynthesisError);
  CHECK_NOTHROW(synthesize(fsr, pulse, TimeGrid{-5.0, 0.1, 101}));
}

TEST_CASE("pulse band must be covered by the table") {
  const auto fsr = tabulate(0.05, 1.5, 0.05, [](double k) { return pec_sphere_fsr(k); });
  CHECK_THROWS_AS(synthesize(fsr, PulseSpec::from_duration(4.0, 2.25), TimeGrid{-2.0, 0.1, 41}), SynthesisError);
}

TEST_CASE("low frequency extension") {
  SUBCASE("exact for a Rayleigh law") {
    const auto fsr = tabulate(0.1, 2.0, 0.05, [](double k) { return std::complex<double>(0.7 * k * k, 0.0); });
    const auto ext = extend_low_frequency(fsr);
    REQUIRE(ext.samples.size() > fsr.samples.size());
    CHECK(ext.meta.extended);
    for (const auto &s : ext.samples)
      CHECK(std::abs(s.e - std::complex<double>(0.7 * s.kappa * s.kappa, 0.0)) < 1e-15);
  }
  SUBCASE("matches the sphere series below the first sample") {
    const auto fsr = tabulate(0.1, 2.25, 0.05, [](double k) { return pec_sphere_fsr(k); });
    const auto ext = extend_low_frequency(fsr);
    for (const auto &s : ext.samples)
      if (s.kappa < 0.1)
        CHECK(std::abs(s.e - pec_sphere_fsr(s.kappa)) < 0.03 * std::abs(pec_sphere_fsr(s.kappa)));
  }
  SUBCASE("rejects tables without a low band") {
    const auto fsr = tabulate(0.6, 2.25, 0.05, [](double k) { return pec_sphere_fsr(k); });
    CHECK_THROWS(extend_low_frequency(fsr));
  }
}

TEST_CASE("time series round trip") {
  const auto pulse = PulseSpec::from_duration(4.0, 2.25);
  const auto fsr = tabulate(0.05, 2.25, 0.05, [](double k) { return pec_sphere_fsr(k); });
  const auto a = synthesize(fsr, pulse, TimeGrid{-2.0, 0.1, 41});
  const auto text = to_csv(a);
  const auto b = timeseries_from_csv(text);
  CHECK(b.values == a.values);
  CHECK(b.grid.start == a.grid.start);
  CHECK(b.grid.step == a.grid.step);
  CHECK(b.grid.count == a.grid.count);
  REQUIRE(b.pulse.has_value());
  CHECK(b.pulse->g() == pulse.g());
  CHECK(to_csv(b) == text);
  CHECK_THROWS_AS(timeseries_from_csv("ct_over_2a,amplitude\n0,abc\n"), FormatError);
}

}
