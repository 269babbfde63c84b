#pragma once

#include "coatscat/fsr_table.hpp"
#include "coatscat/pulse.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coatscat {

/// Uniform grid on the ct/2a axis.
struct TimeGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  double stop() const { return at(count - 1); }
};

struct TimeSeries {
  TimeGrid grid;
  std::vector<double> values;
  FsrMetadata provenance;
  std::optional<PulseSpec> pulse;
};

struct SynthesisOptions {
  int points_per_interval = 8;
  /// Allowed quadrature error estimate, relative to the peak magnitude.
  double tolerance = 1e-6;
};

/// Local cubic (four nearest samples) interpolation of Re E and Im E.
/// Outside the sampled band the end cubics are extrapolated.
class FsrInterpolant {
public:
  explicit FsrInterpolant(const FsrTable &fsr);
  std::complex<double> operator()(double kappa) const;

private:
  std::vector<double> k_;
  std::vector<std::complex<double>> e_;
};

/// Transient response (1/pi) int_0^kappa_max A S_f cos(2 kappa T + phi) dkappa
/// at T = ct/2a, the one-sided form of the two-sided inverse transform.
/// Re E and Im E are interpolated with local cubics; the band below the
/// first sample is covered by the lowest cubic piece.
TimeSeries synthesize(const FsrTable &fsr, const PulseSpec &pulse, const TimeGrid &grid,
                      const SynthesisOptions &options = {});

/// Same integral, evaluated at arbitrary times and without the grid checks.
std::vector<double> synthesize_at(const FsrTable &fsr, const PulseSpec &pulse, std::span<const double> times,
                                  int points_per_interval = 8);

/// The two-sided form (1/2pi) int_{-kmax}^{kmax}, with the
/// response continued as A even and phi odd. Kept as a cross-check.
std::vector<double> synthesize_two_sided(const FsrTable &fsr, const PulseSpec &pulse,
                                         std::span<const double> times, int points_per_interval = 8);

/// Prepends Rayleigh-law samples E(kappa_min) (kappa/kappa_min)^2 with the
/// phase continued linearly, at the native spacing, down towards zero.
FsrTable extend_low_frequency(const FsrTable &fsr);

/// Largest time magnitude that the sample spacing resolves: pi / max spacing.
double alias_free_limit(const FsrTable &fsr);

std::string to_csv(const TimeSeries &series);
TimeSeries timeseries_from_csv(std::string_view text);
void write_timeseries_csv(const std::filesystem::path &path, const TimeSeries &series);
TimeSeries read_timeseries_csv(const std::filesystem::path &path);

} // namespace coatscat
