#pragma once

#include "coatscat/echo.hpp"
#include "coatscat/fsr_table.hpp"
#include "coatscat/geometry.hpp"
#include "coatscat/synthesis.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace coatscat {

/// Uniformly spaced kappa values from min to max inclusive.
struct KappaGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  std::vector<double> points() const;
};

enum class BodyKind { Cone, Sphere };

/// Declarative description of one end-to-end run, read from JSON.
struct RunSpec {
  BodyKind body = BodyKind::Cone;
  GeometrySpec cone;          ///< permittivity field unused; see permittivities
  double sphere_radius = 1.0; ///< Sphere body: PEC core radius
  double sphere_shell = 0.0;  ///< Sphere body: shell thickness
  std::vector<double> permittivities{1.0};
  KappaGrid kappa_grid;
  double c_tau_over_a = 4.0;
  double pulse_kappa_max = 2.25;
  double points_per_wavelength = 15.0;
  TimeGrid time_grid;
  std::filesystem::path output_dir = "out";
  double threshold_fraction = kDefaultThresholdFraction;
  int workers = 0;
  bool extend_low_frequency = true;

  PulseSpec pulse() const { return PulseSpec::from_duration(c_tau_over_a, pulse_kappa_max); }
  void validate() const;
};

/// The figure setup: 2 alpha = 23 deg, r = 0.32a, d = 0.6a, eps in {1, 2, 4},
/// c tau / a = 4, kappa_max = 2.25.
RunSpec default_run_spec();

RunSpec parse_run_spec(std::string_view json_text);
RunSpec load_run_spec(const std::filesystem::path &path);
std::string to_json(const RunSpec &spec);

/// Cache key over geometry, permittivity, grid, mesh density and solver version.
std::string fsr_cache_key(const RunSpec &spec, double permittivity);

/// Label used in output file names, e.g. "eps2".
std::string permittivity_label(double permittivity);

/// Sweeps one permittivity, reusing a cached table when the key matches.
/// Progress and cache decisions go to `log`.
FsrTable sweep_cached(const RunSpec &spec, double permittivity, std::ostream &log);

struct PermittivityResult {
  double permittivity = 1.0;
  FsrTable fsr;
  TimeSeries series;
  EchoReport echoes;
};

struct RunResult {
  std::vector<PermittivityResult> results;
  /// Sphere body only: largest BOR-vs-Mie relative error over the grid.
  std::optional<double> max_mie_error;
};

/// Full pipeline: sweep (cached), synthesis, echo report, SVG overlay and a
/// summary, written atomically under spec.output_dir.
RunResult run(const RunSpec &spec, std::ostream &log);

struct CompareResult {
  double max_relative_error = 0.0;
  double mean_relative_error = 0.0;
  std::size_t points = 0;
  bool geometry_mismatch = false;
};

/// Relative error of complex E on the grid of `a` restricted to the overlap,
/// with `b` interpolated by local cubics.
CompareResult compare(const FsrTable &a, const FsrTable &b);
std::string to_json(const CompareResult &result);

/// Mie table for the sphere body; source "mie".
FsrTable mie_table(double core_radius, double shell, double permittivity, std::span<const double> kappas);

/// SVG overlay of several responses on a common ct/2a axis.
std::string render_svg(const std::vector<PermittivityResult> &results);

} // namespace coatscat
