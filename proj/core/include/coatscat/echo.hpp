#pragma once

#include "coatscat/geometry.hpp"
#include "coatscat/synthesis.hpp"

#include <string>
#include <vector>

namespace coatscat {

/// A detected extremum of the transient response; order is 1-based by time.
struct Echo {
  double time = 0.0; ///< ct/2a
  double amplitude = 0.0;
  int order = 0;
};

struct EchoReport {
  std::vector<Echo> echoes;
  std::vector<double> delays;            ///< consecutive time differences
  std::vector<double> amplitude_ratios;  ///< |amp[k+1] / amp[k]|
  std::vector<bool> opposite_sign;       ///< per adjacent pair
  double threshold_fraction = 0.0;
  double min_separation = 0.0;
};

inline constexpr double kDefaultThresholdFraction = 0.05;

/// Local extrema with |amplitude| >= threshold_fraction * max|series|, kept
/// at least min_separation apart (larger magnitude wins). A non-positive
/// min_separation selects a quarter of the pulse duration tau in ct/2a units.
EchoReport detect_echoes(const TimeSeries &series, double threshold_fraction = kDefaultThresholdFraction,
                         double min_separation = 0.0);

struct RelativeMetrics {
  std::vector<double> delays;
  std::vector<double> amplitude_ratios;
};

RelativeMetrics relative_metrics(const EchoReport &report);

struct DelayPredictions {
  double creeping_delay = 1.0; ///< c dt12 / 2a: the 2a crossing of the shadowed base
  double speed_min = 1.0;      ///< slowest layer speed, units of c
  double speed_max = 1.0;
};

DelayPredictions predicted_delays(const GeometrySpec &spec);

std::string to_json(const EchoReport &report);
EchoReport echo_report_from_json(std::string_view text);

} // namespace coatscat
