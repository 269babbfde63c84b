#include "coatscat/synthesis.hpp"

#include "coatscat/error.hpp"
#include "coatscat/hashing.hpp"
#include "coatscat/io.hpp"
#include "coatscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace coatscat {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct SpectralNodes {
  std::vector<double> kappa;
  std::vector<cd> weighted; ///< quadrature weight * S_f * E / pi
};

SpectralNodes spectral_nodes(const FsrTable &fsr, const PulseSpec &pulse, int order) {
  const FsrInterpolant interp(fsr);
  const double top = pulse.kappa_max();
  std::vector<double> breaks{0.0};
  for (const auto &s : fsr.samples)
    if (s.kappa < top && s.kappa > 0.0)
      breaks.push_back(s.kappa);
  breaks.push_back(top);

  const auto rule = gauss_legendre(order);
  SpectralNodes nodes;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    if (!(hi > lo))
      continue;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int q = 0; q < order; ++q) {
      const double k = mid + half * rule.nodes[q];
      nodes.kappa.push_back(k);
      nodes.weighted.push_back(half * rule.weights[q] * spectrum_value(k, pulse) / kPi * interp(k));
    }
  }
  return nodes;
}

std::vector<double> evaluate(const SpectralNodes &nodes, std::span<const double> times) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t t = 0; t < times.size(); ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.kappa.size(); ++i) {
      const double arg = 2.0 * nodes.kappa[i] * times[t];
      acc += nodes.weighted[i].real() * std::cos(arg) - nodes.weighted[i].imag() * std::sin(arg);
    }
    out[t] = acc;
  }
  return out;
}

void check_inputs(const FsrTable &fsr, const PulseSpec &pulse) {
  if (fsr.samples.empty())
    throw SynthesisError("cannot synthesize from an empty FSR table");
  if (pulse.kappa_max() > fsr.kappa_max() * (1.0 + 1e-12))
    throw SynthesisError("pulse truncation frequency exceeds the FSR band");
}

} // namespace

FsrInterpolant::FsrInterpolant(const FsrTable &fsr) : k_(fsr.kappas()) {
  if (k_.empty())
    throw SynthesisError("cannot interpolate an empty FSR table");
  for (const auto &s : fsr.samples)
    e_.push_back(s.e);
}

std::complex<double> FsrInterpolant::operator()(double kappa) const {
  const auto n = k_.size();
  if (n == 1)
    return e_.front();
  const std::size_t width = std::min<std::size_t>(4, n);
  const auto upper = std::upper_bound(k_.begin(), k_.end(), kappa);
  const auto below = static_cast<std::ptrdiff_t>(upper - k_.begin()) - 1;
  std::ptrdiff_t first = below - static_cast<std::ptrdiff_t>(width / 2) + 1;
  first = std::clamp<std::ptrdiff_t>(first, 0, static_cast<std::ptrdiff_t>(n - width));
  cd sum = 0.0;
  for (std::size_t a = 0; a < width; ++a) {
    const auto ia = static_cast<std::size_t>(first) + a;
    double basis = 1.0;
    for (std::size_t b = 0; b < width; ++b) {
      const auto ib = static_cast<std::size_t>(first) + b;
      if (ib != ia)
        basis *= (kappa - k_[ib]) / (k_[ia] - k_[ib]);
    }
    sum += basis * e_[ia];
  }
  return sum;
}

double alias_free_limit(const FsrTable &fsr) {
  double spacing = fsr.samples.front().kappa;
  for (std::size_t i = 1; i < fsr.samples.size(); ++i)
    spacing = std::max(spacing, fsr.samples[i].kappa - fsr.samples[i - 1].kappa);
  return kPi / spacing;
}

std::vector<double> synthesize_at(const FsrTable &fsr, const PulseSpec &pulse, std::span<const double> times,
                                  int points_per_interval) {
  check_inputs(fsr, pulse);
  return evaluate(spectral_nodes(fsr, pulse, points_per_interval), times);
}

std::vector<double> synthesize_two_sided(const FsrTable &fsr, const PulseSpec &pulse,
                                         std::span<const double> times, int points_per_interval) {
  check_inputs(fsr, pulse);
  const auto nodes = spectral_nodes(fsr, pulse, points_per_interval);
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t t = 0; t < times.size(); ++t) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < nodes.kappa.size(); ++i) {
      // weighted carries 1/pi; the two-sided form uses 1/(2 pi) on both halves.
      const cd w = 0.5 * nodes.weighted[i];
      const double arg = 2.0 * nodes.kappa[i] * times[t];
      acc += w * std::polar(1.0, arg);             // kappa > 0
      acc += std::conj(w) * std::polar(1.0, -arg); // kappa < 0: E(-k) = conj E(k)
    }
    out[t] = acc.real();
  }
  return out;
}

TimeSeries synthesize(const FsrTable &fsr, const PulseSpec &pulse, const TimeGrid &grid,
                      const SynthesisOptions &options) {
  check_inputs(fsr, pulse);
  if (grid.count == 0 || !(grid.step > 0.0))
    throw SynthesisError("time grid needs a positive step and at least one point");
  const double limit = alias_free_limit(fsr);
  if (std::max(std::abs(grid.start), std::abs(grid.stop())) >= limit) {
    std::ostringstream msg;
    msg << "time grid reaches |ct/2a| = " << std::max(std::abs(grid.start), std::abs(grid.stop()))
        << " but the FSR spacing only resolves |ct/2a| < " << limit;
    throw SynthesisError(msg.str());
  }
  std::vector<double> times(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i)
    times[i] = grid.at(i);

  const int order = std::max(2, options.points_per_interval);
  auto fine = evaluate(spectral_nodes(fsr, pulse, order), times);
  const auto coarse = evaluate(spectral_nodes(fsr, pulse, std::max(1, order / 2)), times);
  double peak = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (!std::isfinite(fine[i]))
      throw SynthesisError("synthesized response is not finite");
    peak = std::max(peak, std::abs(fine[i]));
    diff = std::max(diff, std::abs(fine[i] - coarse[i]));
  }
  if (diff > options.tolerance * std::max(peak, 1e-300)) {
    std::ostringstream msg;
    msg << "FSR grid too coarse: quadrature error estimate " << diff << " exceeds " << options.tolerance
        << " of the peak " << peak;
    throw SynthesisError(msg.str());
  }
  return TimeSeries{grid, std::move(fine), fsr.meta, pulse};
}

FsrTable extend_low_frequency(const FsrTable &fsr) {
  fsr.validate();
  std::size_t low = 0;
  while (low < fsr.samples.size() && fsr.samples[low].kappa < 0.5)
    ++low;
  if (low < 3)
    throw SynthesisError("low-frequency extension needs at least 3 samples below kappa = 0.5");

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double k2 = fsr.samples[i].kappa * fsr.samples[i].kappa;
    num += fsr.samples[i].amplitude * k2;
    den += k2 * k2;
  }
  const double c = num / den;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto &s = fsr.samples[i];
    const double residual = std::abs(s.amplitude - c * s.kappa * s.kappa) / s.amplitude;
    if (residual > 0.2) {
      std::ostringstream msg;
      msg << "lowest samples do not follow the kappa^2 law (residual " << residual << " at kappa = " << s.kappa
          << "); lower the first frequency";
      throw SynthesisError(msg.str());
    }
  }

  const auto &s0 = fsr.samples[0];
  const auto &s1 = fsr.samples[1];
  const double spacing = s1.kappa - s0.kappa;
  const double slope = std::remainder(s1.phase - s0.phase, 2.0 * kPi) / spacing;
  const auto parts = static_cast<std::size_t>(std::max(4.0, std::round(s0.kappa / spacing)));

  FsrTable out;
  out.meta = fsr.meta;
  out.meta.extended = true;
  for (std::size_t i = 1; i < parts; ++i) {
    const double k = s0.kappa * static_cast<double>(i) / static_cast<double>(parts);
    const double ratio = k / s0.kappa;
    out.samples.push_back(
        FsrSample::from_complex(k, std::polar(s0.amplitude * ratio * ratio, s0.phase + slope * (k - s0.kappa))));
  }
  out.samples.insert(out.samples.end(), fsr.samples.begin(), fsr.samples.end());
  return out;
}

std::string to_csv(const TimeSeries &series) {
  std::ostringstream out;
  out << "# coatscat time series\n";
  out << "# geometry_hash: " << series.provenance.geometry_hash << '\n';
  out << "# permittivity: " << format_double(series.provenance.permittivity) << '\n';
  out << "# points_per_wavelength: " << format_double(series.provenance.points_per_wavelength) << '\n';
  out << "# solver_version: " << series.provenance.solver_version << '\n';
  out << "# source: " << series.provenance.source << '\n';
  out << "# extended: " << (series.provenance.extended ? "true" : "false") << '\n';
  if (series.pulse) {
    out << "# pulse_g: " << format_double(series.pulse->g()) << '\n';
    out << "# pulse_kappa_max: " << format_double(series.pulse->kappa_max()) << '\n';
  }
  out << "# grid_start: " << format_double(series.grid.start) << '\n';
  out << "# grid_step: " << format_double(series.grid.step) << '\n';
  out << "# grid_count: " << series.grid.count << '\n';
  out << "ct_over_2a,amplitude\n";
  for (std::size_t i = 0; i < series.values.size(); ++i)
    out << format_double(series.grid.at(i)) << ',' << format_double(series.values[i]) << '\n';
  return out.str();
}

TimeSeries timeseries_from_csv(std::string_view text) {
  TimeSeries series;
  std::optional<double> pulse_g, pulse_kmax;
  bool header = false, columns = false;
  std::vector<double> times;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty())
      continue;
    if (line.front() == '#') {
      if (line == "# coatscat time series") {
        header = true;
        continue;
      }
      const auto colon = line.find(':');
      if (colon == std::string_view::npos)
        continue;
      auto key = line.substr(2, colon - 2);
      auto value = line.substr(colon + 1);
      while (!value.empty() && value.front() == ' ')
        value.remove_prefix(1);
      auto &meta = series.provenance;
      if (key == "geometry_hash")
        meta.geometry_hash = std::string(value);
      else if (key == "permittivity")
        meta.permittivity = parse_double(value);
      else if (key == "points_per_wavelength")
        meta.points_per_wavelength = parse_double(value);
      else if (key == "solver_version")
        meta.solver_version = std::string(value);
      else if (key == "source")
        meta.source = std::string(value);
      else if (key == "extended")
        meta.extended = value == "true";
      else if (key == "pulse_g")
        pulse_g = parse_double(value);
      else if (key == "pulse_kappa_max")
        pulse_kmax = parse_double(value);
      else if (key == "grid_start")
        series.grid.start = parse_double(value);
      else if (key == "grid_step")
        series.grid.step = parse_double(value);
      else if (key == "grid_count")
        series.grid.count = static_cast<std::size_t>(parse_double(value));
      continue;
    }
    if (!columns) {
      if (line != "ct_over_2a,amplitude")
        throw FormatError("unexpected time series column header");
      columns = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos)
      throw FormatError("time series row must have 2 columns");
    times.push_back(parse_double(line.substr(0, comma)));
    series.values.push_back(parse_double(line.substr(comma + 1)));
  }
  if (!header || !columns)
    throw FormatError("not a time series file");
  if (series.grid.count == 0 && times.size() >= 2) {
    series.grid = {times.front(), (times.back() - times.front()) / static_cast<double>(times.size() - 1),
                   times.size()};
  }
  if (series.grid.count != series.values.size())
    throw FormatError("time series row count does not match its grid");
  if (!(series.grid.step > 0.0))
    throw FormatError("time series step must be positive");
  for (double v : series.values)
    if (!std::isfinite(v))
      throw FormatError("time series has non-finite values");
  if (pulse_g && pulse_kmax)
    series.pulse = PulseSpec(*pulse_g, *pulse_kmax);
  return series;
}

void write_timeseries_csv(const std::filesystem::path &path, const TimeSeries &series) {
  write_file_atomic(path, to_csv(series));
}

TimeSeries read_timeseries_csv(const std::filesystem::path &path) {
  return timeseries_from_csv(read_file(path));
}

} // namespace coatscat
