#include "coatscat/echo.hpp"

#include "coatscat/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

namespace coatscat {

EchoReport detect_echoes(const TimeSeries &series, double threshold_fraction, double min_separation) {
  if (series.values.empty())
    throw Error("cannot detect echoes in an empty series");
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw Error("threshold fraction must lie in (0, 1)");
  if (!(min_separation > 0.0)) {
    if (!series.pulse)
      throw Error("series carries no pulse; pass the minimum echo separation explicitly");
    min_separation = 0.25 * series.pulse->duration_half_units();
  }

  const auto &v = series.values;
  double peak = 0.0;
  for (double x : v)
    peak = std::max(peak, std::abs(x));

  std::vector<Echo> candidates;
  const double floor = threshold_fraction * peak;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const bool crest = v[i] > 0.0 && v[i] >= v[i - 1] && v[i] > v[i + 1];
    const bool trough = v[i] < 0.0 && v[i] <= v[i - 1] && v[i] < v[i + 1];
    if (!(crest || trough) || std::abs(v[i]) < floor)
      continue;
    // Parabolic refinement through the three samples.
    const double a = v[i - 1], b = v[i], c = v[i + 1];
    const double denom = a - 2.0 * b + c;
    double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    shift = std::clamp(shift, -0.5, 0.5);
    const double value = b - 0.25 * (a - c) * shift;
    candidates.push_back({series.grid.at(i) + shift * series.grid.step, value, 0});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Echo &x, const Echo &y) { return std::abs(x.amplitude) > std::abs(y.amplitude); });
  EchoReport report;
  for (const auto &c : candidates) {
    const bool clear = std::none_of(report.echoes.begin(), report.echoes.end(), [&](const Echo &e) {
      return std::abs(e.time - c.time) < min_separation;
    });
    if (clear)
      report.echoes.push_back(c);
  }
  std::sort(report.echoes.begin(), report.echoes.end(),
            [](const Echo &x, const Echo &y) { return x.time < y.time; });
  for (std::size_t i = 0; i < report.echoes.size(); ++i) {
    report.echoes[i].order = static_cast<int>(i) + 1;
    if (i > 0) {
      const auto &p = report.echoes[i - 1];
      const auto &e = report.echoes[i];
      report.delays.push_back(e.time - p.time);
      report.amplitude_ratios.push_back(std::abs(e.amplitude / p.amplitude));
      report.opposite_sign.push_back((e.amplitude > 0.0) != (p.amplitude > 0.0));
    }
  }
  report.threshold_fraction = threshold_fraction;
  report.min_separation = min_separation;
  return report;
}

RelativeMetrics relative_metrics(const EchoReport &report) {
  if (report.echoes.size() < 2)
    throw Error("relative metrics need at least two echoes");
  RelativeMetrics m;
  for (std::size_t i = 1; i < report.echoes.size(); ++i) {
    const auto &p = report.echoes[i - 1];
    const auto &e = report.echoes[i];
    m.delays.push_back(e.time - p.time);
    m.amplitude_ratios.push_back(std::abs(e.amplitude / p.amplitude));
  }
  return m;
}

DelayPredictions predicted_delays(const GeometrySpec &spec) {
  spec.validate();
  DelayPredictions p;
  p.creeping_delay = 1.0;
  p.speed_min = 1.0 / std::sqrt(spec.permittivity);
  p.speed_max = 1.0;
  return p;
}

std::string to_json(const EchoReport &report) {
  nlohmann::ordered_json j;
  j["threshold_fraction"] = report.threshold_fraction;
  j["min_separation"] = report.min_separation;
  auto &echoes = j["echoes"] = nlohmann::ordered_json::array();
  for (const auto &e : report.echoes)
    echoes.push_back({{"order", e.order}, {"time", e.time}, {"amplitude", e.amplitude}});
  j["delays"] = report.delays;
  j["amplitude_ratios"] = report.amplitude_ratios;
  j["opposite_sign"] = report.opposite_sign;
  return j.dump(2) + "\n";
}

EchoReport echo_report_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  EchoReport r;
  r.threshold_fraction = j.at("threshold_fraction").get<double>();
  r.min_separation = j.at("min_separation").get<double>();
  for (const auto &e : j.at("echoes"))
    r.echoes.push_back({e.at("time").get<double>(), e.at("amplitude").get<double>(), e.at("order").get<int>()});
  r.delays = j.at("delays").get<std::vector<double>>();
  r.amplitude_ratios = j.at("amplitude_ratios").get<std::vector<double>>();
  r.opposite_sign = j.at("opposite_sign").get<std::vector<bool>>();
  return r;
}

} // namespace coatscat
