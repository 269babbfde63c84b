#include "coatscat/runner.hpp"

#include "coatscat/bor_solver.hpp"
#include "coatscat/error.hpp"
#include "coatscat/hashing.hpp"
#include "coatscat/io.hpp"
#include "coatscat/mie.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace coatscat {
namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

template <class T> void read_opt(const json &j, const char *key, T &out) {
  if (j.contains(key))
    out = j.at(key).get<T>();
}

struct Meshes {
  BorMesh pec;
  std::optional<BorMesh> coat;
};

bool coated(const RunSpec &spec, double eps) {
  const double d = spec.body == BodyKind::Cone ? spec.cone.coating_thickness : spec.sphere_shell;
  return d > 0.0 && eps != 1.0;
}

Meshes build_meshes(const RunSpec &spec, double eps) {
  GeneratrixProfile pec;
  std::optional<GeneratrixProfile> coat;
  if (spec.body == BodyKind::Cone) {
    GeometrySpec g = spec.cone;
    g.permittivity = eps;
    auto profiles = build_profiles(g);
    pec = std::move(profiles.pec);
    if (coated(spec, eps))
      coat = std::move(profiles.coat);
  } else {
    pec = sphere_profile(spec.sphere_radius);
    if (coated(spec, eps))
      coat = offset_profile(pec, spec.sphere_shell);
  }
  const double index = coat ? std::sqrt(eps) : 1.0;
  const double kmax = spec.kappa_grid.max;
  Meshes m{mesh_profile(pec, kmax, spec.points_per_wavelength, index), std::nullopt};
  if (coat)
    m.coat = mesh_profile(*coat, kmax, spec.points_per_wavelength, index);
  return m;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

} // namespace

std::vector<double> KappaGrid::points() const {
  std::vector<double> k(count);
  if (count == 1) {
    k[0] = max;
    return k;
  }
  for (std::size_t i = 0; i < count; ++i)
    k[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  k.back() = max;
  return k;
}

void RunSpec::validate() const {
  if (body == BodyKind::Cone) {
    GeometrySpec g = cone;
    g.permittivity = 1.0;
    g.validate();
  } else {
    SphereSpec{sphere_radius, sphere_shell, 1.0}.validate();
  }
  if (permittivities.empty())
    throw Error("run spec lists no permittivities");
  for (double e : permittivities)
    if (!(e >= 1.0))
      throw Error("permittivities must be >= 1");
  if (kappa_grid.count == 0 || !(kappa_grid.min > 0.0) ||
      (kappa_grid.count > 1 && !(kappa_grid.max > kappa_grid.min)))
    throw Error("kappa grid needs 0 < min < max and a positive count");
  if (!(pulse_kappa_max > 0.0) || pulse_kappa_max > kappa_grid.max * (1.0 + 1e-12))
    throw Error("pulse kappa_max must be positive and within the kappa grid");
  if (!(c_tau_over_a > 0.0))
    throw Error("pulse duration must be positive");
  if (!(points_per_wavelength >= 10.0))
    throw Error("points per wavelength must be at least 10");
  if (time_grid.count == 0 || !(time_grid.step > 0.0))
    throw Error("time grid needs a positive step and count");
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw Error("threshold fraction must lie in (0, 1)");
}

RunSpec default_run_spec() {
  RunSpec spec;
  spec.cone = default_cone_spec(1.0);
  spec.permittivities = {1.0, 2.0, 4.0};
  spec.kappa_grid = {2.25 / 64, 2.25, 64};
  spec.c_tau_over_a = 4.0;
  spec.pulse_kappa_max = 2.25;
  spec.points_per_wavelength = 15.0;
  spec.time_grid = {-2.0, 0.01, 1601};
  spec.output_dir = "out";
  return spec;
}

RunSpec parse_run_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception &e) {
    throw FormatError(std::string("run spec is not valid JSON: ") + e.what());
  }
  RunSpec spec = default_run_spec();
  try {
    std::string body = "cone";
    read_opt(j, "body", body);
    if (body == "cone")
      spec.body = BodyKind::Cone;
    else if (body == "sphere")
      spec.body = BodyKind::Sphere;
    else
      throw FormatError("body must be \"cone\" or \"sphere\"");
    if (j.contains("geometry")) {
      const auto &g = j.at("geometry");
      if (g.contains("vertex_angle_deg"))
        spec.cone.half_angle = 0.5 * g.at("vertex_angle_deg").get<double>() * kPi / 180.0;
      read_opt(g, "base_radius", spec.cone.base_radius);
      read_opt(g, "rounding_radius", spec.cone.rounding_radius);
      read_opt(g, "coating_thickness", spec.cone.coating_thickness);
      read_opt(g, "tip_z", spec.cone.tip_z);
    }
    if (j.contains("sphere")) {
      const auto &s = j.at("sphere");
      read_opt(s, "radius", spec.sphere_radius);
      read_opt(s, "shell_thickness", spec.sphere_shell);
    }
    read_opt(j, "permittivities", spec.permittivities);
    if (j.contains("kappa_grid")) {
      const auto &k = j.at("kappa_grid");
      read_opt(k, "min", spec.kappa_grid.min);
      read_opt(k, "max", spec.kappa_grid.max);
      read_opt(k, "count", spec.kappa_grid.count);
    }
    if (j.contains("pulse")) {
      const auto &p = j.at("pulse");
      read_opt(p, "c_tau_over_a", spec.c_tau_over_a);
      read_opt(p, "kappa_max", spec.pulse_kappa_max);
    }
    read_opt(j, "points_per_wavelength", spec.points_per_wavelength);
    if (j.contains("time_grid")) {
      const auto &t = j.at("time_grid");
      read_opt(t, "start", spec.time_grid.start);
      read_opt(t, "step", spec.time_grid.step);
      read_opt(t, "count", spec.time_grid.count);
    }
    if (j.contains("output_dir"))
      spec.output_dir = j.at("output_dir").get<std::string>();
    read_opt(j, "threshold_fraction", spec.threshold_fraction);
    read_opt(j, "workers", spec.workers);
    read_opt(j, "extend_low_frequency", spec.extend_low_frequency);
  } catch (const json::exception &e) {
    throw FormatError(std::string("run spec field has the wrong type: ") + e.what());
  }
  spec.validate();
  return spec;
}

RunSpec load_run_spec(const std::filesystem::path &path) { return parse_run_spec(read_file(path)); }

std::string to_json(const RunSpec &spec) {
  json j;
  j["body"] = spec.body == BodyKind::Cone ? "cone" : "sphere";
  j["geometry"] = {{"vertex_angle_deg", 2.0 * spec.cone.half_angle * 180.0 / kPi},
                   {"base_radius", spec.cone.base_radius},
                   {"rounding_radius", spec.cone.rounding_radius},
                   {"coating_thickness", spec.cone.coating_thickness},
                   {"tip_z", spec.cone.tip_z}};
  j["sphere"] = {{"radius", spec.sphere_radius}, {"shell_thickness", spec.sphere_shell}};
  j["permittivities"] = spec.permittivities;
  j["kappa_grid"] = {{"min", spec.kappa_grid.min}, {"max", spec.kappa_grid.max}, {"count", spec.kappa_grid.count}};
  j["pulse"] = {{"c_tau_over_a", spec.c_tau_over_a}, {"kappa_max", spec.pulse_kappa_max}};
  j["points_per_wavelength"] = spec.points_per_wavelength;
  j["time_grid"] = {{"start", spec.time_grid.start}, {"step", spec.time_grid.step}, {"count", spec.time_grid.count}};
  j["output_dir"] = spec.output_dir.generic_string();
  j["threshold_fraction"] = spec.threshold_fraction;
  j["workers"] = spec.workers;
  j["extend_low_frequency"] = spec.extend_low_frequency;
  return j.dump(2) + "\n";
}

std::string permittivity_label(double permittivity) { return "eps" + format_double(permittivity); }

std::string fsr_cache_key(const RunSpec &spec, double permittivity) {
  std::ostringstream text;
  if (spec.body == BodyKind::Cone) {
    GeometrySpec g = spec.cone;
    g.permittivity = permittivity;
    const auto p = build_profiles(g);
    text << "pec\n" << canonical_text(p.pec);
    if (coated(spec, permittivity))
      text << "coat\n" << canonical_text(*p.coat);
  } else {
    const auto pec = sphere_profile(spec.sphere_radius);
    text << "pec\n" << canonical_text(pec);
    if (coated(spec, permittivity))
      text << "coat\n" << canonical_text(offset_profile(pec, spec.sphere_shell));
  }
  text << "eps " << format_double(permittivity) << '\n';
  text << "grid";
  for (double k : spec.kappa_grid.points())
    text << ' ' << format_double(k);
  text << "\nppw " << format_double(spec.points_per_wavelength) << '\n';
  text << "solver " << kSolverVersion << '\n';
  return hex64(fnv1a(text.str()));
}

FsrTable sweep_cached(const RunSpec &spec, double permittivity, std::ostream &log) {
  const auto key = fsr_cache_key(spec, permittivity);
  const auto path = spec.output_dir / "cache" / ("fsr_" + key + ".csv");
  const auto label = permittivity_label(permittivity);
  if (std::filesystem::exists(path)) {
    try {
      auto table = read_fsr_csv(path);
      if (table.samples.size() != spec.kappa_grid.count)
        throw FormatError("cached table has the wrong number of samples");
      log << label << ": cache hit " << path.filename().string() << '\n';
      return table;
    } catch (const Error &e) {
      log << label << ": warning: cache entry unreadable (" << e.what() << "), recomputing\n";
    }
  }
  log << label << ": solving " << spec.kappa_grid.count << " frequencies\n";
  const auto meshes = build_meshes(spec, permittivity);
  const auto grid = spec.kappa_grid.points();
  FsrTable table;
  try {
    table = sweep(meshes.pec, meshes.coat, permittivity, grid, spec.workers);
  } catch (const SolverError &e) {
    std::ostringstream msg;
    msg << "solver failed for eps = " << permittivity << " at kappa = " << e.kappa() << ": " << e.what();
    throw SolverError(msg.str(), e.kappa(), e.rcond());
  }
  write_fsr_csv(path, table);
  return table;
}

FsrTable mie_table(double core_radius, double shell, double permittivity, std::span<const double> kappas) {
  FsrTable t;
  const SphereSpec s{core_radius, shell, permittivity};
  t.meta.geometry_hash = hex64(fnv1a("mie sphere " + format_double(core_radius) + ' ' + format_double(shell)));
  t.meta.permittivity = permittivity;
  t.meta.solver_version = "mie-series";
  t.meta.source = "mie";
  for (double k : kappas)
    t.samples.push_back(FsrSample::from_complex(k, coated_sphere_fsr(k, s)));
  return t;
}

CompareResult compare(const FsrTable &a, const FsrTable &b) {
  if (a.samples.empty() || b.samples.empty())
    throw Error("compare: empty table");
  const double lo = std::max(a.kappa_min(), b.kappa_min());
  const double hi = std::min(a.kappa_max(), b.kappa_max());
  if (lo > hi)
    throw Error("compare: tables have disjoint frequency ranges");
  const FsrInterpolant ref(b);
  CompareResult r;
  double sum = 0.0;
  for (const auto &s : a.samples) {
    if (s.kappa < lo || s.kappa > hi)
      continue;
    const auto e_ref = ref(s.kappa);
    const double err = std::abs(s.e - e_ref) / std::abs(e_ref);
    r.max_relative_error = std::max(r.max_relative_error, err);
    sum += err;
    ++r.points;
  }
  r.mean_relative_error = r.points ? sum / static_cast<double>(r.points) : 0.0;
  r.geometry_mismatch = a.meta.geometry_hash != b.meta.geometry_hash;
  return r;
}

std::string to_json(const CompareResult &result) {
  json j;
  j["max_relative_error"] = result.max_relative_error;
  j["mean_relative_error"] = result.mean_relative_error;
  j["points"] = result.points;
  j["geometry_mismatch"] = result.geometry_mismatch;
  return j.dump(2) + "\n";
}

std::string render_svg(const std::vector<PermittivityResult> &results) {
  constexpr double width = 800, height = 480, left = 70, right = 20, top = 30, bottom = 50;
  static const char *colors[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555"};
  static const char *dashes[] = {"", "8,4", "2,3", "10,3,2,3", "4,4", "1,2"};

  double t0 = 0, t1 = 1, peak = 0;
  bool first = true;
  for (const auto &r : results) {
    if (r.series.values.empty())
      continue;
    t0 = first ? r.series.grid.start : std::min(t0, r.series.grid.start);
    t1 = first ? r.series.grid.stop() : std::max(t1, r.series.grid.stop());
    first = false;
    for (double v : r.series.values)
      peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0)
    peak = 1.0;
  const double ymax = 1.1 * peak;
  const auto sx = [&](double t) { return left + (t - t0) / (t1 - t0) * (width - left - right); };
  const auto sy = [&](double v) { return top + (ymax - v) / (2 * ymax) * (height - top - bottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << fixed(sy(0), 2) << "\" x2=\"" << width - right << "\" y2=\""
      << fixed(sy(0), 2) << "\" stroke=\"#999\"/>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
      << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t = std::ceil(t0); t <= t1 + 1e-9; t += 1.0) {
    svg << "<line x1=\"" << fixed(sx(t), 2) << "\" y1=\"" << height - bottom << "\" x2=\"" << fixed(sx(t), 2)
        << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(sx(t), 2) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">"
        << fixed(t, 0) << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">ct/2a</text>\n";
  for (double v : {-peak, 0.0, peak}) {
    svg << "<text x=\"" << left - 6 << "\" y=\"" << fixed(sy(v) + 4, 2) << "\" text-anchor=\"end\">"
        << fixed(v, 3) << "</text>\n";
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto &r = results[i];
    svg << "<polyline fill=\"none\" stroke=\"" << colors[i % 6] << "\" stroke-width=\"1.5\"";
    if (*dashes[i % 6])
      svg << " stroke-dasharray=\"" << dashes[i % 6] << "\"";
    svg << " points=\"";
    for (std::size_t k = 0; k < r.series.values.size(); ++k)
      svg << (k ? " " : "") << fixed(sx(r.series.grid.at(k)), 2) << ',' << fixed(sy(r.series.values[k]), 2);
    svg << "\"/>\n";
    const double ly = top + 18 + 18 * static_cast<double>(i);
    svg << "<line x1=\"" << width - right - 110 << "\" y1=\"" << ly << "\" x2=\"" << width - right - 80
        << "\" y2=\"" << ly << "\" stroke=\"" << colors[i % 6] << "\" stroke-width=\"1.5\"";
    if (*dashes[i % 6])
      svg << " stroke-dasharray=\"" << dashes[i % 6] << "\"";
    svg << "/>\n<text x=\"" << width - right - 74 << "\" y=\"" << ly + 4 << "\">eps = "
        << format_double(r.permittivity) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

RunResult run(const RunSpec &spec, std::ostream &log) {
  spec.validate();
  std::filesystem::create_directories(spec.output_dir);
  const auto pulse = spec.pulse();
  RunResult result;
  json summary;
  summary["pulse"] = {{"c_tau_over_a", spec.c_tau_over_a},
                      {"kappa_max", spec.pulse_kappa_max},
                      {"truncation_fraction", truncation_fraction(pulse)}};
  auto &runs = summary["runs"] = json::array();
  std::ostringstream mie_csv;
  mie_csv << "permittivity,kappa,re_bor,im_bor,re_mie,im_mie,relative_error\n";

  for (double eps : spec.permittivities) {
    const auto label = permittivity_label(eps);
    PermittivityResult pr;
    pr.permittivity = eps;
    pr.fsr = sweep_cached(spec, eps, log);
    write_fsr_csv(spec.output_dir / ("fsr_" + label + ".csv"), pr.fsr);

    const FsrTable synth_input = spec.extend_low_frequency ? extend_low_frequency(pr.fsr) : pr.fsr;
    pr.series = synthesize(synth_input, pulse, spec.time_grid);
    write_timeseries_csv(spec.output_dir / ("timeseries_" + label + ".csv"), pr.series);

    pr.echoes = detect_echoes(pr.series, spec.threshold_fraction);
    write_file_atomic(spec.output_dir / ("echoes_" + label + ".json"), to_json(pr.echoes));
    log << label << ": " << pr.echoes.echoes.size() << " echoes\n";

    json entry;
    entry["permittivity"] = eps;
    entry["echo_count"] = pr.echoes.echoes.size();
    entry["echo_times"] = json::array();
    entry["echo_amplitudes"] = json::array();
    for (const auto &e : pr.echoes.echoes) {
      entry["echo_times"].push_back(e.time);
      entry["echo_amplitudes"].push_back(e.amplitude);
    }
    entry["delays"] = pr.echoes.delays;
    entry["amplitude_ratios"] = pr.echoes.amplitude_ratios;
    if (spec.body == BodyKind::Cone) {
      GeometrySpec g = spec.cone;
      g.permittivity = eps;
      const auto pred = predicted_delays(g);
      entry["predicted_creeping_delay"] = pred.creeping_delay;
      entry["layer_speed_bounds"] = {pred.speed_min, pred.speed_max};
    } else {
      const double shell = coated(spec, eps) ? spec.sphere_shell : 0.0;
      const auto mie = mie_table(spec.sphere_radius, shell, eps, pr.fsr.kappas());
      double worst = 0.0;
      for (std::size_t i = 0; i < mie.samples.size(); ++i) {
        const auto &b = pr.fsr.samples[i];
        const auto &m = mie.samples[i];
        const double err = std::abs(b.e - m.e) / std::abs(m.e);
        worst = std::max(worst, err);
        mie_csv << format_double(eps) << ',' << format_double(b.kappa) << ',' << format_double(b.e.real()) << ','
                << format_double(b.e.imag()) << ',' << format_double(m.e.real()) << ','
                << format_double(m.e.imag()) << ',' << format_double(err) << '\n';
      }
      entry["max_mie_relative_error"] = worst;
      result.max_mie_error = std::max(result.max_mie_error.value_or(0.0), worst);
    }
    runs.push_back(entry);
    result.results.push_back(std::move(pr));
  }

  if (spec.body == BodyKind::Sphere) {
    write_file_atomic(spec.output_dir / "mie_comparison.csv", mie_csv.str());
    summary["max_mie_relative_error"] = *result.max_mie_error;
  }
  write_file_atomic(spec.output_dir / "summary.json", summary.dump(2) + "\n");
  write_file_atomic(spec.output_dir / "figure.svg", render_svg(result.results));
  return result;
}

} // namespace coatscat
