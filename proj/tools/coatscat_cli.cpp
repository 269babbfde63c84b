// coatscat command line front end.
#include "coatscat/error.hpp"
#include "coatscat/hashing.hpp"
#include "coatscat/io.hpp"
#include "coatscat/mie.hpp"
#include "coatscat/runner.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace cs = coatscat;

namespace {

// Writes to both the console and an in-memory buffer that ends up in run.log.
class TeeBuf : public std::streambuf {
public:
  TeeBuf(std::streambuf *a, std::streambuf *b) : a_(a), b_(b) {}

protected:
  int overflow(int c) override {
    if (c == EOF)
      return !EOF;
    const int r1 = a_->sputc(static_cast<char>(c));
    const int r2 = b_->sputc(static_cast<char>(c));
    return r1 == EOF || r2 == EOF ? EOF : c;
  }
  int sync() override { return a_->pubsync() == 0 && b_->pubsync() == 0 ? 0 : -1; }

private:
  std::streambuf *a_;
  std::streambuf *b_;
};

cs::RunSpec load_spec(const std::string &path, const std::optional<std::string> &out) {
  auto spec = cs::load_run_spec(path);
  if (out)
    spec.output_dir = *out;
  return spec;
}

int cmd_run(const std::string &spec_path, const std::optional<std::string> &out) {
  const auto spec = load_spec(spec_path, out);
  std::ostringstream buffer;
  TeeBuf tee(std::clog.rdbuf(), buffer.rdbuf());
  std::ostream log(&tee);
  const auto result = cs::run(spec, log);
  for (const auto &r : result.results) {
    log << cs::permittivity_label(r.permittivity) << ":";
    for (const auto &e : r.echoes.echoes)
      log << ' ' << cs::format_double(e.time) << '(' << (e.amplitude < 0 ? '-' : '+') << ')';
    log << '\n';
  }
  if (result.max_mie_error)
    log << "max relative error vs Mie: " << *result.max_mie_error << '\n';
  log.flush();
  cs::write_file_atomic(spec.output_dir / "run.log", buffer.str());
  std::cout << (spec.output_dir / "summary.json").string() << '\n';
  return 0;
}

int cmd_sweep(const std::string &spec_path, const std::optional<std::string> &out) {
  const auto spec = load_spec(spec_path, out);
  std::filesystem::create_directories(spec.output_dir);
  for (double eps : spec.permittivities) {
    const auto table = cs::sweep_cached(spec, eps, std::clog);
    const auto path = spec.output_dir / ("fsr_" + cs::permittivity_label(eps) + ".csv");
    cs::write_fsr_csv(path, table);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int cmd_synth(const std::string &fsr_path, const std::string &spec_path, const std::optional<std::string> &out) {
  const auto spec = load_spec(spec_path, out);
  auto fsr = cs::read_fsr_csv(fsr_path);
  if (spec.extend_low_frequency)
    fsr = cs::extend_low_frequency(fsr);
  const auto series = cs::synthesize(fsr, spec.pulse(), spec.time_grid);
  std::filesystem::create_directories(spec.output_dir);
  const auto path = spec.output_dir / ("timeseries_" + std::filesystem::path(fsr_path).stem().string() + ".csv");
  cs::write_timeseries_csv(path, series);
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_echoes(const std::string &series_path, double threshold, double min_sep) {
  const auto series = cs::read_timeseries_csv(series_path);
  std::cout << cs::to_json(cs::detect_echoes(series, threshold, min_sep));
  return 0;
}

int cmd_mie(double core, double shell, double eps, double kmin, double kmax, std::size_t count,
            const std::optional<std::string> &out) {
  const cs::KappaGrid grid{kmin, kmax, count};
  const auto kappas = grid.points();
  const auto table = cs::mie_table(core, shell, eps, kappas);
  if (out) {
    cs::write_fsr_csv(*out, table);
    std::cout << *out << '\n';
  } else {
    std::cout << cs::to_csv(table);
  }
  return 0;
}

int cmd_compare(const std::string &a, const std::string &b) {
  const auto r = cs::compare(cs::read_fsr_csv(a), cs::read_fsr_csv(b));
  if (r.geometry_mismatch)
    std::cerr << "warning: tables were computed for different geometries\n";
  std::cout << cs::to_json(r);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Transient backscatter of coated bodies of revolution"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> out;
  app.add_option("-o,--out", out, "Output directory (overrides the run spec)");

  std::string spec_path, fsr_path, series_path, a_path, b_path;
  double threshold = cs::kDefaultThresholdFraction, min_sep = 0.0;
  double core = 1.0, shell = 0.0, eps = 1.0, kmin = 0.05, kmax = 2.25;
  std::size_t count = 45;

  auto *run = app.add_subcommand("run", "Full pipeline: sweep, synthesis, echoes, figure");
  run->add_option("spec", spec_path, "Run spec (JSON)")->required()->check(CLI::ExistingFile);

  auto *sweep = app.add_subcommand("sweep", "Frequency sweep only (cached)");
  sweep->add_option("spec", spec_path, "Run spec (JSON)")->required()->check(CLI::ExistingFile);

  auto *synth = app.add_subcommand("synth", "Synthesize a transient from an FSR table");
  synth->add_option("fsr", fsr_path, "FSR table (CSV)")->required()->check(CLI::ExistingFile);
  synth->add_option("spec", spec_path, "Run spec supplying pulse and time grid")->required()->check(CLI::ExistingFile);

  auto *echoes = app.add_subcommand("echoes", "Detect echoes in a time series");
  echoes->add_option("series", series_path, "Time series (CSV)")->required()->check(CLI::ExistingFile);
  echoes->add_option("--threshold", threshold, "Fraction of the peak magnitude")->check(CLI::Range(0.0, 1.0));
  echoes->add_option("--min-separation", min_sep, "Minimum echo spacing in ct/2a (0: from pulse)");

  auto *mie = app.add_subcommand("mie-dump", "Tabulate the coated-sphere series solution");
  mie->add_option("--core", core, "PEC core radius");
  mie->add_option("--shell", shell, "Shell thickness");
  mie->add_option("--eps", eps, "Shell permittivity");
  mie->add_option("--kmin", kmin, "Lowest kappa");
  mie->add_option("--kmax", kmax, "Highest kappa");
  mie->add_option("--count", count, "Number of samples")->check(CLI::PositiveNumber);

  auto *cmp = app.add_subcommand("compare", "Relative error between two FSR tables");
  cmp->add_option("a", a_path, "Table under test")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", b_path, "Reference table")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run)
      return cmd_run(spec_path, out);
    if (*sweep)
      return cmd_sweep(spec_path, out);
    if (*synth)
      return cmd_synth(fsr_path, spec_path, out);
    if (*echoes)
      return cmd_echoes(series_path, threshold, min_sep);
    if (*mie)
      return cmd_mie(core, shell, eps, kmin, kmax, count, out);
    if (*cmp)
      return cmd_compare(a_path, b_path);
  } catch (const cs::FormatError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
