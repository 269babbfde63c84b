#include "coatscat/fsr_table.hpp"

#include "coatscat/error.hpp"
#include "coatscat/hashing.hpp"
#include "coatscat/io.hpp"

#include <cmath>
#include <sstream>

namespace coatscat {
namespace {

constexpr std::string_view kHeader = "# coatscat fsr table";
constexpr std::string_view kColumns = "kappa,re_e,im_e,amplitude,phi";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos)
      break;
    pos = next + 1;
  }
  return out;
}

} // namespace

void FsrTable::validate() const {
  if (samples.empty())
    throw FormatError("FSR table is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto &s = samples[i];
    if (!(s.kappa > 0.0) || !std::isfinite(s.kappa))
      throw FormatError("FSR table has a non-positive frequency");
    if (i > 0 && !(s.kappa > samples[i - 1].kappa))
      throw FormatError("FSR grid is not strictly increasing");
    if (!std::isfinite(s.e.real()) || !std::isfinite(s.e.imag()))
      throw FormatError("FSR table has a non-finite sample");
    if (!(s.amplitude >= 0.0))
      throw FormatError("FSR amplitude is negative");
    const auto rebuilt = std::polar(s.amplitude, s.phase);
    if (std::abs(rebuilt - s.e) > 1e-12 * std::max(1.0, s.amplitude))
      throw FormatError("FSR amplitude/phase disagree with the complex sample");
  }
}

std::vector<double> FsrTable::kappas() const {
  std::vector<double> k;
  k.reserve(samples.size());
  for (const auto &s : samples)
    k.push_back(s.kappa);
  return k;
}

std::string to_csv(const FsrTable &table) {
  std::ostringstream out;
  out << kHeader << '\n';
  out << "# geometry_hash: " << table.meta.geometry_hash << '\n';
  out << "# permittivity: " << format_double(table.meta.permittivity) << '\n';
  out << "# points_per_wavelength: " << format_double(table.meta.points_per_wavelength) << '\n';
  out << "# solver_version: " << table.meta.solver_version << '\n';
  out << "# source: " << table.meta.source << '\n';
  out << "# extended: " << (table.meta.extended ? "true" : "false") << '\n';
  out << kColumns << '\n';
  for (const auto &s : table.samples) {
    out << format_double(s.kappa) << ',' << format_double(s.e.real()) << ',' << format_double(s.e.imag())
        << ',' << format_double(s.amplitude) << ',' << format_double(s.phase) << '\n';
  }
  return out.str();
}

FsrTable fsr_from_csv(std::string_view text) {
  FsrTable table;
  bool seen_header = false, seen_columns = false;
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
      if (line == kHeader) {
        seen_header = true;
        continue;
      }
      const auto colon = line.find(':');
      if (colon == std::string_view::npos)
        continue;
      auto key = line.substr(1, colon - 1);
      auto value = line.substr(colon + 1);
      while (!key.empty() && key.front() == ' ')
        key.remove_prefix(1);
      while (!value.empty() && value.front() == ' ')
        value.remove_prefix(1);
      if (key == "geometry_hash")
        table.meta.geometry_hash = std::string(value);
      else if (key == "permittivity")
        table.meta.permittivity = parse_double(value);
      else if (key == "points_per_wavelength")
        table.meta.points_per_wavelength = parse_double(value);
      else if (key == "solver_version")
        table.meta.solver_version = std::string(value);
      else if (key == "source")
        table.meta.source = std::string(value);
      else if (key == "extended")
        table.meta.extended = value == "true";
      continue;
    }
    if (!seen_columns) {
      if (line != kColumns)
        throw FormatError("unexpected FSR column header: " + std::string(line));
      seen_columns = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 5)
      throw FormatError("FSR row must have 5 columns");
    FsrSample s;
    s.kappa = parse_double(cols[0]);
    s.e = {parse_double(cols[1]), parse_double(cols[2])};
    s.amplitude = parse_double(cols[3]);
    s.phase = parse_double(cols[4]);
    table.samples.push_back(s);
  }
  if (!seen_header || !seen_columns)
    throw FormatError("not an FSR table");
  table.validate();
  return table;
}

void write_fsr_csv(const std::filesystem::path &path, const FsrTable &table) {
  write_file_atomic(path, to_csv(table));
}

FsrTable read_fsr_csv(const std::filesystem::path &path) { return fsr_from_csv(read_file(path)); }

} // namespace coatscat
