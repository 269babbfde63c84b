#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace coatscat {

/// One frequency of the backscatter response, E = A exp(j phi).
struct FsrSample {
  double kappa = 0.0; ///< omega a / c
  std::complex<double> e;
  double amplitude = 0.0;
  double phase = 0.0;

  static FsrSample from_complex(double kappa, std::complex<double> e) {
    return {kappa, e, std::abs(e), std::arg(e)};
  }
};

struct FsrMetadata {
  std::string geometry_hash;
  double permittivity = 1.0;
  double points_per_wavelength = 0.0;
  std::string solver_version;
  std::string source = "bor"; ///< "bor", "mie" or "synthetic"
  bool extended = false;      ///< low-frequency Rayleigh samples prepended
};

struct FsrTable {
  FsrMetadata meta;
  std::vector<FsrSample> samples;

  /// Grid strictly increasing, kappa > 0, amplitude/phase consistent.
  void validate() const;
  std::vector<double> kappas() const;
  double kappa_min() const { return samples.front().kappa; }
  double kappa_max() const { return samples.back().kappa; }
};

std::string to_csv(const FsrTable &table);
FsrTable fsr_from_csv(std::string_view text);

void write_fsr_csv(const std::filesystem::path &path, const FsrTable &table);
FsrTable read_fsr_csv(const std::filesystem::path &path);

} // namespace coatscat
