#pragma once

#include "coatscat/fsr_table.hpp"
#include "coatscat/geometry.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace coatscat {

inline constexpr std::string_view kSolverVersion = "coatscat-bor/1";

struct SolverOptions {
  /// Solves whose reciprocal condition estimate falls below this are rejected.
  double rcond_floor = 1e-12;
};

/// Backscatter of a PEC body of revolution, optionally wrapped in a
/// dielectric shell whose outer surface is `coat`, under a plane wave
/// travelling along +z. Only the m = 1 azimuthal mode is assembled: EFIE on
/// the conductor, PMCHWT on the shell. Normalized so sigma/(pi a^2) = |E|^2
/// with the phase referenced at z = 0.
FsrSample solve_frequency(const BorMesh &pec, const std::optional<BorMesh> &coat, double permittivity,
                          double kappa, const SolverOptions &options = {});

/// One solve per grid point on `workers` threads (0 = hardware concurrency).
/// The table does not depend on the worker count.
FsrTable sweep(const BorMesh &pec, const std::optional<BorMesh> &coat, double permittivity,
               std::span<const double> kappa_grid, int workers = 1, const SolverOptions &options = {});

/// Hash identifying the geometry of a (pec, coat) pair.
std::string geometry_hash(const BorMesh &pec, const std::optional<BorMesh> &coat);

} // namespace coatscat
