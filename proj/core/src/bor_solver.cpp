#include "coatscat/bor_solver.hpp"

#include "coatscat/error.hpp"
#include "coatscat/hashing.hpp"
#include "coatscat/modal_kernel.hpp"
#include "coatscat/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

namespace coatscat {
namespace {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;
constexpr int kMode = 1;
constexpr cd kJ{0.0, 1.0};

constexpr int kRegularOrder = 4;
constexpr int kNearOrder = 6;
constexpr int kSingularOuterOrder = 8;
constexpr int kSingularInnerOrder = 8;

struct QuadPoint {
  RingPoint ring;
  double weight = 0.0;
  double shape[2]{}; ///< hat functions of the element's left and right node
};

struct Element {
  double lo = 0.0, hi = 0.0;
  std::size_t segment = 0;
  double length() const { return hi - lo; }
};

class MeshView {
public:
  explicit MeshView(const BorMesh &mesh) : mesh_(mesh) {
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
      elements_.push_back({mesh.nodes[e], mesh.nodes[e + 1], mesh.element_segment[e]});
  }

  std::size_t elements() const { return elements_.size(); }
  const Element &element(std::size_t e) const { return elements_[e]; }
  std::size_t basis() const { return mesh_.basis_count(); }

  /// Basis index of local node a (0 left, 1 right) of element e, or -1.
  long basis_index(std::size_t e, int a) const {
    const auto node = static_cast<long>(e) + a;
    if (node < 1 || node > static_cast<long>(mesh_.nodes.size()) - 2)
      return -1;
    return node - 1;
  }

  QuadPoint point(std::size_t e, double t, double weight) const {
    const auto &el = elements_[e];
    const auto p = mesh_.profile.evaluate(el.segment, t);
    QuadPoint q;
    q.ring = {p.position.rho, p.position.z, p.drho, p.dz};
    q.weight = weight;
    q.shape[0] = (el.hi - t) / el.length();
    q.shape[1] = (t - el.lo) / el.length();
    return q;
  }

  std::vector<QuadPoint> gauss_points(std::size_t e, int order) const {
    const auto rule = gauss_legendre(order);
    const auto &el = elements_[e];
    const double half = 0.5 * el.length(), mid = 0.5 * (el.lo + el.hi);
    std::vector<QuadPoint> pts;
    pts.reserve(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i)
      pts.push_back(point(e, mid + half * rule.nodes[i], half * rule.weights[i]));
    return pts;
  }

  MeridianPoint midpoint(std::size_t e) const {
    const auto &el = elements_[e];
    return mesh_.profile.evaluate(el.segment, 0.5 * (el.lo + el.hi)).position;
  }

private:
  const BorMesh &mesh_;
  std::vector<Element> elements_;
};

/// Tested operators between two surfaces in one homogeneous medium:
/// efie = -j k eta (A - Phi / k^2) and curl = <W, curl int G X>, each of size
/// 2 n_test x 2 n_src with generatrix components first.
struct OperatorBlocks {
  Matrix efie;
  Matrix curl;
};

struct Medium {
  double k = 0.0;
  double eta = 1.0; ///< relative to free space
};

class Assembler {
public:
  Assembler(const MeshView &test, const MeshView &src, bool same_surface, std::span<const Medium> media,
            bool with_curl)
      : test_(test), src_(src), same_(same_surface), media_(media.begin(), media.end()),
        with_curl_(with_curl) {
    const auto nt = static_cast<Eigen::Index>(2 * test.basis());
    const auto ns = static_cast<Eigen::Index>(2 * src.basis());
    for (std::size_t i = 0; i < media_.size(); ++i) {
      blocks_.push_back({Matrix::Zero(nt, ns), with_curl ? Matrix::Zero(nt, ns) : Matrix()});
    }
  }

  std::vector<OperatorBlocks> run() {
    std::vector<std::vector<QuadPoint>> test_reg, test_near, src_reg, src_near;
    for (std::size_t e = 0; e < test_.elements(); ++e) {
      test_reg.push_back(test_.gauss_points(e, kRegularOrder));
      test_near.push_back(test_.gauss_points(e, kNearOrder));
    }
    for (std::size_t f = 0; f < src_.elements(); ++f) {
      src_reg.push_back(src_.gauss_points(f, kRegularOrder));
      src_near.push_back(src_.gauss_points(f, kNearOrder));
    }

    for (std::size_t e = 0; e < test_.elements(); ++e) {
      for (std::size_t f = 0; f < src_.elements(); ++f) {
        if (same_ && e == f) {
          self_pair(e);
          continue;
        }
        if (same_ && (e + 1 == f || f + 1 == e)) {
          adjacent_pair(e, f);
          continue;
        }
        const auto a = test_.midpoint(e), b = src_.midpoint(f);
        const double dist = std::hypot(a.rho - b.rho, a.z - b.z);
        const double size = std::max(test_.element(e).length(), src_.element(f).length());
        const bool near = dist < 2.0 * size;
        const auto &tp = near ? test_near[e] : test_reg[e];
        const auto &sp = near ? src_near[f] : src_reg[f];
        for (const auto &p : tp)
          for (const auto &q : sp)
            accumulate(e, f, p, q);
      }
    }
    return std::move(blocks_);
  }

private:
  void self_pair(std::size_t e) {
    const auto outer = gauss_legendre(kSingularOuterOrder);
    const auto inner = gauss_legendre(kSingularInnerOrder);
    const auto &el = test_.element(e);
    const double half = 0.5 * el.length(), mid = 0.5 * (el.lo + el.hi);
    for (int i = 0; i < kSingularOuterOrder; ++i) {
      const double t = mid + half * outer.nodes[i];
      const auto p = test_.point(e, t, half * outer.weights[i]);
      // Split at t; cubic grading t' = t -/+ L s^3 tames the logarithm.
      for (const double span : {el.lo - t, el.hi - t}) {
        for (int j = 0; j < kSingularInnerOrder; ++j) {
          const double s = 0.5 * (inner.nodes[j] + 1.0);
          const double w = 0.5 * inner.weights[j] * 3.0 * s * s * std::abs(span);
          const auto q = src_.point(e, t + span * s * s * s, w);
          accumulate(e, e, p, q);
        }
      }
    }
  }

  void adjacent_pair(std::size_t e, std::size_t f) {
    const auto outer = gauss_legendre(kSingularOuterOrder);
    const auto inner = gauss_legendre(kSingularInnerOrder);
    const auto &el = test_.element(e);
    const auto &sf = src_.element(f);
    const bool src_right = f > e;
    const double node = src_right ? sf.lo : sf.hi;
    const double dir = src_right ? 1.0 : -1.0;
    const double half = 0.5 * el.length(), mid = 0.5 * (el.lo + el.hi);
    for (int i = 0; i < kSingularOuterOrder; ++i) {
      const auto p = test_.point(e, mid + half * outer.nodes[i], half * outer.weights[i]);
      for (int j = 0; j < kSingularInnerOrder; ++j) {
        const double s = 0.5 * (inner.nodes[j] + 1.0);
        const double w = 0.5 * inner.weights[j] * 3.0 * s * s * sf.length();
        const auto q = src_.point(f, node + dir * sf.length() * s * s * s, w);
        accumulate(e, f, p, q);
      }
    }
  }

  void accumulate(std::size_t e, std::size_t f, const QuadPoint &p, const QuadPoint &q) {
    const double dl_test[2] = {-1.0 / test_.element(e).length(), 1.0 / test_.element(e).length()};
    const double dl_src[2] = {-1.0 / src_.element(f).length(), 1.0 / src_.element(f).length()};
    const double w = 2.0 * kPi * p.weight * q.weight;
    const auto nt = static_cast<Eigen::Index>(test_.basis());
    const auto ns = static_cast<Eigen::Index>(src_.basis());

    for (std::size_t mi = 0; mi < media_.size(); ++mi) {
      const auto &med = media_[mi];
      const auto kern = modal_kernels(kMode, p.ring, q.ring, med.k, with_curl_);
      const cd efie_scale = -kJ * med.k * med.eta * w;
      const double inv_k2 = 1.0 / (med.k * med.k);
      auto &blk = blocks_[mi];
      for (int a = 0; a < 2; ++a) {
        const long i = test_.basis_index(e, a);
        if (i < 0)
          continue;
        const cd div_test[2] = {dl_test[a], -kJ * double(kMode) * p.shape[a] / p.ring.rho};
        for (int b = 0; b < 2; ++b) {
          const long jdx = src_.basis_index(f, b);
          if (jdx < 0)
            continue;
          const cd div_src[2] = {dl_src[b], kJ * double(kMode) * q.shape[b] / q.ring.rho};
          const double nn = p.shape[a] * q.shape[b];
          for (int qc = 0; qc < 2; ++qc) {
            for (int pc = 0; pc < 2; ++pc) {
              const auto row = qc * nt + i;
              const auto col = pc * ns + jdx;
              const cd a_term = nn * kern.vector[qc][pc];
              const cd phi_term = div_test[qc] * div_src[pc] * kern.scalar;
              blk.efie(row, col) += efie_scale * (a_term - inv_k2 * phi_term);
              if (with_curl_)
                blk.curl(row, col) += w * nn * kern.curl[qc][pc];
            }
          }
        }
      }
    }
  }

  const MeshView &test_;
  const MeshView &src_;
  bool same_;
  std::vector<Medium> media_;
  bool with_curl_;
  std::vector<OperatorBlocks> blocks_;
};

OperatorBlocks assemble(const MeshView &test, const MeshView &src, bool same, Medium medium, bool with_curl) {
  const Medium media[] = {medium};
  return std::move(Assembler(test, src, same, media, with_curl).run().front());
}

/// Integrals of each hat function against rho' exp(-j kappa z) and
/// exp(-j kappa z) along the generatrix.
struct PlaneWaveMoments {
  Vector tangential; ///< int T drho/dt exp(-j kappa z) dt
  Vector plain;      ///< int T exp(-j kappa z) dt
};

PlaneWaveMoments plane_wave_moments(const MeshView &mesh, double kappa) {
  const auto n = static_cast<Eigen::Index>(mesh.basis());
  PlaneWaveMoments m{Vector::Zero(n), Vector::Zero(n)};
  for (std::size_t e = 0; e < mesh.elements(); ++e) {
    for (const auto &p : mesh.gauss_points(e, 8)) {
      const cd phase = std::polar(1.0, -kappa * p.ring.z);
      for (int a = 0; a < 2; ++a) {
        const long i = mesh.basis_index(e, a);
        if (i < 0)
          continue;
        m.tangential(i) += p.weight * p.shape[a] * p.ring.drho * phase;
        m.plain(i) += p.weight * p.shape[a] * phase;
      }
    }
  }
  return m;
}

/// Tested incident E (x-polarized, unit amplitude) and eta0 H.
void incident_vectors(const PlaneWaveMoments &m, Vector &e_inc, Vector &h_inc) {
  const auto n = m.plain.size();
  e_inc.resize(2 * n);
  h_inc.resize(2 * n);
  e_inc.head(n) = kPi * m.tangential;
  e_inc.tail(n) = kJ * kPi * m.plain;
  h_inc.head(n) = -kJ * kPi * m.tangential;
  h_inc.tail(n) = kPi * m.plain;
}

/// Backscatter amplitude from m = 1 electric (scaled by eta0) and magnetic
/// currents radiating in free space; the m = -1 mirror doubles both moments.
cd backscatter(const PlaneWaveMoments &m, const Vector &j, const Vector *mag, double kappa) {
  const auto n = m.plain.size();
  const cd nx = 2.0 * kPi * ((m.tangential.array() * j.head(n).array()).sum() -
                             kJ * (m.plain.array() * j.tail(n).array()).sum());
  cd ly = 0.0;
  if (mag)
    ly = 2.0 * kPi * (kJ * (m.tangential.array() * mag->head(n).array()).sum() +
                      (m.plain.array() * mag->tail(n).array()).sum());
  const cd far = -kJ * kappa / (4.0 * kPi) * (nx - ly);
  return 2.0 * far;
}

void check_conditioning(const Eigen::PartialPivLU<Matrix> &lu, double kappa, double floor) {
  const double rc = lu.rcond();
  if (!(rc >= floor)) {
    std::ostringstream msg;
    msg << "system matrix is nearly singular at kappa = " << kappa << " (rcond " << rc
        << "); likely an interior resonance, perturb kappa slightly";
    throw SolverError(msg.str(), kappa, rc);
  }
}

} // namespace

FsrSample solve_frequency(const BorMesh &pec, const std::optional<BorMesh> &coat, double permittivity,
                          double kappa, const SolverOptions &options) {
  if (!(kappa > 0.0))
    throw Error("solve_frequency: kappa must be positive");
  if (!(permittivity >= 1.0))
    throw Error("solve_frequency: permittivity must be >= 1");
  if (kappa > pec.kappa_max * (1.0 + 1e-12) || (coat && kappa > coat->kappa_max * (1.0 + 1e-12)))
    throw Error("solve_frequency: mesh was built for a lower kappa_max");

  const MeshView s1(pec);
  const Medium free_space{kappa, 1.0};

  if (!coat) {
    const auto blocks = assemble(s1, s1, true, free_space, false);
    Vector e_inc, h_inc;
    const auto moments = plane_wave_moments(s1, kappa);
    incident_vectors(moments, e_inc, h_inc);
    Eigen::PartialPivLU<Matrix> lu(blocks.efie);
    check_conditioning(lu, kappa, options.rcond_floor);
    const Vector j = lu.solve(-e_inc);
    return FsrSample::from_complex(kappa, backscatter(moments, j, nullptr, kappa));
  }

  const MeshView s2(*coat);
  const double n_index = std::sqrt(permittivity);
  const Medium shell{kappa * n_index, 1.0 / n_index};

  const auto l11 = assemble(s1, s1, true, shell, false);
  const auto b12 = assemble(s1, s2, false, shell, true);
  const auto b21 = assemble(s2, s1, false, shell, true);
  const Medium both[] = {free_space, shell};
  auto b22 = Assembler(s2, s2, true, both, true).run();

  const auto n1 = static_cast<Eigen::Index>(2 * s1.basis());
  const auto n2 = static_cast<Eigen::Index>(2 * s2.basis());
  Matrix z = Matrix::Zero(n1 + 2 * n2, n1 + 2 * n2);
  // Unknowns: [eta0 J on conductor | eta0 J on shell | M on shell].
  z.block(0, 0, n1, n1) = l11.efie;
  z.block(0, n1, n1, n2) = -b12.efie;
  z.block(0, n1 + n2, n1, n2) = b12.curl;

  z.block(n1, 0, n2, n1) = -b21.efie;
  z.block(n1, n1, n2, n2) = b22[0].efie + b22[1].efie;
  z.block(n1, n1 + n2, n2, n2) = -(b22[0].curl + b22[1].curl);

  z.block(n1 + n2, 0, n2, n1) = -b21.curl;
  z.block(n1 + n2, n1, n2, n2) = b22[0].curl + b22[1].curl;
  z.block(n1 + n2, n1 + n2, n2, n2) = b22[0].efie + permittivity * b22[1].efie;

  Vector e_inc, h_inc;
  const auto moments = plane_wave_moments(s2, kappa);
  incident_vectors(moments, e_inc, h_inc);
  Vector rhs = Vector::Zero(n1 + 2 * n2);
  rhs.segment(n1, n2) = -e_inc;
  rhs.segment(n1 + n2, n2) = -h_inc;

  Eigen::PartialPivLU<Matrix> lu(z);
  check_conditioning(lu, kappa, options.rcond_floor);
  const Vector x = lu.solve(rhs);
  const Vector j2 = x.segment(n1, n2);
  const Vector m2 = x.segment(n1 + n2, n2);
  return FsrSample::from_complex(kappa, backscatter(moments, j2, &m2, kappa));
}

std::string geometry_hash(const BorMesh &pec, const std::optional<BorMesh> &coat) {
  std::string text = "pec\n" + canonical_text(pec.profile);
  if (coat)
    text += "coat\n" + canonical_text(coat->profile);
  return hex64(fnv1a(text));
}

FsrTable sweep(const BorMesh &pec, const std::optional<BorMesh> &coat, double permittivity,
               std::span<const double> kappa_grid, int workers, const SolverOptions &options) {
  if (kappa_grid.empty())
    throw Error("sweep: empty frequency grid");
  for (std::size_t i = 1; i < kappa_grid.size(); ++i)
    if (!(kappa_grid[i] > kappa_grid[i - 1]))
      throw Error("sweep: frequency grid must be strictly increasing");

  const std::size_t count = kappa_grid.size();
  std::vector<FsrSample> samples(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        samples[i] = solve_frequency(pec, coat, permittivity, kappa_grid[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned n = workers > 0 ? static_cast<unsigned>(workers) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, static_cast<unsigned>(count));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t)
      pool.emplace_back(work);
  }
  for (const auto &err : errors)
    if (err)
      std::rethrow_exception(err);

  FsrTable table;
  table.meta.geometry_hash = geometry_hash(pec, coat);
  table.meta.permittivity = permittivity;
  table.meta.points_per_wavelength = pec.points_per_wavelength;
  table.meta.solver_version = std::string(kSolverVersion);
  table.meta.source = "bor";
  table.samples = std::move(samples);
  return table;
}

} // namespace coatscat
