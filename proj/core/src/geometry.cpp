#include "coatscat/geometry.hpp"

#include "coatscat/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace coatscat {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts> struct Overloaded : Ts... {
  using Ts::operator()...;
};

double direction(const ArcSegment &arc) { return arc.end >= arc.start ? 1.0 : -1.0; }

CurvePoint evaluate_local(const ProfileSegment &seg, double s) {
  return std::visit(
      Overloaded{
          [s](const LineSegment &line) {
            const double dr = line.to.rho - line.from.rho;
            const double dz = line.to.z - line.from.z;
            const double len = std::hypot(dr, dz);
            return CurvePoint{{line.from.rho + s * dr / len, line.from.z + s * dz / len},
                              dr / len,
                              dz / len};
          },
          [s](const ArcSegment &arc) {
            const double sign = direction(arc);
            const double t = arc.start + sign * s / arc.radius;
            const double c = std::cos(t), sn = std::sin(t);
            return CurvePoint{{arc.center.rho + arc.radius * c, arc.center.z + arc.radius * sn},
                              -sign * sn,
                              sign * c};
          }},
      seg);
}

MeridianPoint start_point(const ProfileSegment &seg) { return evaluate_local(seg, 0.0).position; }
MeridianPoint end_point(const ProfileSegment &seg) {
  return evaluate_local(seg, segment_length(seg)).position;
}

double normal_angle(const CurvePoint &p) {
  // outward normal (dz, -drho)
  return std::atan2(-p.drho, p.dz);
}

} // namespace

void GeometrySpec::validate() const {
  if (!(half_angle > 0.0 && half_angle < kPi / 2))
    throw GeometryError("half angle must lie in (0, pi/2)");
  if (!(base_radius > 0.0))
    throw GeometryError("base radius must be positive");
  if (!(rounding_radius > 0.0 && rounding_radius < base_radius))
    throw GeometryError("rounding radius must lie in (0, base radius)");
  if (!(coating_thickness >= 0.0))
    throw GeometryError("coating thickness must be non-negative");
  if (!(permittivity >= 1.0))
    throw GeometryError("permittivity must be >= 1");
}

GeometrySpec default_cone_spec(double permittivity) {
  GeometrySpec spec;
  spec.half_angle = 11.5 * kPi / 180.0;
  spec.base_radius = 1.0;
  spec.rounding_radius = 0.32;
  spec.coating_thickness = 0.6;
  spec.permittivity = permittivity;
  return spec;
}

double segment_length(const ProfileSegment &seg) {
  return std::visit(Overloaded{[](const LineSegment &l) {
                                 return std::hypot(l.to.rho - l.from.rho, l.to.z - l.from.z);
                               },
                               [](const ArcSegment &a) { return a.radius * std::abs(a.end - a.start); }},
                    seg);
}

GeneratrixProfile::GeneratrixProfile(std::vector<ProfileSegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty())
    throw GeometryError("profile has no segments");
  breaks_.reserve(segments_.size() + 1);
  breaks_.push_back(0.0);
  for (const auto &seg : segments_) {
    const double len = segment_length(seg);
    if (!(len > 0.0))
      throw GeometryError("profile segment has zero length");
    breaks_.push_back(breaks_.back() + len);
  }
  const double scale = std::max(1.0, length());
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto a = evaluate_local(segments_[i], 0.0);
    const auto b = evaluate_local(segments_[i], segment_length(segments_[i]));
    if (a.position.rho < -1e-12 * scale || b.position.rho < -1e-12 * scale)
      throw GeometryError("profile leaves the half-plane rho >= 0");
    if (i > 0) {
      const auto prev = evaluate_local(segments_[i - 1], segment_length(segments_[i - 1]));
      if (std::hypot(prev.position.rho - a.position.rho, prev.position.z - a.position.z) > 1e-9 * scale)
        throw GeometryError("profile segments are not connected");
    }
  }
  const auto first = start_point(segments_.front());
  const auto last = end_point(segments_.back());
  if (std::abs(first.rho) > 1e-12 * scale || std::abs(last.rho) > 1e-12 * scale)
    throw GeometryError("profile must start and end on the symmetry axis");
}

CurvePoint GeneratrixProfile::evaluate(std::size_t segment, double s) const {
  return evaluate_local(segments_.at(segment), s - breaks_[segment]);
}

CurvePoint GeneratrixProfile::evaluate(double s) const {
  const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, s);
  return evaluate(static_cast<std::size_t>(it - breaks_.begin() - 1), s);
}

double GeneratrixProfile::curvature(std::size_t segment) const {
  return std::visit(Overloaded{[](const LineSegment &) { return 0.0; },
                               [](const ArcSegment &a) { return direction(a) / a.radius; }},
                    segments_.at(segment));
}

GeneratrixProfile GeneratrixProfile::translated(double dz) const {
  std::vector<ProfileSegment> moved;
  moved.reserve(segments_.size());
  for (const auto &seg : segments_) {
    moved.push_back(std::visit(Overloaded{[dz](LineSegment l) -> ProfileSegment {
                                            l.from.z += dz;
                                            l.to.z += dz;
                                            return l;
                                          },
                                          [dz](ArcSegment a) -> ProfileSegment {
                                            a.center.z += dz;
                                            return a;
                                          }},
                               seg));
  }
  return GeneratrixProfile(std::move(moved));
}

CoatedProfiles build_profiles(const GeometrySpec &spec) {
  spec.validate();
  const double alpha = spec.half_angle;
  const double a = spec.base_radius;
  const double r = spec.rounding_radius;
  const double sa = std::sin(alpha), ca = std::cos(alpha);

  // Sharp apex at z = 0, lateral line rho = z tan(alpha), base plane z = height.
  const double height = a / std::tan(alpha);
  const double cap_center = r / sa;
  const MeridianPoint cap_tangent{r * ca, cap_center - r * sa};

  const double edge_z = height - r;
  const double edge_rho = (edge_z * sa - r) / ca;
  const MeridianPoint edge_tangent{edge_rho + r * ca, edge_z - r * sa};

  if (!(edge_rho > 0.0)) {
    std::ostringstream msg;
    msg << "rounding radius " << r << " too large for the base: edge rounding center falls at rho = "
        << edge_rho;
    throw GeometryError(msg.str());
  }
  if (!(edge_tangent.z > cap_tangent.z)) {
    std::ostringstream msg;
    msg << "rounding radius " << r << " too large for half angle " << alpha
        << ": vertex cap and edge rounding overlap";
    throw GeometryError(msg.str());
  }

  std::vector<ProfileSegment> segs;
  segs.emplace_back(ArcSegment{{0.0, cap_center}, r, -kPi / 2, -alpha});
  segs.emplace_back(LineSegment{cap_tangent, edge_tangent});
  segs.emplace_back(ArcSegment{{edge_rho, edge_z}, r, -alpha, kPi / 2});
  segs.emplace_back(LineSegment{{edge_rho, height}, {0.0, height}});

  const double tip = cap_center - r;
  CoatedProfiles out{GeneratrixProfile(std::move(segs)).translated(spec.tip_z - tip), std::nullopt};
  if (spec.coating_thickness > 0.0)
    out.coat = offset_profile(out.pec, spec.coating_thickness);
  return out;
}

GeneratrixProfile sphere_profile(double radius, double center_z) {
  if (!(radius > 0.0))
    throw GeometryError("sphere radius must be positive");
  return GeneratrixProfile({ArcSegment{{0.0, center_z}, radius, -kPi / 2, kPi / 2}});
}

GeneratrixProfile offset_profile(const GeneratrixProfile &profile, double d) {
  if (!(d >= 0.0))
    throw GeometryError("offset distance must be non-negative");
  if (d == 0.0)
    return profile;
  const auto &segs = profile.segments();
  std::vector<ProfileSegment> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0) {
      const auto prev = evaluate_local(segs[i - 1], segment_length(segs[i - 1]));
      const auto next = evaluate_local(segs[i], 0.0);
      const double turn = prev.drho * next.dz - prev.dz * next.drho;
      const double dot = prev.drho * next.drho + prev.dz * next.dz;
      if (std::abs(turn) > 1e-12 || dot < 0.0) {
        if (turn < 0.0)
          throw GeometryError("concave corner cannot be offset outward");
        const double a0 = normal_angle(prev);
        double a1 = normal_angle(next);
        while (a1 < a0)
          a1 += 2 * kPi;
        out.emplace_back(ArcSegment{next.position, d, a0, a1});
      }
    }
    out.push_back(std::visit(
        Overloaded{[d](const LineSegment &l) -> ProfileSegment {
                     const double len = std::hypot(l.to.rho - l.from.rho, l.to.z - l.from.z);
                     const double nr = (l.to.z - l.from.z) / len;
                     const double nz = -(l.to.rho - l.from.rho) / len;
                     return LineSegment{{l.from.rho + d * nr, l.from.z + d * nz},
                                        {l.to.rho + d * nr, l.to.z + d * nz}};
                   },
                   [d](const ArcSegment &a) -> ProfileSegment {
                     const double radius = a.radius + direction(a) * d;
                     if (!(radius > 0.0))
                       throw GeometryError("offset exceeds the radius of a concave arc");
                     return ArcSegment{a.center, radius, a.start, a.end};
                   }},
        segs[i]));
  }
  return GeneratrixProfile(std::move(out));
}

std::vector<CurvatureJump> curvature_discontinuities(const GeneratrixProfile &profile) {
  std::vector<CurvatureJump> jumps;
  const auto &breaks = profile.breaks();
  for (std::size_t i = 1; i < profile.segments().size(); ++i) {
    const double k0 = profile.curvature(i - 1);
    const double k1 = profile.curvature(i);
    const double scale = std::max(std::abs(k0), std::abs(k1));
    if (std::abs(k0 - k1) > kCurvatureJumpTolerance * scale)
      jumps.push_back({breaks[i], profile.evaluate(i, breaks[i]).position.z});
  }
  return jumps;
}

BorMesh mesh_profile(const GeneratrixProfile &profile, double kappa_max, double points_per_wavelength,
                     double max_index) {
  if (!(kappa_max > 0.0))
    throw GeometryError("kappa_max must be positive");
  if (!(points_per_wavelength >= 10.0))
    throw GeometryError("points per wavelength must be at least 10");
  if (!(max_index >= 1.0))
    throw GeometryError("refractive index must be >= 1");
  if (profile.segments().empty() || !(profile.length() > 0.0))
    throw GeometryError("cannot mesh an empty profile");

  BorMesh mesh;
  mesh.profile = profile;
  mesh.kappa_max = kappa_max;
  mesh.points_per_wavelength = points_per_wavelength;
  mesh.max_index = max_index;

  const double h_wave = 2 * kPi / (kappa_max * max_index * points_per_wavelength);
  const auto &breaks = profile.breaks();
  mesh.nodes.push_back(0.0);
  for (std::size_t i = 0; i < profile.segments().size(); ++i) {
    const double len = breaks[i + 1] - breaks[i];
    double h = h_wave;
    if (const auto *arc = std::get_if<ArcSegment>(&profile.segments()[i]))
      h = std::min(h, arc->radius * kPi / 6);
    const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-9)));
    for (std::size_t k = 1; k < count; ++k) {
      mesh.nodes.push_back(breaks[i] + len * static_cast<double>(k) / static_cast<double>(count));
      mesh.element_segment.push_back(i);
    }
    mesh.nodes.push_back(breaks[i + 1]);
    mesh.element_segment.push_back(i);
  }
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    // Junction nodes take the position from the segment that starts there.
    const std::size_t seg = n < mesh.element_segment.size() ? mesh.element_segment[n] : mesh.element_segment.back();
    const auto p = profile.evaluate(seg, mesh.nodes[n]);
    mesh.positions.push_back(p.position);
    mesh.tangents.push_back({p.drho, p.dz});
  }
  mesh.positions.front().rho = 0.0;
  mesh.positions.back().rho = 0.0;
  if (mesh.nodes.size() < 3)
    throw GeometryError("mesh has no interior nodes");
  return mesh;
}

} // namespace coatscat
