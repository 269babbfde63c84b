#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace coatscat {

/// A point in the meridian half-plane: rho is the distance from the symmetry
/// axis, z the axial coordinate.
struct MeridianPoint {
  double rho = 0.0;
  double z = 0.0;
};

/// Coated rounded cone. Lengths are in units of the base radius unless
/// base_radius is changed explicitly.
struct GeometrySpec {
  double half_angle = 0.0;       ///< half of the vertex angle, radians
  double base_radius = 1.0;      ///< radius of the sharp-cone metal base
  double rounding_radius = 0.0;  ///< radius of vertex cap and base-edge rounding
  double coating_thickness = 0.0;
  double permittivity = 1.0;
  /// Axial position of the PEC vertex tip. The default puts the tip at the
  /// origin, so echo times are measured from there.
  double tip_z = 0.0;

  bool has_coating() const { return coating_thickness > 0.0 && permittivity != 1.0; }

  /// Throws GeometryError when an invariant is violated.
  void validate() const;
};

/// The body used throughout the figure: 2*alpha = 23 deg, r = 0.32a, d = 0.6a.
GeometrySpec default_cone_spec(double permittivity);

struct LineSegment {
  MeridianPoint from;
  MeridianPoint to;
};

/// Circular arc traversed from angle start to angle end. The point at angle t
/// is center + radius * (cos t, sin t) in (rho, z); end > start means
/// counter-clockwise, which is convex for profiles running from the lower
/// axis point to the upper one.
struct ArcSegment {
  MeridianPoint center;
  double radius = 0.0;
  double start = 0.0;
  double end = 0.0;
};

using ProfileSegment = std::variant<LineSegment, ArcSegment>;

struct CurvePoint {
  MeridianPoint position;
  double drho = 0.0; ///< unit tangent, rho component
  double dz = 0.0;   ///< unit tangent, z component
};

/// Tangent-continuous generatrix running from one axis point to another.
class GeneratrixProfile {
public:
  GeneratrixProfile() = default;
  explicit GeneratrixProfile(std::vector<ProfileSegment> segments);

  const std::vector<ProfileSegment> &segments() const { return segments_; }
  /// Arc-length position where segment i starts; size() + 1 entries.
  const std::vector<double> &breaks() const { return breaks_; }
  double length() const { return breaks_.back(); }

  /// Position and tangent at arc length s on segment i (s is global).
  CurvePoint evaluate(std::size_t segment, double s) const;
  CurvePoint evaluate(double s) const;
  double curvature(std::size_t segment) const;

  GeneratrixProfile translated(double dz) const;

private:
  std::vector<ProfileSegment> segments_;
  std::vector<double> breaks_;
};

double segment_length(const ProfileSegment &seg);

struct CoatedProfiles {
  GeneratrixProfile pec;
  std::optional<GeneratrixProfile> coat;
};

/// Builds the PEC rounded cone and, when a coating is present, its outer
/// dielectric surface.
CoatedProfiles build_profiles(const GeometrySpec &spec);

/// Half-circle generatrix of a sphere centered at (0, center_z).
GeneratrixProfile sphere_profile(double radius, double center_z = 0.0);

/// Outward normal offset by distance d. Corners, if any, are bridged with
/// arcs around the corner point.
GeneratrixProfile offset_profile(const GeneratrixProfile &profile, double d);

struct CurvatureJump {
  double arc_position = 0.0;
  double z = 0.0;
};

inline constexpr double kCurvatureJumpTolerance = 1e-6;

std::vector<CurvatureJump> curvature_discontinuities(const GeneratrixProfile &profile);

/// Discretized generatrix. Nodes are in arc length; element e spans
/// [nodes[e], nodes[e+1]] and lies on profile segment element_segment[e].
struct BorMesh {
  GeneratrixProfile profile;
  std::vector<double> nodes;
  std::vector<MeridianPoint> positions;
  std::vector<MeridianPoint> tangents; ///< (drho, dz) per node
  std::vector<std::size_t> element_segment;
  double kappa_max = 0.0;
  double points_per_wavelength = 0.0;
  double max_index = 1.0; ///< refractive index used to size elements

  std::size_t element_count() const { return element_segment.size(); }
  /// Piecewise-linear functions sit on interior nodes only.
  std::size_t basis_count() const { return nodes.size() - 2; }
};

/// Meshes a profile so every element is no longer than the wavelength in a
/// medium of refractive index max_index at kappa_max, divided by
/// points_per_wavelength. Every segment junction becomes a node.
BorMesh mesh_profile(const GeneratrixProfile &profile, double kappa_max,
                     double points_per_wavelength, double max_index = 1.0);

} // namespace coatscat
