#ifndef PANOLOC_GEODESY_HPP
#define PANOLOC_GEODESY_HPP

#include <cmath>
#include <optional>

#include "panoloc/errors.hpp"

namespace panoloc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kRadPerDeg = kPi / 180.0;
inline constexpr double kFeetPerMile = 5280.0;

/// Geographic position, WGS84 decimal degrees. Longitudes are stored signed
/// (west negative); altitude is feet above sea level when present.
struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;
  std::optional<double> altitude;
};

/// Planar position in State Plane California Zone 6 (NAD83), US survey feet.
struct ProjectedPoint {
  double easting = 0.0;
  double northing = 0.0;
};

/// Azimuth in decimal degrees clockwise from true north, always in [0, 360).
class CompassBearing {
public:
  CompassBearing() = default;
  explicit CompassBearing(double deg) : degrees_(normalize(deg)) {}

  double degrees() const { return degrees_; }

  /// (this + delta) mod 360.
  CompassBearing add(double delta) const { return CompassBearing(degrees_ + delta); }

  /// Signed angular difference this - other, mapped to (-180, 180].
  double signed_delta(const CompassBearing& other) const {
    double d = normalize(degrees_ - other.degrees_);
    return d > 180.0 ? d - 360.0 : d;
  }

  /// Separation of the underlying lines (direction-agnostic), in [0, 90].
  double line_separation(const CompassBearing& other) const {
    double d = normalize(degrees_ - other.degrees_);
    if (d > 180.0) d = 360.0 - d;
    if (d > 90.0) d = 180.0 - d;
    return d;
  }

  static double normalize(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    return r == 360.0 ? 0.0 : r;
  }

private:
  double degrees_ = 0.0;
};

inline CompassBearing bearing_add(const CompassBearing& b, double delta) {
  return b.add(delta);
}

/// Physical layout of the capture unit: GNSS antenna to camera lever arm, feet.
struct SensorLayout {
  double gps_to_camera_offset = 3.28084;  // 1 m
  bool apply_lever_arm = false;
};

/// Corrected driving direction from a consecutive-fix displacement in
/// projected feet: theta = deg(atan2(dE, dN)) - 180, wrapped to [0, 360).
/// Throws ZeroDisplacement for a stationary fix pair.
CompassBearing correct_heading(double delta_easting, double delta_northing);

/// Forward/inverse Lambert conformal conic for State Plane California Zone 6
/// (NAD83, US survey feet). Constants are the published zone definition.
ProjectedPoint project(const GeoPoint& p);
GeoPoint unproject(const ProjectedPoint& p);

/// Camera origin for a capture: the projected GNSS fix, optionally shifted
/// along heading + 180 by the lever arm.
ProjectedPoint camera_origin(const ProjectedPoint& gps, const CompassBearing& heading,
                             const SensorLayout& layout);

/// Point reached from `origin` travelling `range_ft` along `bearing`.
ProjectedPoint point_along(const ProjectedPoint& origin, const CompassBearing& bearing,
                           double range_ft);

/// Euclidean distance in projected feet.
double ray_distance(const ProjectedPoint& a, const ProjectedPoint& b);

}  // namespace panoloc

#endif
