#include "panoloc/geodesy.hpp"

#include <cmath>

namespace panoloc {

CompassBearing correct_heading(double delta_easting, double delta_northing) {
  if (delta_easting == 0.0 && delta_northing == 0.0) {
    throw ZeroDisplacement("correct_heading: zero displacement between fixes");
  }
  double theta = std::atan2(delta_easting, delta_northing) * kDegPerRad - 180.0;
  return CompassBearing(theta);
}

namespace {

// NAD83 / California zone 6 (ftUS), Lambert conformal conic 2SP.
// GRS80 ellipsoid; standard parallels 33d53' and 32d47'; origin 32d10'N,
// 116d15'W; false easting 2,000,000 m; false northing 500,000 m.
constexpr double kUsFt = 1200.0 / 3937.0;           // meters per US survey foot
constexpr double kSemiMajorFt = 6378137.0 / kUsFt;  // GRS80 a, ftUS
constexpr double kInvFlattening = 298.257222101;

constexpr double kLat1 = (33.0 + 53.0 / 60.0) * kRadPerDeg;
constexpr double kLat2 = (32.0 + 47.0 / 60.0) * kRadPerDeg;
constexpr double kLat0 = (32.0 + 10.0 / 60.0) * kRadPerDeg;
constexpr double kLon0 = -(116.0 + 15.0 / 60.0) * kRadPerDeg;
constexpr double kFalseEasting = 2000000.0 / kUsFt;
constexpr double kFalseNorthing = 500000.0 / kUsFt;

struct LccConstants {
  double e;   // first eccentricity
  double e2;
  double n;   // cone constant
  double f;   // mapping radius factor
  double rho0;
};

double m_of(double phi, double e2) {
  double s = std::sin(phi);
  return std::cos(phi) / std::sqrt(1.0 - e2 * s * s);
}

double t_of(double phi, double e) {
  double s = std::sin(phi);
  return std::tan(kPi / 4.0 - phi / 2.0) /
         std::pow((1.0 - e * s) / (1.0 + e * s), e / 2.0);
}

const LccConstants& zone6() {
  static const LccConstants c = [] {
    LccConstants k{};
    double flat = 1.0 / kInvFlattening;
    k.e2 = flat * (2.0 - flat);
    k.e = std::sqrt(k.e2);
    double m1 = m_of(kLat1, k.e2);
    double m2 = m_of(kLat2, k.e2);
    double t1 = t_of(kLat1, k.e);
    double t2 = t_of(kLat2, k.e);
    double t0 = t_of(kLat0, k.e);
    k.n = (std::log(m1) - std::log(m2)) / (std::log(t1) - std::log(t2));
    k.f = m1 / (k.n * std::pow(t1, k.n));
    k.rho0 = kSemiMajorFt * k.f * std::pow(t0, k.n);
    return k;
  }();
  return c;
}

}  // namespace

ProjectedPoint project(const GeoPoint& p) {
  if (!std::isfinite(p.latitude) || !std::isfinite(p.longitude) ||
      std::abs(p.latitude) >= 90.0) {
    throw OutOfDomain("project: latitude out of projection domain");
  }
  const LccConstants& k = zone6();
  double phi = p.latitude * kRadPerDeg;
  double lam = p.longitude * kRadPerDeg;
  double t = t_of(phi, k.e);
  double rho = kSemiMajorFt * k.f * std::pow(t, k.n);
  double gamma = k.n * (lam - kLon0);
  return {kFalseEasting + rho * std::sin(gamma),
          kFalseNorthing + k.rho0 - rho * std::cos(gamma)};
}

GeoPoint unproject(const ProjectedPoint& p) {
  if (!std::isfinite(p.easting) || !std::isfinite(p.northing)) {
    throw NonConvergence("unproject: non-finite input coordinates");
  }
  const LccConstants& k = zone6();
  double x = p.easting - kFalseEasting;
  double y = k.rho0 - (p.northing - kFalseNorthing);
  double rho = std::copysign(std::hypot(x, y), k.n);
  double gamma = std::atan2(x, y);
  double lam = gamma / k.n + kLon0;
  double t = std::pow(rho / (kSemiMajorFt * k.f), 1.0 / k.n);

  double phi = kPi / 2.0 - 2.0 * std::atan(t);
  bool converged = false;
  for (int i = 0; i < 20; ++i) {
    double s = std::sin(phi);
    double next = kPi / 2.0 -
                  2.0 * std::atan(t * std::pow((1.0 - k.e * s) / (1.0 + k.e * s), k.e / 2.0));
    if (std::abs(next - phi) < 1e-14) {
      phi = next;
      converged = true;
      break;
    }
    phi = next;
  }
  if (!converged || !std::isfinite(phi)) {
    throw NonConvergence("unproject: latitude iteration did not converge");
  }
  return {phi * kDegPerRad, lam * kDegPerRad, std::nullopt};
}

ProjectedPoint camera_origin(const ProjectedPoint& gps, const CompassBearing& heading,
                             const SensorLayout& layout) {
  if (!layout.apply_lever_arm) return gps;
  return point_along(gps, heading.add(180.0), layout.gps_to_camera_offset);
}

ProjectedPoint point_along(const ProjectedPoint& origin, const CompassBearing& bearing,
                           double range_ft) {
  double rad = bearing.degrees() * kRadPerDeg;
  return {origin.easting + range_ft * std::sin(rad),
          origin.northing + range_ft * std::cos(rad)};
}

double ray_distance(const ProjectedPoint& a, const ProjectedPoint& b) {
  return std::hypot(b.easting - a.easting, b.northing - a.northing);
}

}  // namespace panoloc
