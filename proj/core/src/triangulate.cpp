#include "panoloc/triangulate.hpp"

#include <cmath>

namespace panoloc {

namespace {

struct Vec2 {
  double x, y;  // x = easting, y = northing
};

// Working frames for the slope-line intersection. The slope formulation is
// singular for rays near due north/south (infinite dN/dE), so the
// computation runs in whichever frame keeps both slopes finite:
//   identity:   (x, y),          bearing b
//   swapped:    (y, x),          bearing 90 - b
//   rotated45:  axes turned 45 degrees clockwise, bearing b - 45
enum class Frame { identity, swapped, rotated45 };

constexpr double kInvSqrt2 = 0.70710678118654752440;

double frame_bearing_rad(Frame f, double bearing_deg) {
  switch (f) {
    case Frame::identity: return bearing_deg * kRadPerDeg;
    case Frame::swapped: return (90.0 - bearing_deg) * kRadPerDeg;
    case Frame::rotated45: return (bearing_deg - 45.0) * kRadPerDeg;
  }
  return 0.0;
}

Vec2 to_frame(Frame f, Vec2 p) {
  switch (f) {
    case Frame::identity: return p;
    case Frame::swapped: return {p.y, p.x};
    case Frame::rotated45:
      return {(p.x - p.y) * kInvSqrt2, (p.x + p.y) * kInvSqrt2};
  }
  return p;
}

Vec2 from_frame(Frame f, Vec2 p) {
  switch (f) {
    case Frame::identity: return p;
    case Frame::swapped: return {p.y, p.x};
    case Frame::rotated45:
      return {(p.x + p.y) * kInvSqrt2, (p.y - p.x) * kInvSqrt2};
  }
  return p;
}

// Distance of the frame-local bearing from the slope singularity (sin = 0).
double verticality(Frame f, double bearing_deg) {
  return std::abs(std::sin(frame_bearing_rad(f, bearing_deg)));
}

}  // namespace

double bearing_to_slope(const CompassBearing& b, double epsilon_vertical) {
  double rad = b.degrees() * kRadPerDeg;
  double s = std::sin(rad);
  if (std::abs(s) < std::sin(epsilon_vertical * kRadPerDeg)) {
    throw VerticalRay("bearing_to_slope: bearing " + std::to_string(b.degrees()) +
                      " within " + std::to_string(epsilon_vertical) +
                      " deg of due north/south");
  }
  return std::cos(rad) / s;
}

PairIntersection intersect(const BearingObservation& a, const BearingObservation& b,
                           const IntersectParams& params) {
  if (a.origin.easting == b.origin.easting && a.origin.northing == b.origin.northing) {
    throw ParallelRays("intersect: coincident origins");
  }
  const double separation = a.bearing.line_separation(b.bearing);
  if (separation < params.min_separation) {
    throw ParallelRays("intersect: bearing separation " + std::to_string(separation) +
                       " deg below minimum " + std::to_string(params.min_separation));
  }

  const double ba = a.bearing.degrees();
  const double bb = b.bearing.degrees();

  // Pick the frame in which the worse-conditioned of the two rays is
  // furthest from vertical.
  Frame frame = Frame::identity;
  double best = std::min(verticality(Frame::identity, ba), verticality(Frame::identity, bb));
  for (Frame f : {Frame::swapped, Frame::rotated45}) {
    double v = std::min(verticality(f, ba), verticality(f, bb));
    if (v > best) {
      best = v;
      frame = f;
    }
  }

  // Work relative to origin A to keep magnitudes small under rotation.
  const Vec2 shift{a.origin.easting, a.origin.northing};
  const Vec2 pa = to_frame(frame, {0.0, 0.0});
  const Vec2 pb = to_frame(frame, {b.origin.easting - shift.x, b.origin.northing - shift.y});

  const double ra = frame_bearing_rad(frame, ba);
  const double rb = frame_bearing_rad(frame, bb);
  const double mu_a = std::cos(ra) / std::sin(ra);
  const double mu_b = std::cos(rb) / std::sin(rb);
  if (!std::isfinite(mu_a) || !std::isfinite(mu_b) || mu_a == mu_b) {
    throw ParallelRays("intersect: degenerate slopes");
  }

  const double xc = (pb.y - pa.y + mu_a * pa.x - mu_b * pb.x) / (mu_a - mu_b);
  const double yc = pa.y - mu_a * (pa.x - xc);
  if (!std::isfinite(xc) || !std::isfinite(yc)) {
    throw ParallelRays("intersect: non-finite intersection");
  }

  // Forward-ray validation in the same frame: the ray parameter along the
  // unit direction (sin, cos) must be positive for both observations.
  const double ta = (xc - pa.x) * std::sin(ra) + (yc - pa.y) * std::cos(ra);
  const double tb = (xc - pb.x) * std::sin(rb) + (yc - pb.y) * std::cos(rb);
  if (ta <= 0.0 || tb <= 0.0) {
    throw BehindSensor("intersect: intersection behind one of the sensors (t_a=" +
                       std::to_string(ta) + ", t_b=" + std::to_string(tb) + ")");
  }

  const Vec2 local = from_frame(frame, {xc, yc});
  PairIntersection out;
  out.position = {local.x + shift.x, local.y + shift.y};
  out.dist_a = ray_distance(a.origin, out.position);
  out.dist_b = ray_distance(b.origin, out.position);
  out.source_pair = {a.capture_ref, b.capture_ref};
  out.conditioning = separation;
  return out;
}

}  // namespace panoloc
