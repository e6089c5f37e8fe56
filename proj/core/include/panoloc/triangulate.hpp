#ifndef PANOLOC_TRIANGULATE_HPP
#define PANOLOC_TRIANGULATE_HPP

#include <string>
#include <utility>

#include "panoloc/detector.hpp"
#include "panoloc/geodesy.hpp"

namespace panoloc {

/// Half-line in the map plane: camera origin plus object direction.
struct BearingObservation {
  ProjectedPoint origin;
  CompassBearing bearing;  // theta_s
  std::string capture_ref;
  ObjectClass object_class;
  double confidence = 1.0;
  int sequence_index = 0;
};

/// Triangulated candidate position from one observation pair.
struct PairIntersection {
  ProjectedPoint position;
  double dist_a = 0.0;  // feet, origin A to position
  double dist_b = 0.0;
  std::pair<std::string, std::string> source_pair;
  double conditioning = 0.0;  // absolute bearing separation of the pair, degrees
};

struct IntersectParams {
  double min_separation = 2.0;   // degrees, mod 180
  double epsilon_vertical = 0.05;  // degrees from due north/south
};

/// Slope dNorthing/dEasting of the line along a compass bearing. Throws
/// VerticalRay within epsilon_vertical of due north/south.
double bearing_to_slope(const CompassBearing& b, double epsilon_vertical = 0.05);

/// Intersect the two observation lines in the easting-northing plane and
/// keep only the physical (forward half-ray) solution.
PairIntersection intersect(const BearingObservation& a, const BearingObservation& b,
                           const IntersectParams& params = {});

}  // namespace panoloc

#endif
