#ifndef PANOLOC_CLUSTER_HPP
#define PANOLOC_CLUSTER_HPP

#include <optional>
#include <vector>

#include "panoloc/triangulate.hpp"

namespace panoloc {

struct ClusterParams {
  double eps = 15.0;            // feet, DBSCAN neighborhood radius
  int min_pts = 2;
  double min_separation = 2.0;  // degrees, forwarded to intersect
  double max_detection_range = 150.0;  // feet
  double nominal_range = 30.0;  // feet, ray point used as cluster embedding
};

/// One point per observation at origin + nominal_range along its bearing.
std::vector<ProjectedPoint> seed_points(const std::vector<BearingObservation>& obs,
                                        double nominal_range);

/// Density-based clustering over projected points (Euclidean feet, boundary
/// distance counts as a neighbor). Returns one label per point in input
/// order; -1 marks noise. Deterministic: cluster ids follow first-core-point
/// order.
std::vector<int> dbscan(const std::vector<ProjectedPoint>& points, const ClusterParams& params);

/// Observations believed to reference one physical object.
struct ClusterGroup {
  int cluster_id = 0;
  ObjectClass object_class;
  std::vector<BearingObservation> members;
  std::vector<PairIntersection> pair_results;
};

/// Final per-object estimate from within-cluster combinatorial averaging.
struct ObjectEstimate {
  ObjectClass object_class;
  std::optional<GeoPoint> mean_position;  // null when every pair was discarded
  double sigma_lat = 0.0;   // sample sd of pair-intersection latitudes, degrees
  double sigma_lon = 0.0;
  int support_detections = 0;
  int support_pairs = 0;
  int discarded_pairs = 0;
  double mean_object_distance = 0.0;  // feet, over retained pair distances
  double sd_object_distance = 0.0;
  double mean_drive_step = 0.0;       // feet, consecutive member origins
  double sd_drive_step = 0.0;
};

/// All-pairs intersection over the group's members, discarding erroring
/// pairs, then mean/sd of the unprojected intersection points. Fills
/// g.pair_results. Throws NoValidPairs when every pair is discarded.
ObjectEstimate estimate_cluster(ClusterGroup& g, const ClusterParams& params);

}  // namespace panoloc

#endif
