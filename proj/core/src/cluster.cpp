#include "panoloc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace panoloc {

std::vector<ProjectedPoint> seed_points(const std::vector<BearingObservation>& obs,
                                        double nominal_range) {
  std::vector<ProjectedPoint> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    out.push_back(point_along(o.origin, o.bearing, nominal_range));
  }
  return out;
}

std::vector<int> dbscan(const std::vector<ProjectedPoint>& points, const ClusterParams& params) {
  const int n = static_cast<int>(points.size());
  const double eps2 = params.eps * params.eps;
  auto within = [&](int i, int j) {
    double dx = points[i].easting - points[j].easting;
    double dy = points[i].northing - points[j].northing;
    return dx * dx + dy * dy <= eps2;
  };

  std::vector<std::vector<int>> neighbors(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (within(i, j)) neighbors[i].push_back(j);  // includes i itself
    }
  }

  std::vector<int> labels(n, -1);
  std::vector<bool> visited(n, false);
  int next_cluster = 0;
  for (int i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = true;
    if (static_cast<int>(neighbors[i].size()) < params.min_pts) continue;  // noise or border

    const int cid = next_cluster++;
    labels[i] = cid;
    std::deque<int> frontier(neighbors[i].begin(), neighbors[i].end());
    while (!frontier.empty()) {
      int j = frontier.front();
      frontier.pop_front();
      if (labels[j] == -1) labels[j] = cid;  // border points keep first cluster
      if (visited[j]) continue;
      visited[j] = true;
      if (static_cast<int>(neighbors[j].size()) >= params.min_pts) {
        frontier.insert(frontier.end(), neighbors[j].begin(), neighbors[j].end());
      }
    }
  }
  return labels;
}

namespace {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd r;
  if (v.empty()) return r;
  double sum = 0.0;
  for (double x : v) sum += x;
  r.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return r;
}

}  // namespace

ObjectEstimate estimate_cluster(ClusterGroup& g, const ClusterParams& params) {
  ObjectEstimate est;
  est.object_class = g.object_class;
  est.support_detections = static_cast<int>(g.members.size());

  // members in capture order so drive-step stats follow the traversal
  std::sort(g.members.begin(), g.members.end(),
            [](const BearingObservation& a, const BearingObservation& b) {
              return a.sequence_index < b.sequence_index;
            });

  IntersectParams ip;
  ip.min_separation = params.min_separation;
  g.pair_results.clear();
  std::vector<double> pair_dists;
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    for (std::size_t j = i + 1; j < g.members.size(); ++j) {
      try {
        PairIntersection pi = intersect(g.members[i], g.members[j], ip);
        if (pi.dist_a > params.max_detection_range || pi.dist_b > params.max_detection_range) {
          ++est.discarded_pairs;
          continue;
        }
        g.pair_results.push_back(pi);
        pair_dists.push_back(pi.dist_a);
        pair_dists.push_back(pi.dist_b);
      } catch (const Error&) {
        ++est.discarded_pairs;
      }
    }
  }
  est.support_pairs = static_cast<int>(g.pair_results.size());

  std::vector<double> steps;
  for (std::size_t i = 0; i + 1 < g.members.size(); ++i) {
    steps.push_back(ray_distance(g.members[i].origin, g.members[i + 1].origin));
  }
  MeanSd step_stats = mean_sd(steps);
  est.mean_drive_step = step_stats.mean;
  est.sd_drive_step = step_stats.sd;

  if (g.pair_results.empty()) {
    throw NoValidPairs("estimate_cluster: all " + std::to_string(est.discarded_pairs) +
                       " pairs discarded for cluster " + std::to_string(g.cluster_id));
  }

  std::vector<double> lats, lons;
  lats.reserve(g.pair_results.size());
  lons.reserve(g.pair_results.size());
  for (const auto& pi : g.pair_results) {
    GeoPoint gp = unproject(pi.position);
    lats.push_back(gp.latitude);
    lons.push_back(gp.longitude);
  }
  MeanSd lat_stats = mean_sd(lats);
  MeanSd lon_stats = mean_sd(lons);
  est.mean_position = GeoPoint{lat_stats.mean, lon_stats.mean, std::nullopt};
  est.sigma_lat = lat_stats.sd;
  est.sigma_lon = lon_stats.sd;

  MeanSd dist_stats = mean_sd(pair_dists);
  est.mean_object_distance = dist_stats.mean;
  est.sd_object_distance = dist_stats.sd;
  return est;
}

}  // namespace panoloc
