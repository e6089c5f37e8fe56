#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>

#include "panoloc/cluster.hpp"

using namespace panoloc;

namespace {

// brute-force reference: neighbor matrix + BFS over core points
std::vector<int> dbscan_reference(const std::vector<ProjectedPoint>& pts, double eps,
                                  int min_pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d = std::hypot(pts[i].easting - pts[j].easting, pts[i].northing - pts[j].northing);
      adj[i][j] = d <= eps;
    }
  }
  std::vector<bool> core(n, false);
  for (int i = 0; i < n; ++i) {
    int deg = 0;
    for (int j = 0; j < n; ++j) deg += adj[i][j];
    core[i] = deg >= min_pts;
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (!core[i] || label[i] != -1) continue;
    int id = next++;
    std::queue<int> q;
    label[i] = id;
    q.push(i);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      if (!core[u]) continue;
      for (int v = 0; v < n; ++v) {
        if (!adj[u][v] || label[v] != -1) continue;
        label[v] = id;
        q.push(v);
      }
    }
  }
  return label;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> fwd, rev;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == -1) != (b[i] == -1)) return false;
    if (a[i] == -1) continue;
    auto [it1, new1] = fwd.emplace(a[i], b[i]);
    if (!new1 && it1->second != b[i]) return false;
    auto [it2, new2] = rev.emplace(b[i], a[i]);
    if (!new2 && it2->second != a[i]) return false;
  }
  return true;
}

BearingObservation obs_at(const ProjectedPoint& origin, double bearing_deg,
                          const std::string& ref, int seq) {
  BearingObservation o;
  o.origin = origin;
  o.bearing = CompassBearing(bearing_deg);
  o.capture_ref = ref;
  o.object_class = ObjectClass::stop_sign();
  o.sequence_index = seq;
  return o;
}

}  // namespace

TEST_CASE("dbscan matches brute-force reference") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> count(1, 50);
  std::uniform_real_distribution<double> coord(0.0, 120.0);
  ClusterParams params;
  for (int trial = 0; trial < 200; ++trial) {
    int n = count(rng);
    std::vector<ProjectedPoint> pts(n);
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    auto got = dbscan(pts, params);
    auto want = dbscan_reference(pts, params.eps, params.min_pts);
    CHECK(same_partition(got, want));
  }
}

TEST_CASE("dbscan partition is permutation invariant") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  ClusterParams params;
  std::vector<ProjectedPoint> pts(40);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  auto base = dbscan(pts, params);

  std::vector<int> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ProjectedPoint> shuffled(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = pts[perm[i]];
    auto labels = dbscan(shuffled, params);
    std::vector<int> unshuffled(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) unshuffled[perm[i]] = labels[i];
    CHECK(same_partition(base, unshuffled));
  }
}

TEST_CASE("dbscan boundary distance counts as neighbor") {
  ClusterParams params;
  params.eps = 10.0;
  params.min_pts = 2;
  std::vector<ProjectedPoint> pts{{0.0, 0.0}, {10.0, 0.0}, {30.0, 0.0}};
  auto labels = dbscan(pts, params);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[0] != -1);
  CHECK(labels[2] == -1);
}

TEST_CASE("seed points sit along the rays") {
  std::vector<BearingObservation> observations{obs_at({0.0, 0.0}, 90.0, "a", 0),
                                               obs_at({100.0, 0.0}, 0.0, "b", 1)};
  auto pts = seed_points(observations, 30.0);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].easting == doctest::Approx(30.0));
  CHECK(pts[0].northing == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pts[1].easting == doctest::Approx(100.0));
  CHECK(pts[1].northing == doctest::Approx(30.0));
}

TEST_CASE("cluster estimate recovers a planted object exactly") {
  // drive east along y=0, object 30 ft left of the road at (50, 30)
  ProjectedPoint base = project({33.8, -117.9});
  ProjectedPoint target{base.easting + 50.0, base.northing + 30.0};
  ClusterGroup g;
  g.cluster_id = 0;
  g.object_class = ObjectClass::stop_sign();
  for (int i = 0; i < 5; ++i) {
    ProjectedPoint origin{base.easting + 10.0 * i, base.northing};
    double bearing = std::atan2(target.easting - origin.easting,
                                target.northing - origin.northing) * kDegPerRad;
    g.members.push_back(obs_at(origin, bearing, "cap_" + std::to_string(i), i));
  }
  ClusterParams params;
  ObjectEstimate e = estimate_cluster(g, params);
  REQUIRE(e.mean_position.has_value());
  ProjectedPoint back = project(*e.mean_position);
  CHECK(std::abs(back.easting - target.easting) < 1e-3);
  CHECK(std::abs(back.northing - target.northing) < 1e-3);
  CHECK(e.support_detections == 5);
  CHECK(e.support_pairs + e.discarded_pairs == 10);
  CHECK(e.sigma_lat < 1e-8);
  CHECK(e.sigma_lon < 1e-8);
  CHECK(e.mean_drive_step == doctest::Approx(10.0));
  CHECK(e.sd_drive_step == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(e.mean_object_distance > 0.0);
}

TEST_CASE("estimate throws when every pair is degenerate") {
  ClusterGroup g;
  g.object_class = ObjectClass::stop_sign();
  // parallel rays from a straight drive: all pairs rejected
  for (int i = 0; i < 3; ++i) {
    g.members.push_back(obs_at({10.0 * i, 0.0}, 45.0, "cap_" + std::to_string(i), i));
  }
  ClusterParams params;
  CHECK_THROWS_AS(estimate_cluster(g, params), NoValidPairs);
}

TEST_CASE("pairs beyond max detection range are discarded") {
  // intersection at ~212 ft from both origins, over the 150 ft cap
  ClusterGroup g;
  g.object_class = ObjectClass::stop_sign();
  g.members.push_back(obs_at({-150.0, 0.0}, 45.0, "a", 0));
  g.members.push_back(obs_at({150.0, 0.0}, 315.0, "b", 1));
  ClusterParams params;
  CHECK_THROWS_AS(estimate_cluster(g, params), NoValidPairs);
}
