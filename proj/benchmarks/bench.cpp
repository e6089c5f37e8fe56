#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "panoloc/cluster.hpp"
#include "panoloc/imaging.hpp"

using namespace panoloc;

static void BM_Project(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(32.5, 34.5);
  std::uniform_real_distribution<double> lon(-118.5, -115.5);
  std::vector<GeoPoint> pts(1024);
  for (auto& p : pts) p = {lat(rng), lon(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project(pts[i++ & 1023]));
  }
}
BENCHMARK(BM_Project);

static void BM_Unproject(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> e(5900000.0, 6200000.0);
  std::uniform_real_distribution<double> n(2100000.0, 2400000.0);
  std::vector<ProjectedPoint> pts(1024);
  for (auto& p : pts) p = {e(rng), n(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(unproject(pts[i++ & 1023]));
  }
}
BENCHMARK(BM_Unproject);

static void BM_Intersect(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-500.0, 500.0);
  struct Pair {
    BearingObservation a, b;
  };
  std::vector<Pair> pairs;
  while (pairs.size() < 1024) {
    ProjectedPoint target{coord(rng), coord(rng)};
    Pair p;
    p.a.origin = {coord(rng), coord(rng)};
    p.b.origin = {coord(rng), coord(rng)};
    auto aim = [&](const ProjectedPoint& o) {
      return CompassBearing(std::atan2(target.easting - o.easting,
                                       target.northing - o.northing) * kDegPerRad);
    };
    p.a.bearing = aim(p.a.origin);
    p.b.bearing = aim(p.b.origin);
    if (p.a.bearing.line_separation(p.b.bearing) < 3.0) continue;
    pairs.push_back(p);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const Pair& p = pairs[i++ & 1023];
    benchmark::DoNotOptimize(intersect(p.a, p.b));
  }
}
BENCHMARK(BM_Intersect);

static void BM_Dbscan(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> coord(0.0, 2000.0);
  std::vector<ProjectedPoint> pts(state.range(0));
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  ClusterParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dbscan(pts, params));
  }
}
BENCHMARK(BM_Dbscan)->Arg(100)->Arg(1000)->Arg(4000);

static void BM_SliceCardinals(benchmark::State& state) {
  Raster band(8000, 1000, 127);
  ImagingConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slice_cardinals(band, "img", CompassBearing(123.4), cfg));
  }
}
BENCHMARK(BM_SliceCardinals);

BENCHMARK_MAIN();
