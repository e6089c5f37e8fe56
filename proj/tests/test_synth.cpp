#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "panoloc/synth.hpp"

using namespace panoloc;
namespace fs = std::filesystem;

namespace {

SceneSpec straight_spec(int steps = 50) {
  SceneSpec s;
  s.dataset_id = "tsynth";
  s.seed = 1234;
  s.segments = {{90.0, 0.0, steps}};  // due east
  return s;
}

}  // namespace

TEST_CASE("generate is deterministic in the seed") {
  SceneSpec spec = straight_spec();
  spec.random_stop_signs = 3;
  spec.noise.position_sd_ft = 0.5;
  SyntheticScene a = generate(spec);
  SyntheticScene b = generate(spec);
  REQUIRE(a.track.size() == b.track.size());
  for (std::size_t i = 0; i < a.track.size(); ++i) {
    CHECK(a.track[i].projected.easting == b.track[i].projected.easting);
    CHECK(a.track[i].projected.northing == b.track[i].projected.northing);
    CHECK(a.track[i].heading.degrees() == b.track[i].heading.degrees());
  }
  REQUIRE(a.objects.size() == b.objects.size());
  for (std::size_t i = 0; i < a.objects.size(); ++i) {
    CHECK(a.objects[i].second.easting == b.objects[i].second.easting);
  }

  spec.seed = 99;
  SyntheticScene c = generate(spec);
  CHECK(c.objects[0].second.easting != a.objects[0].second.easting);
}

TEST_CASE("track geometry and headings") {
  SceneSpec spec = straight_spec(10);
  SyntheticScene scene = generate(spec);
  REQUIRE(scene.track.size() == 10);
  for (std::size_t i = 0; i < scene.track.size(); ++i) {
    const auto& c = scene.track[i];
    CHECK(c.projected.easting == doctest::Approx(spec.start.easting + 10.0 * i));
    CHECK(c.projected.northing == doctest::Approx(spec.start.northing));
    // consecutive-fix correction: eastward motion reads 270
    CHECK(c.heading.degrees() == doctest::Approx(270.0));
    CHECK(c.sequence_index == static_cast<int>(i));
  }
  CHECK(scene.track[0].capture_id == "tsynth_000001");
  CHECK(scene.track[0].heading.degrees() == scene.track[1].heading.degrees());
}

TEST_CASE("ground truth detections invert the pixel mapping") {
  SceneSpec spec = straight_spec(20);
  // object 30 ft right of the road at track x index 5
  ProjectedPoint obj = {spec.start.easting + 50.0, spec.start.northing - 30.0};
  spec.objects.emplace_back(ObjectClass::stop_sign(), obj);
  SyntheticScene scene = generate(spec);

  int hits = 0;
  for (const auto& cap : scene.track) {
    auto dets = ground_truth_detect(scene, cap);
    double range = ray_distance(cap.projected, obj);
    double fwd = obj.easting - cap.projected.easting;
    for (const auto& d : dets) {
      ++hits;
      CHECK(d.object_class == ObjectClass::stop_sign());
      // recover the bearing and re-aim at the object
      CompassBearing theta = bbox_to_bearing(d, cap.heading, spec.photosphere_width,
                                             spec.cardinal_count);
      ProjectedPoint hit = point_along(cap.projected, theta, range);
      CHECK(std::abs(hit.easting - obj.easting) < 0.05);
      CHECK(std::abs(hit.northing - obj.northing) < 0.05);
    }
    if (range > spec.max_range_ft || fwd <= 0.0) CHECK(dets.empty());
  }
  CHECK(hits >= 3);
}

TEST_CASE("scene round trips through serialization") {
  SceneSpec spec = straight_spec(12);
  spec.random_fire_hydrants = 2;
  spec.noise.bearing_sd_deg = 0.1;
  SyntheticScene scene = generate(spec);

  fs::path dir = fs::temp_directory_path() / "panoloc_synth_rt";
  fs::create_directories(dir);
  write_scene_json(scene, (dir / "scene.json").string());
  write_track_csv(scene, (dir / "track.csv").string());
  write_ground_truth(scene, (dir / "gt.json").string());

  SceneSpec back = read_scene_spec((dir / "scene.json").string());
  CHECK(back.dataset_id == spec.dataset_id);
  CHECK(back.seed == spec.seed);
  CHECK(back.segments.size() == spec.segments.size());
  CHECK(back.noise.bearing_sd_deg == spec.noise.bearing_sd_deg);
  CHECK(back.objects.size() == spec.objects.size());

  std::ifstream csv(dir / "track.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "capture_id,timestamp,latitude,longitude,altitude");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) rows += !line.empty();
  CHECK(rows == 12);
  fs::remove_all(dir);
}

TEST_CASE("invalid scene specs are rejected") {
  SceneSpec s;
  CHECK_THROWS_AS(generate(s), InvalidSpec);
  s.segments = {{0.0, 0.0, 1}};
  CHECK_THROWS_AS(generate(s), InvalidSpec);
  s.segments = {{0.0, 0.0, 5}};
  s.step_ft = -1.0;
  CHECK_THROWS_AS(generate(s), InvalidSpec);
  s.step_ft = 10.0;
  s.photosphere_width = 1001;
  CHECK_THROWS_AS(generate(s), InvalidSpec);
}
