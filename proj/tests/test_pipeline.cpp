#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "panoloc/pipeline.hpp"
#include "panoloc/synth.hpp"

using namespace panoloc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("ingest derives headings from consecutive fixes") {
  fs::path dir = temp_dir("panoloc_ingest1");
  // northbound drive: ~10 ft between fixes
  write_file(dir / "t.csv",
             "capture_id,timestamp,latitude,longitude,altitude\n"
             "a,2019-01-01T00:00:00Z,33.800000,-117.900000,10\n"
             "b,2019-01-01T00:00:01Z,33.800027,-117.900000,10\n"
             "c,2019-01-01T00:00:02Z,33.800054,-117.900000,10\n");
  auto caps = ingest_track((dir / "t.csv").string(), "d1", ColumnMap{},
                           SignConvention::signed_lon);
  REQUIRE(caps.size() == 3);
  // northbound displacement reads ~180 under the correction, offset by the
  // grid convergence angle at this longitude
  CHECK(caps[1].heading.degrees() == doctest::Approx(180.9).epsilon(1e-2));
  CHECK(caps[0].heading.degrees() == caps[1].heading.degrees());
  CHECK(caps[0].sequence_index == 0);
  CHECK(caps[2].dataset_id == "d1");
  CHECK(caps[0].position.altitude.has_value());
  fs::remove_all(dir);
}

TEST_CASE("explicit heading column wins and rows sort by timestamp") {
  fs::path dir = temp_dir("panoloc_ingest2");
  write_file(dir / "t.csv",
             "capture_id,timestamp,latitude,longitude,heading\n"
             "b,2019-01-01T00:00:01Z,33.800027,117.900000,45.0\n"
             "a,2019-01-01T00:00:00Z,33.800000,117.900000,30.0\n");
  ColumnMap cols;
  cols.heading = "heading";
  auto caps = ingest_track((dir / "t.csv").string(), "d", cols, SignConvention::west_positive);
  REQUIRE(caps.size() == 2);
  CHECK(caps[0].capture_id == "a");
  CHECK(caps[0].heading.degrees() == doctest::Approx(30.0));
  CHECK(caps[1].heading.degrees() == doctest::Approx(45.0));
  CHECK(caps[0].position.longitude == doctest::Approx(-117.9));
  fs::remove_all(dir);
}

TEST_CASE("ingest skips malformed rows and enforces minimums") {
  fs::path dir = temp_dir("panoloc_ingest3");
  write_file(dir / "t.csv",
             "capture_id,timestamp,latitude,longitude\n"
             "a,2019-01-01T00:00:00Z,33.800000,-117.900000\n"
             "broken,2019-01-01T00:00:01Z,not_a_number,-117.9\n"
             "b,2019-01-01T00:00:02Z,33.800027,-117.900000\n");
  auto caps = ingest_track((dir / "t.csv").string(), "d", ColumnMap{},
                           SignConvention::signed_lon);
  CHECK(caps.size() == 2);

  write_file(dir / "one.csv",
             "capture_id,timestamp,latitude,longitude\n"
             "a,2019-01-01T00:00:00Z,33.8,-117.9\n");
  CHECK_THROWS_AS(ingest_track((dir / "one.csv").string(), "d", ColumnMap{},
                               SignConvention::signed_lon),
                  EmptyTrack);

  write_file(dir / "nolat.csv", "capture_id,timestamp,longitude\na,t,1\n");
  CHECK_THROWS_AS(ingest_track((dir / "nolat.csv").string(), "d", ColumnMap{},
                               SignConvention::signed_lon),
                  MissingColumn);
  fs::remove_all(dir);
}

TEST_CASE("config loading with overrides and defaults") {
  fs::path dir = temp_dir("panoloc_cfg");
  write_file(dir / "c.json", R"({
    "output_dir": "out",
    "jobs": 4,
    "detector": {"backend": "http", "host": "10.0.0.1", "port": 8080,
                 "min_confidence": 0.6, "all_cardinals": true},
    "cluster": {"eps": 12.5, "min_pts": 3},
    "datasets": [
      {"id": "ds1", "area": "Anaheim", "track_csv": "a.csv",
       "sign_convention": "west_positive",
       "columns": {"capture_id": "img", "heading": "hdg"}}
    ]
  })");
  PipelineConfig cfg = load_config((dir / "c.json").string());
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.jobs == 4);
  CHECK(cfg.detector.backend == "http");
  CHECK(cfg.detector.http.host == "10.0.0.1");
  CHECK(cfg.detector.http.port == 8080);
  CHECK(cfg.detector.min_confidence == 0.6);
  CHECK(cfg.detector.all_cardinals);
  CHECK(cfg.cluster.eps == 12.5);
  CHECK(cfg.cluster.min_pts == 3);
  CHECK(cfg.cluster.nominal_range == 30.0);
  REQUIRE(cfg.datasets.size() == 1);
  CHECK(cfg.datasets[0].area == "Anaheim");
  CHECK(cfg.datasets[0].sign_convention == SignConvention::west_positive);
  CHECK(cfg.datasets[0].columns.capture_id == "img");
  CHECK(cfg.datasets[0].columns.heading == "hdg");

  write_file(dir / "bad.json", "{nope");
  CHECK_THROWS_AS(load_config((dir / "bad.json").string()), InvalidSpec);
  fs::remove_all(dir);
}

TEST_CASE("end-to-end synthetic run recovers every planted object") {
  fs::path dir = temp_dir("panoloc_e2e");

  SceneSpec spec;
  spec.dataset_id = "e2e";
  spec.seed = 7;
  spec.segments = {{90.0, 0.0, 200}};
  spec.random_stop_signs = 5;
  spec.random_fire_hydrants = 2;
  SyntheticScene scene = generate(spec);
  write_track_csv(scene, (dir / "track.csv").string());
  write_ground_truth(scene, (dir / "gt.json").string());

  DatasetConfig ds;
  ds.id = "e2e";
  ds.area = "Synthetic";
  ds.track_csv = (dir / "track.csv").string();
  ds.ground_truth = (dir / "gt.json").string();

  PipelineConfig cfg;
  cfg.output_dir = (dir / "datasets").string();
  cfg.detector.all_cardinals = true;  // placeholder rasters: analyze everything

  auto detector = make_detector(cfg.detector, ds);
  RunResult r = run_dataset(ds, cfg, *detector);

  REQUIRE(r.features.size() == 7);
  int stop_signs = 0, hydrants = 0;
  for (const auto& f : r.features) {
    if (f.estimate.object_class == ObjectClass::stop_sign()) ++stop_signs;
    if (f.estimate.object_class == ObjectClass::fire_hydrant()) ++hydrants;
    // match the nearest planted object
    ProjectedPoint got = project(f.geometry);
    double best = 1e18;
    for (const auto& [cls, p] : scene.objects) {
      if (!(cls == f.estimate.object_class)) continue;
      best = std::min(best, std::hypot(got.easting - p.easting, got.northing - p.northing));
    }
    CHECK(best < 1e-3);
  }
  CHECK(stop_signs == 5);
  CHECK(hydrants == 2);

  // conservation audit
  const DatasetSummary& s = r.summary;
  CHECK(s.detections_total ==
        s.clustered_members + s.noise_observations + s.discarded_observations);
  CHECK(s.photosphere_count == 200);
  CHECK(s.cardinal_count == 1600);
  CHECK(s.cardinals_analyzed == 1600);
  CHECK(s.slices_skipped == 0);
  CHECK(s.miles_travelled == doctest::Approx(199 * 10.0 / 5280.0));

  // sidecars exist under the documented name, one per cardinal
  fs::path sidecars = dir / "datasets" / "e2e" / "sidecars";
  std::size_t sidecar_count =
      std::distance(fs::directory_iterator(sidecars), fs::directory_iterator{});
  CHECK(sidecar_count == 1600);

  // spot-check one sidecar document
  const PhotoCapture& cap = r.captures[0];
  ImagingConfig img;
  Raster band(16 * img.cardinal_count, 16, 128);
  auto slices = slice_cardinals(band, cap.capture_id, cap.heading, img);
  fs::path sc = sidecars / (slice_file_stem(cap.capture_id, 1, slices[0].directional_class) +
                            ".json");
  REQUIRE(fs::exists(sc));
  json doc = json::parse(slurp(sc));
  CHECK(doc.at("capture_id") == cap.capture_id);
  CHECK(doc.at("cardinal_index") == 1);
  CHECK(doc.at("directional_class") == slices[0].directional_class.code);

  fs::remove_all(dir);
}

TEST_CASE("runs are deterministic and parallelism does not change results") {
  fs::path dir = temp_dir("panoloc_det");

  SceneSpec spec;
  spec.dataset_id = "det";
  spec.seed = 3;
  spec.segments = {{0.0, 1.0, 60}};  // gentle curve
  spec.random_stop_signs = 2;
  spec.noise.bearing_sd_deg = 0.05;
  SyntheticScene scene = generate(spec);
  write_track_csv(scene, (dir / "track.csv").string());
  write_ground_truth(scene, (dir / "gt.json").string());

  DatasetConfig ds;
  ds.id = "det";
  ds.track_csv = (dir / "track.csv").string();
  ds.ground_truth = (dir / "gt.json").string();

  auto run_once = [&](const std::string& tag, int jobs) {
    PipelineConfig cfg;
    cfg.output_dir = (dir / tag).string();
    cfg.detector.all_cardinals = true;
    cfg.jobs = jobs;
    auto detector = make_detector(cfg.detector, ds);
    RunResult r = run_dataset(ds, cfg, *detector);
    write_feature_collection(r.features, (dir / tag / "features.geojson").string());
    write_observations(r.observations, (dir / tag / "observations.json").string());
    return slurp(dir / tag / "features.geojson");
  };

  std::string a = run_once("run1", 1);
  std::string b = run_once("run2", 1);
  std::string c = run_once("run3", 4);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(slurp(dir / "run1" / "observations.json") == slurp(dir / "run3" / "observations.json"));

  fs::remove_all(dir);
}

TEST_CASE("captures and observations round trip through their files") {
  fs::path dir = temp_dir("panoloc_roundtrip");

  SceneSpec spec;
  spec.dataset_id = "rt";
  spec.segments = {{45.0, 0.0, 5}};
  SyntheticScene scene = generate(spec);
  write_captures(scene.track, (dir / "captures.json").string());
  auto caps = read_captures((dir / "captures.json").string());
  REQUIRE(caps.size() == scene.track.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    CHECK(caps[i].capture_id == scene.track[i].capture_id);
    CHECK(caps[i].projected.easting == scene.track[i].projected.easting);
    CHECK(caps[i].heading.degrees() == scene.track[i].heading.degrees());
  }

  std::vector<BearingObservation> obs(2);
  obs[0].origin = {6040000.0, 2244000.0};
  obs[0].bearing = CompassBearing(123.456);
  obs[0].capture_ref = "rt_000001";
  obs[0].object_class = ObjectClass::fire_hydrant();
  obs[0].confidence = 0.75;
  obs[0].sequence_index = 0;
  obs[1] = obs[0];
  obs[1].object_class = ObjectClass::other("bench");
  obs[1].sequence_index = 1;
  write_observations(obs, (dir / "obs.json").string());
  auto back = read_observations((dir / "obs.json").string());
  REQUIRE(back.size() == 2);
  CHECK(back[0].bearing.degrees() == obs[0].bearing.degrees());
  CHECK(back[0].object_class == ObjectClass::fire_hydrant());
  CHECK(back[1].object_class.label() == "bench");

  fs::remove_all(dir);
}

TEST_CASE("accuracy report aggregates per area and overall") {
  ObjectEstimate e1;
  e1.object_class = ObjectClass::stop_sign();
  e1.sigma_lat = 1e-5;
  e1.sigma_lon = 2e-5;
  ObjectEstimate e2 = e1;
  e2.sigma_lat = 3e-5;
  e2.sigma_lon = 4e-5;
  ObjectEstimate e3 = e1;
  e3.object_class = ObjectClass::fire_hydrant();

  std::vector<std::pair<std::string, ObjectEstimate>> ests{
      {"A", e1}, {"B", e2}, {"A", e3}};
  auto rows = emit_accuracy_report(ests);
  // A/hydrant, A/stop, B/stop, All/hydrant, All/stop
  REQUIRE(rows.size() == 5);
  auto find_row = [&](const std::string& area, const std::string& cls) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const AccuracyRow& r) {
      return r.area == area && r.object_class == cls;
    });
    REQUIRE(it != rows.end());
    return *it;
  };
  AccuracyRow all_stop = find_row("All", "stop_sign");
  CHECK(all_stop.n == 2);
  CHECK(all_stop.sigma_lat_mean == doctest::Approx(2e-5));
  CHECK(all_stop.sigma_lat_max == doctest::Approx(3e-5));
  CHECK(find_row("A", "fire_hydrant").n == 1);

  std::ostringstream text;
  write_accuracy_text(rows, text);
  CHECK(text.str().find("Displayed values scaled x 10^-4") != std::string::npos);
}
