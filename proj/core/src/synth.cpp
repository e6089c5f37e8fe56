#include "panoloc/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>

#include <json.hpp>

namespace panoloc {

using nlohmann::json;

namespace {

std::string capture_id_for(const std::string& dataset_id, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", index);
  return dataset_id + "_" + buf;
}

std::string timestamp_for(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "2019-03-01T%02d:%02d:%02dZ", index / 3600,
                (index / 60) % 60, index % 60);
  return buf;
}

void validate(const SceneSpec& spec) {
  if (spec.segments.empty()) throw InvalidSpec("scene spec: no segments");
  int total = 0;
  for (const auto& s : spec.segments) {
    if (s.steps <= 0) throw InvalidSpec("scene spec: segment with non-positive steps");
    total += s.steps;
  }
  if (total < 2) throw InvalidSpec("scene spec: track needs at least 2 captures");
  if (spec.step_ft <= 0) throw InvalidSpec("scene spec: non-positive step");
  if (spec.photosphere_width < spec.cardinal_count ||
      spec.photosphere_width % spec.cardinal_count != 0) {
    throw InvalidSpec("scene spec: width not divisible by cardinal count");
  }
}

}  // namespace

SyntheticScene generate(const SceneSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> pos_noise(0.0, 1.0);

  // exact track geometry first
  std::vector<ProjectedPoint> exact;
  std::vector<double> motion;
  ProjectedPoint pos = spec.start;
  for (const auto& seg : spec.segments) {
    double m = seg.motion_bearing;
    for (int i = 0; i < seg.steps; ++i) {
      exact.push_back(pos);
      motion.push_back(CompassBearing::normalize(m));
      pos = point_along(pos, CompassBearing(m), spec.step_ft);
      m += seg.turn_deg_per_step;
    }
  }
  const int total = static_cast<int>(exact.size());

  SyntheticScene scene;
  scene.spec = spec;
  scene.objects = spec.objects;

  // random objects planted to the right of evenly spaced track points, with
  // enough spacing to stay distinct clusters
  const int random_total = spec.random_stop_signs + spec.random_fire_hydrants;
  if (random_total > 0) {
    std::uniform_real_distribution<double> lateral(10.0, std::max(12.0, spec.random_offset_ft));
    std::uniform_real_distribution<double> along(0.0, spec.step_ft);
    for (int k = 0; k < random_total; ++k) {
      int anchor = static_cast<int>((k + 0.5) * total / random_total);
      if (anchor >= total) anchor = total - 1;
      ProjectedPoint p = point_along(exact[anchor], CompassBearing(motion[anchor]), along(rng));
      p = point_along(p, CompassBearing(motion[anchor] + 90.0), lateral(rng));
      ObjectClass cls = k < spec.random_stop_signs ? ObjectClass::stop_sign()
                                                   : ObjectClass::fire_hydrant();
      scene.objects.emplace_back(cls, p);
    }
  }

  // noisy fixes, then headings from consecutive displacements
  std::vector<ProjectedPoint> fixes(exact);
  if (spec.noise.position_sd_ft > 0.0) {
    for (auto& f : fixes) {
      f.easting += pos_noise(rng) * spec.noise.position_sd_ft;
      f.northing += pos_noise(rng) * spec.noise.position_sd_ft;
    }
  }

  scene.track.reserve(total);
  CompassBearing prev_heading;
  for (int i = 0; i < total; ++i) {
    PhotoCapture c;
    c.capture_id = capture_id_for(spec.dataset_id, i + 1);
    c.dataset_id = spec.dataset_id;
    c.timestamp = timestamp_for(i);
    c.projected = fixes[i];
    c.position = unproject(fixes[i]);
    c.position.altitude = 0.0;
    c.sequence_index = i;
    if (i > 0) {
      try {
        c.heading = correct_heading(fixes[i].easting - fixes[i - 1].easting,
                                    fixes[i].northing - fixes[i - 1].northing);
      } catch (const ZeroDisplacement&) {
        c.heading = prev_heading;
      }
    }
    prev_heading = c.heading;
    scene.track.push_back(std::move(c));
  }
  scene.track[0].heading = scene.track[1].heading;
  return scene;
}

std::vector<Detection> ground_truth_detect(const SyntheticScene& scene,
                                           const PhotoCapture& capture) {
  const SceneSpec& spec = scene.spec;
  const int width = spec.photosphere_width;
  const int slice_width = width / spec.cardinal_count;
  const double deg_per_px = 360.0 / width;

  std::vector<Detection> out;
  for (std::size_t k = 0; k < scene.objects.size(); ++k) {
    const auto& [cls, obj] = scene.objects[k];
    double de = obj.easting - capture.projected.easting;
    double dn = obj.northing - capture.projected.northing;
    double range = std::hypot(de, dn);
    if (range <= 0.0 || range > spec.max_range_ft) continue;

    CompassBearing theta_s(std::atan2(de, dn) * kDegPerRad);
    CompassBearing motion = capture.heading.add(180.0);
    if (std::abs(theta_s.signed_delta(motion)) >= 90.0) continue;  // behind camera

    if (spec.noise.bearing_sd_deg > 0.0) {
      // seeded per (scene, capture, object) so results are call-order free
      std::uint64_t h = std::hash<std::string>{}(capture.capture_id);
      std::mt19937_64 rng(spec.seed ^ h ^ (0x9e3779b97f4a7c15ULL * (k + 1)));
      std::normal_distribution<double> noise(0.0, spec.noise.bearing_sd_deg);
      theta_s = theta_s.add(noise(rng));
    }

    double w = CompassBearing::normalize(theta_s.degrees() - capture.heading.degrees()) / deg_per_px;
    if (w >= width) w -= width;
    int cardinal = static_cast<int>(w) / slice_width + 1;
    double center = w - static_cast<double>(cardinal - 1) * slice_width;
    double hw = std::min({spec.bbox_width_px / 2.0, center, slice_width - center});
    if (hw < 0.5) continue;  // bbox would straddle a slice edge

    Detection d;
    d.capture_ref = capture.capture_id;
    d.cardinal_index = cardinal;
    d.object_class = cls;
    d.bbox = {center - hw, slice_width / 2.0 - hw, center + hw, slice_width / 2.0 + hw};
    d.confidence = 1.0;
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

json detection_to_json(const Detection& d) {
  return json{{"cardinal_index", d.cardinal_index},
              {"class", d.object_class.label()},
              {"bbox", {d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max}},
              {"confidence", d.confidence}};
}

}  // namespace

void write_ground_truth(const SyntheticScene& scene, const std::string& path) {
  json dets = json::object();
  for (const auto& c : scene.track) {
    std::vector<Detection> d = ground_truth_detect(scene, c);
    if (d.empty()) continue;
    json arr = json::array();
    for (const auto& det : d) arr.push_back(detection_to_json(det));
    dets[c.capture_id] = std::move(arr);
  }
  std::ofstream out(path);
  if (!out) throw IOFailure("write_ground_truth: cannot open " + path);
  out << json{{"dataset_id", scene.spec.dataset_id},
              {"slice_extent", scene.spec.photosphere_width / scene.spec.cardinal_count},
              {"detections", std::move(dets)}}
             .dump(2)
      << "\n";
}

void write_track_csv(const SyntheticScene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("write_track_csv: cannot open " + path);
  out << "capture_id,timestamp,latitude,longitude,altitude\n";
  char line[256];
  for (const auto& c : scene.track) {
    std::snprintf(line, sizeof(line), "%s,%s,%.12f,%.12f,%.3f\n", c.capture_id.c_str(),
                  c.timestamp.c_str(), c.position.latitude, c.position.longitude,
                  c.position.altitude.value_or(0.0));
    out << line;
  }
}

namespace {

json spec_to_json(const SceneSpec& s) {
  json segs = json::array();
  for (const auto& seg : s.segments) {
    segs.push_back({{"motion_bearing", seg.motion_bearing},
                    {"turn_deg_per_step", seg.turn_deg_per_step},
                    {"steps", seg.steps}});
  }
  json objs = json::array();
  for (const auto& [cls, p] : s.objects) {
    objs.push_back({{"class", cls.label()}, {"easting", p.easting}, {"northing", p.northing}});
  }
  return json{{"dataset_id", s.dataset_id},
              {"seed", s.seed},
              {"start", {{"easting", s.start.easting}, {"northing", s.start.northing}}},
              {"step_ft", s.step_ft},
              {"segments", segs},
              {"objects", objs},
              {"random_stop_signs", s.random_stop_signs},
              {"random_fire_hydrants", s.random_fire_hydrants},
              {"random_offset_ft", s.random_offset_ft},
              {"noise",
               {{"bearing_sd_deg", s.noise.bearing_sd_deg},
                {"position_sd_ft", s.noise.position_sd_ft}}},
              {"max_range_ft", s.max_range_ft},
              {"bbox_width_px", s.bbox_width_px},
              {"photosphere_width", s.photosphere_width},
              {"cardinal_count", s.cardinal_count}};
}

}  // namespace

void write_scene_json(const SyntheticScene& scene, const std::string& path) {
  json doc = spec_to_json(scene.spec);
  json objs = json::array();
  for (const auto& [cls, p] : scene.objects) {
    objs.push_back({{"class", cls.label()}, {"easting", p.easting}, {"northing", p.northing}});
  }
  doc["planted_objects"] = std::move(objs);
  std::ofstream out(path);
  if (!out) throw IOFailure("write_scene_json: cannot open " + path);
  out << doc.dump(2) << "\n";
}

SceneSpec read_scene_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("read_scene_spec: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("scene spec: bad JSON: ") + e.what());
  }
  SceneSpec s;
  s.dataset_id = doc.value("dataset_id", s.dataset_id);
  s.seed = doc.value("seed", s.seed);
  if (doc.contains("start")) {
    s.start = {doc["start"].value("easting", s.start.easting),
               doc["start"].value("northing", s.start.northing)};
  }
  s.step_ft = doc.value("step_ft", s.step_ft);
  for (const auto& seg : doc.value("segments", json::array())) {
    s.segments.push_back({seg.value("motion_bearing", 0.0), seg.value("turn_deg_per_step", 0.0),
                          seg.value("steps", 0)});
  }
  for (const auto& o : doc.value("objects", json::array())) {
    s.objects.emplace_back(ObjectClass::from_label(o.at("class").get<std::string>()),
                           ProjectedPoint{o.at("easting").get<double>(),
                                          o.at("northing").get<double>()});
  }
  s.random_stop_signs = doc.value("random_stop_signs", 0);
  s.random_fire_hydrants = doc.value("random_fire_hydrants", 0);
  s.random_offset_ft = doc.value("random_offset_ft", s.random_offset_ft);
  if (doc.contains("noise")) {
    s.noise.bearing_sd_deg = doc["noise"].value("bearing_sd_deg", 0.0);
    s.noise.position_sd_ft = doc["noise"].value("position_sd_ft", 0.0);
  }
  s.max_range_ft = doc.value("max_range_ft", s.max_range_ft);
  s.bbox_width_px = doc.value("bbox_width_px", s.bbox_width_px);
  s.photosphere_width = doc.value("photosphere_width", s.photosphere_width);
  s.cardinal_count = doc.value("cardinal_count", s.cardinal_count);
  return s;
}

}  // namespace panoloc
