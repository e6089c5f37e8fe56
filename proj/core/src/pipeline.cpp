#include "panoloc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "panoloc/raster.hpp"

namespace panoloc {

using nlohmann::json;
namespace fs = std::filesystem;

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("load_config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("config: bad JSON: ") + e.what());
  }

  PipelineConfig cfg;
  cfg.output_dir = doc.value("output_dir", cfg.output_dir);
  cfg.jobs = doc.value("jobs", cfg.jobs);
  cfg.nominal_photosphere_width =
      doc.value("nominal_photosphere_width", cfg.nominal_photosphere_width);

  if (doc.contains("detector")) {
    const json& d = doc["detector"];
    cfg.detector.backend = d.value("backend", cfg.detector.backend);
    cfg.detector.min_confidence = d.value("min_confidence", cfg.detector.min_confidence);
    cfg.detector.all_cardinals = d.value("all_cardinals", cfg.detector.all_cardinals);
    cfg.detector.api_key_env = d.value("api_key_env", cfg.detector.api_key_env);
    cfg.detector.http.host = d.value("host", cfg.detector.http.host);
    cfg.detector.http.port = d.value("port", cfg.detector.http.port);
    cfg.detector.http.path = d.value("path", cfg.detector.http.path);
    cfg.detector.http.max_attempts = d.value("max_attempts", cfg.detector.http.max_attempts);
    cfg.detector.http.backoff_base_s = d.value("backoff_base_s", cfg.detector.http.backoff_base_s);
    cfg.detector.http.max_in_flight = d.value("max_in_flight", cfg.detector.http.max_in_flight);
  }
  if (doc.contains("cluster")) {
    const json& c = doc["cluster"];
    cfg.cluster.eps = c.value("eps", cfg.cluster.eps);
    cfg.cluster.min_pts = c.value("min_pts", cfg.cluster.min_pts);
    cfg.cluster.min_separation = c.value("min_separation", cfg.cluster.min_separation);
    cfg.cluster.max_detection_range = c.value("max_detection_range", cfg.cluster.max_detection_range);
    cfg.cluster.nominal_range = c.value("nominal_range", cfg.cluster.nominal_range);
  }
  if (doc.contains("imaging")) {
    const json& i = doc["imaging"];
    cfg.imaging.functional_top = i.value("functional_top", cfg.imaging.functional_top);
    cfg.imaging.functional_bottom = i.value("functional_bottom", cfg.imaging.functional_bottom);
    cfg.imaging.cardinal_count = i.value("cardinal_count", cfg.imaging.cardinal_count);
    cfg.imaging.strict = i.value("strict", cfg.imaging.strict);
  }
  if (doc.contains("sensor")) {
    const json& s = doc["sensor"];
    cfg.sensor.gps_to_camera_offset = s.value("gps_to_camera_offset", cfg.sensor.gps_to_camera_offset);
    cfg.sensor.apply_lever_arm = s.value("apply_lever_arm", cfg.sensor.apply_lever_arm);
  }
  for (const auto& d : doc.value("datasets", json::array())) {
    DatasetConfig ds;
    ds.id = d.at("id").get<std::string>();
    ds.area = d.value("area", std::string{});
    ds.track_csv = d.value("track_csv", std::string{});
    ds.photosphere_dir = d.value("photosphere_dir", std::string{});
    ds.ground_truth = d.value("ground_truth", std::string{});
    ds.sign_convention = d.value("sign_convention", std::string{"signed"}) == "west_positive"
                             ? SignConvention::west_positive
                             : SignConvention::signed_lon;
    if (d.contains("delimiter")) {
      std::string delim = d["delimiter"].get<std::string>();
      if (!delim.empty()) ds.delimiter = delim[0];
    }
    if (d.contains("columns")) {
      const json& c = d["columns"];
      ds.columns.capture_id = c.value("capture_id", ds.columns.capture_id);
      ds.columns.timestamp = c.value("timestamp", ds.columns.timestamp);
      ds.columns.latitude = c.value("latitude", ds.columns.latitude);
      ds.columns.longitude = c.value("longitude", ds.columns.longitude);
      ds.columns.altitude = c.value("altitude", ds.columns.altitude);
      ds.columns.heading = c.value("heading", ds.columns.heading);
    }
    cfg.datasets.push_back(std::move(ds));
  }
  return cfg;
}

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

}  // namespace

std::vector<PhotoCapture> ingest_track(const std::string& csv_path, const std::string& dataset_id,
                                       const ColumnMap& columns, SignConvention sign_convention,
                                       char delimiter) {
  std::ifstream in(csv_path);
  if (!in) throw IOFailure("ingest_track: cannot open " + csv_path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyTrack("ingest_track: empty file " + csv_path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split(line, delimiter);

  const int id_col = find_column(header, columns.capture_id);
  const int lat_col = find_column(header, columns.latitude);
  const int lon_col = find_column(header, columns.longitude);
  if (id_col < 0) throw MissingColumn("ingest_track: missing column " + columns.capture_id);
  if (lat_col < 0) throw MissingColumn("ingest_track: missing column " + columns.latitude);
  if (lon_col < 0) throw MissingColumn("ingest_track: missing column " + columns.longitude);
  const int ts_col = columns.timestamp.empty() ? -1 : find_column(header, columns.timestamp);
  const int alt_col = columns.altitude.empty() ? -1 : find_column(header, columns.altitude);
  const int hdg_col = columns.heading.empty() ? -1 : find_column(header, columns.heading);

  std::vector<PhotoCapture> captures;
  std::vector<double> explicit_headings;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f = split(line, delimiter);
    try {
      PhotoCapture c;
      c.capture_id = f.at(id_col);
      c.dataset_id = dataset_id;
      if (ts_col >= 0) c.timestamp = f.at(ts_col);
      c.position.latitude = std::stod(f.at(lat_col));
      c.position.longitude = std::stod(f.at(lon_col));
      if (sign_convention == SignConvention::west_positive) {
        c.position.longitude = -c.position.longitude;
      }
      if (alt_col >= 0 && static_cast<std::size_t>(alt_col) < f.size() && !f[alt_col].empty()) {
        c.position.altitude = std::stod(f[alt_col]);
      }
      c.projected = project(c.position);
      double hdg = std::numeric_limits<double>::quiet_NaN();
      if (hdg_col >= 0 && static_cast<std::size_t>(hdg_col) < f.size() && !f[hdg_col].empty()) {
        hdg = std::stod(f[hdg_col]);
      }
      explicit_headings.push_back(hdg);
      captures.push_back(std::move(c));
    } catch (const std::exception& e) {
      std::cerr << "ingest_track: skipping " << csv_path << ":" << line_no << " (" << e.what()
                << ")\n";
    }
  }
  if (captures.size() < 2) {
    throw EmptyTrack("ingest_track: " + csv_path + " has " + std::to_string(captures.size()) +
                     " usable rows; need at least 2 to derive headings");
  }

  if (ts_col >= 0) {
    std::vector<std::size_t> order(captures.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return captures[a].timestamp < captures[b].timestamp;
    });
    std::vector<PhotoCapture> sorted;
    std::vector<double> sorted_hdg;
    sorted.reserve(captures.size());
    for (std::size_t i : order) {
      sorted.push_back(std::move(captures[i]));
      sorted_hdg.push_back(explicit_headings[i]);
    }
    captures = std::move(sorted);
    explicit_headings = std::move(sorted_hdg);
  }

  // explicit heading column takes precedence; the consecutive-fix
  // correction is the fallback
  CompassBearing prev;
  for (std::size_t i = 0; i < captures.size(); ++i) {
    captures[i].sequence_index = static_cast<int>(i);
    if (!std::isnan(explicit_headings[i])) {
      captures[i].heading = CompassBearing(explicit_headings[i]);
    } else if (i > 0) {
      try {
        captures[i].heading =
            correct_heading(captures[i].projected.easting - captures[i - 1].projected.easting,
                            captures[i].projected.northing - captures[i - 1].projected.northing);
      } catch (const ZeroDisplacement&) {
        captures[i].heading = prev;
      }
    }
    prev = captures[i].heading;
  }
  if (std::isnan(explicit_headings[0])) {
    captures[0].heading = captures[1].heading;
  }
  return captures;
}

namespace {

json detection_json(const Detection& d) {
  return json{{"capture_ref", d.capture_ref},
              {"cardinal_index", d.cardinal_index},
              {"class", d.object_class.label()},
              {"bbox", {d.bbox.x_min, d.bbox.y_min, d.bbox.x_max, d.bbox.y_max}},
              {"confidence", d.confidence}};
}

struct CaptureWork {
  std::vector<Detection> detections;
  std::vector<BearingObservation> observations;
  int cardinals_analyzed = 0;
  int slices_skipped = 0;
};

}  // namespace

void write_metadata_sidecar(const PhotoCapture& capture, const CardinalSlice& slice,
                            const std::vector<Detection>& detections, const std::string& dir) {
  json dets = json::array();
  for (const auto& d : detections) dets.push_back(detection_json(d));
  json doc{{"capture_id", capture.capture_id},
           {"dataset_id", capture.dataset_id},
           {"cardinal_index", slice.cardinal_index},
           {"center_bearing", slice.center_bearing.degrees()},
           {"directional_class", slice.directional_class.code},
           {"detections", std::move(dets)}};
  std::string path =
      dir + "/" + slice_file_stem(capture.capture_id, slice.cardinal_index, slice.directional_class) +
      ".json";
  std::ofstream out(path);
  if (!out) throw IOFailure("write_metadata_sidecar: cannot open " + path);
  out << doc.dump(2) << "\n";
}

RunResult run_dataset(const DatasetConfig& ds, const PipelineConfig& cfg, Detector& detector) {
  RunResult result;
  std::vector<PhotoCapture> captures =
      ingest_track(ds.track_csv, ds.id, ds.columns, ds.sign_convention, ds.delimiter);

  DatasetSummary& sum = result.summary;
  sum.dataset_id = ds.id;
  sum.area = ds.area;
  sum.photosphere_count = static_cast<int>(captures.size());
  sum.cardinal_count = sum.photosphere_count * cfg.imaging.cardinal_count;

  double feet = 0.0;
  for (std::size_t i = 0; i + 1 < captures.size(); ++i) {
    double step = ray_distance(captures[i].projected, captures[i + 1].projected);
    if (step > 50.0) {
      std::cerr << "run_dataset: " << ds.id << " captures " << captures[i].capture_id << " -> "
                << captures[i + 1].capture_id << " are " << step << " ft apart\n";
    }
    feet += step;
  }
  sum.miles_travelled = feet / kFeetPerMile;

  const fs::path root = fs::path(cfg.output_dir) / ds.id;
  const fs::path cardinal_dir = root / "cardinals";
  const fs::path sidecar_dir = root / "sidecars";
  const fs::path output_dir = root / "output";
  fs::create_directories(cardinal_dir);
  fs::create_directories(sidecar_dir);
  fs::create_directories(output_dir);

  const int nominal_width = cfg.nominal_photosphere_width;
  const int cardinal_count = cfg.imaging.cardinal_count;

  // stage 1+2 fan-out: one unit of work per capture
  std::vector<CaptureWork> work(captures.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < captures.size(); i = next.fetch_add(1)) {
      const PhotoCapture& cap = captures[i];
      CaptureWork& w = work[i];

      Raster band;
      bool have_image = false;
      if (!ds.photosphere_dir.empty()) {
        for (const char* ext : {".jpg", ".jpeg", ".png"}) {
          fs::path img = fs::path(ds.photosphere_dir) / (cap.capture_id + ext);
          if (fs::exists(img)) {
            Photosphere p{cap.capture_id, read_raster(img.string()), cap.capture_id};
            band = crop_functional(p, cfg.imaging);
            have_image = true;
            break;
          }
        }
      }
      if (!have_image) {
        band = Raster(16 * cardinal_count, 16, 128);  // flat placeholder
      }

      std::vector<CardinalSlice> slices =
          slice_cardinals(band, cap.capture_id, cap.heading, cfg.imaging);
      for (const CardinalSlice& slice : slices) {
        const bool analyze = cfg.detector.all_cardinals || slice.cardinal_index == 1;
        std::vector<Detection> dets;
        if (analyze) {
          ++w.cardinals_analyzed;
          try {
            DetectorResponse resp = detector.detect(slice, cfg.detector.min_confidence);
            dets = std::move(resp.detections);
          } catch (const Error& e) {
            ++w.slices_skipped;
            std::cerr << "run_dataset: skipping " << cap.capture_id << " cardinal "
                      << slice.cardinal_index << ": " << e.what() << "\n";
          }
        }
        write_metadata_sidecar(cap, slice, dets, sidecar_dir.string());
        if (have_image) {
          write_raster(
              (cardinal_dir / (slice_file_stem(cap.capture_id, slice.cardinal_index,
                                               slice.directional_class) +
                               ".jpg"))
                  .string(),
              slice.raster);
        }
        for (const Detection& d : dets) {
          BearingObservation obs;
          obs.origin = camera_origin(cap.projected, cap.heading, cfg.sensor);
          obs.bearing = have_image ? bbox_to_bearing(d, slice, cap.heading, band.width)
                                   : bbox_to_bearing(d, cap.heading, nominal_width, cardinal_count);
          obs.capture_ref = cap.capture_id;
          obs.object_class = d.object_class;
          obs.confidence = d.confidence;
          obs.sequence_index = cap.sequence_index;
          w.observations.push_back(std::move(obs));
          w.detections.push_back(d);
        }
      }
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // deterministic single-threaded reduce
  std::map<std::string, std::vector<BearingObservation>> by_class;
  for (const CaptureWork& w : work) {
    sum.cardinals_analyzed += w.cardinals_analyzed;
    sum.slices_skipped += w.slices_skipped;
    for (const Detection& d : w.detections) {
      ++sum.detections_by_class[d.object_class.label()];
      ++sum.detections_total;
    }
    for (const BearingObservation& o : w.observations) {
      by_class[o.object_class.label()].push_back(o);
    }
  }

  for (const auto& [label, obs] : by_class) {
    result.observations.insert(result.observations.end(), obs.begin(), obs.end());
  }
  LocateResult loc = locate_objects(result.observations, ds.id, ds.area, cfg.cluster);
  result.features = std::move(loc.features);
  sum.objects_by_class = std::move(loc.objects_by_class);
  sum.clustered_members = loc.clustered_members;
  sum.noise_observations = loc.noise_observations;
  sum.discarded_observations = loc.discarded_observations;
  result.accuracy = emit_accuracy_report(loc.area_estimates);
  result.captures = std::move(captures);
  return result;
}

LocateResult locate_objects(const std::vector<BearingObservation>& observations,
                            const std::string& dataset_id, const std::string& area,
                            const ClusterParams& params) {
  std::map<std::string, std::vector<BearingObservation>> by_class;
  for (const auto& o : observations) by_class[o.object_class.label()].push_back(o);

  LocateResult result;
  int feature_id = 0;
  for (auto& [label, obs] : by_class) {
    std::vector<ProjectedPoint> seeds = seed_points(obs, params.nominal_range);
    std::vector<int> labels = dbscan(seeds, params);
    int max_label = -1;
    for (int l : labels) {
      max_label = std::max(max_label, l);
      if (l == -1) ++result.noise_observations;
    }
    for (int c = 0; c <= max_label; ++c) {
      ClusterGroup g;
      g.cluster_id = feature_id;
      g.object_class = obs[0].object_class;
      for (std::size_t i = 0; i < obs.size(); ++i) {
        if (labels[i] == c) g.members.push_back(obs[i]);
      }
      try {
        ObjectEstimate est = estimate_cluster(g, params);
        result.clustered_members += static_cast<int>(g.members.size());
        ++result.objects_by_class[label];

        FeatureRecord rec;
        rec.geometry = *est.mean_position;
        rec.estimate = est;
        rec.dataset_id = dataset_id;
        rec.area = area;
        rec.cluster_id = feature_id;
        const BearingObservation* best = &g.members[0];
        for (const auto& m : g.members) {
          if (m.confidence > best->confidence) best = &m;
        }
        rec.best_directional_code = classify_directional(best->bearing).code;
        result.features.push_back(std::move(rec));
        result.area_estimates.emplace_back(area, std::move(est));
        ++feature_id;
      } catch (const NoValidPairs& e) {
        result.discarded_observations += static_cast<int>(g.members.size());
        std::cerr << "locate_objects: " << e.what() << "\n";
        ++feature_id;
      }
    }
  }
  return result;
}

namespace {

struct Agg {
  std::vector<double> lat, lon;
};

AccuracyRow make_row(const std::string& area, const std::string& cls, const Agg& a) {
  auto stats = [](const std::vector<double>& v, double& mean, double& sd, double& mx) {
    mean = sd = mx = 0.0;
    if (v.empty()) return;
    double sum = 0;
    for (double x : v) {
      sum += x;
      mx = std::max(mx, x);
    }
    mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
      double ss = 0;
      for (double x : v) ss += (x - mean) * (x - mean);
      sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
  };
  AccuracyRow r;
  r.area = area;
  r.object_class = cls;
  r.n = static_cast<int>(a.lat.size());
  stats(a.lat, r.sigma_lat_mean, r.sigma_lat_sd, r.sigma_lat_max);
  stats(a.lon, r.sigma_lon_mean, r.sigma_lon_sd, r.sigma_lon_max);
  return r;
}

}  // namespace

std::vector<AccuracyRow> emit_accuracy_report(
    const std::vector<std::pair<std::string, ObjectEstimate>>& area_estimates) {
  std::map<std::pair<std::string, std::string>, Agg> by_key;
  std::map<std::string, Agg> all_areas;
  std::set<std::string> areas;
  for (const auto& [area, est] : area_estimates) {
    areas.insert(area);
    Agg& a = by_key[{area, est.object_class.label()}];
    a.lat.push_back(est.sigma_lat);
    a.lon.push_back(est.sigma_lon);
    Agg& all = all_areas[est.object_class.label()];
    all.lat.push_back(est.sigma_lat);
    all.lon.push_back(est.sigma_lon);
  }
  std::vector<AccuracyRow> rows;
  for (const auto& [key, agg] : by_key) {
    rows.push_back(make_row(key.first, key.second, agg));
  }
  if (areas.size() > 1) {
    for (const auto& [cls, agg] : all_areas) {
      rows.push_back(make_row("All", cls, agg));
    }
  }
  return rows;
}

void write_feature_collection(const std::vector<FeatureRecord>& features,
                              const std::string& path) {
  json arr = json::array();
  for (const auto& f : features) {
    const ObjectEstimate& e = f.estimate;
    json props{{"object_class", e.object_class.label()},
               {"dataset_id", f.dataset_id},
               {"area", f.area},
               {"cluster_id", f.cluster_id},
               {"sigma_lat", e.sigma_lat},
               {"sigma_lon", e.sigma_lon},
               {"support_detections", e.support_detections},
               {"support_pairs", e.support_pairs},
               {"discarded_pairs", e.discarded_pairs},
               {"mean_object_distance_ft", e.mean_object_distance},
               {"sd_object_distance_ft", e.sd_object_distance},
               {"mean_drive_step_ft", e.mean_drive_step},
               {"sd_drive_step_ft", e.sd_drive_step},
               {"directional_class", f.best_directional_code}};
    arr.push_back(json{{"type", "Feature"},
                       {"geometry",
                        {{"type", "Point"},
                         // RFC 7946: [longitude, latitude]
                         {"coordinates", {f.geometry.longitude, f.geometry.latitude}}}},
                       {"properties", std::move(props)}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", std::move(arr)}};
  std::ofstream out(path);
  if (!out) throw IOFailure("write_feature_collection: cannot open " + path);
  out << doc.dump(2) << "\n";
}

void write_summary_csv(const DatasetSummary& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("write_summary_csv: cannot open " + path);
  out << "key,value\n";
  out << "dataset_id," << s.dataset_id << "\n";
  out << "area," << s.area << "\n";
  out << "photospheres," << s.photosphere_count << "\n";
  out << "cardinals," << s.cardinal_count << "\n";
  out << "cardinals_analyzed," << s.cardinals_analyzed << "\n";
  out << "slices_skipped," << s.slices_skipped << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", s.miles_travelled);
  out << "miles_travelled," << buf << "\n";
  for (const auto& [cls, n] : s.detections_by_class) out << "detections_" << cls << "," << n << "\n";
  for (const auto& [cls, n] : s.objects_by_class) out << "objects_" << cls << "," << n << "\n";
  out << "detections_total," << s.detections_total << "\n";
  out << "clustered_members," << s.clustered_members << "\n";
  out << "noise_observations," << s.noise_observations << "\n";
  out << "discarded_observations," << s.discarded_observations << "\n";
}

void write_summary_text(const DatasetSummary& s, std::ostream& out) {
  char buf[128];
  out << "Dataset " << s.dataset_id << (s.area.empty() ? "" : " (" + s.area + ")") << "\n";
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Photospheres", s.photosphere_count);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Cardinals", s.cardinal_count);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Cardinals analyzed", s.cardinals_analyzed);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10.1f\n", "Distance (mi)", s.miles_travelled);
  out << buf;
  for (const auto& [cls, n] : s.detections_by_class) {
    std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", ("Detections " + cls).c_str(), n);
    out << buf;
    if (s.miles_travelled > 0) {
      std::snprintf(buf, sizeof(buf), "  %-22s %10.2f\n", ("  per mile " + cls).c_str(),
                    n / s.miles_travelled);
      out << buf;
    }
    if (s.cardinals_analyzed > 0) {
      std::snprintf(buf, sizeof(buf), "  %-22s %10.4f\n", ("  per cardinal " + cls).c_str(),
                    static_cast<double>(n) / s.cardinals_analyzed);
      out << buf;
    }
  }
  for (const auto& [cls, n] : s.objects_by_class) {
    std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", ("Objects " + cls).c_str(), n);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Clustered members", s.clustered_members);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Noise observations", s.noise_observations);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10d\n", "Discarded", s.discarded_observations);
  out << buf;
}

void write_accuracy_csv(const std::vector<AccuracyRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("write_accuracy_csv: cannot open " + path);
  out << "area,object,N,sigma_lat_mean,sigma_lat_sd,sigma_lat_max,"
         "sigma_lon_mean,sigma_lon_sd,sigma_lon_max\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.area.c_str(),
                  r.object_class.c_str(), r.n, r.sigma_lat_mean, r.sigma_lat_sd, r.sigma_lat_max,
                  r.sigma_lon_mean, r.sigma_lon_sd, r.sigma_lon_max);
    out << buf;
  }
}

void write_accuracy_text(const std::vector<AccuracyRow>& rows, std::ostream& out) {
  out << "Accuracy Assessment Statistics of Object Location\n";
  out << "                              sigma_lat                 sigma_lon\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-14s %-13s %5s %8s %8s %8s %8s %8s %8s\n", "Area", "Object",
                "N", "mean", "sd", "max", "mean", "sd", "max");
  out << buf;
  const double scale = 1e4;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-14s %-13s %5d %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f\n",
                  r.area.c_str(), r.object_class.c_str(), r.n, r.sigma_lat_mean * scale,
                  r.sigma_lat_sd * scale, r.sigma_lat_max * scale, r.sigma_lon_mean * scale,
                  r.sigma_lon_sd * scale, r.sigma_lon_max * scale);
    out << buf;
  }
  out << "Displayed values scaled x 10^-4\n";
}

std::unique_ptr<Detector> make_detector(const DetectorConfig& cfg, const DatasetConfig& ds) {
  if (cfg.backend == "mock") {
    if (ds.ground_truth.empty()) {
      throw InvalidSpec("detector: mock backend needs a ground_truth path for dataset " + ds.id);
    }
    return make_mock_detector(ds.ground_truth);
  }
  if (cfg.backend == "http") {
    HttpDetectorConfig http = cfg.http;
    if (const char* key = std::getenv(cfg.api_key_env.c_str())) {
      http.api_key = key;
    }
    return make_http_detector(http);
  }
  throw InvalidSpec("detector: unknown backend '" + cfg.backend + "'");
}

void write_captures(const std::vector<PhotoCapture>& captures, const std::string& path) {
  json arr = json::array();
  for (const auto& c : captures) {
    json item{{"capture_id", c.capture_id},
              {"dataset_id", c.dataset_id},
              {"timestamp", c.timestamp},
              {"latitude", c.position.latitude},
              {"longitude", c.position.longitude},
              {"easting", c.projected.easting},
              {"northing", c.projected.northing},
              {"heading", c.heading.degrees()},
              {"sequence_index", c.sequence_index}};
    if (c.position.altitude) item["altitude"] = *c.position.altitude;
    arr.push_back(std::move(item));
  }
  std::ofstream out(path);
  if (!out) throw IOFailure("write_captures: cannot open " + path);
  out << json{{"captures", std::move(arr)}}.dump(2) << "\n";
}

std::vector<PhotoCapture> read_captures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("read_captures: cannot open " + path);
  json doc;
  in >> doc;
  std::vector<PhotoCapture> out;
  for (const auto& item : doc.at("captures")) {
    PhotoCapture c;
    c.capture_id = item.at("capture_id").get<std::string>();
    c.dataset_id = item.value("dataset_id", std::string{});
    c.timestamp = item.value("timestamp", std::string{});
    c.position.latitude = item.at("latitude").get<double>();
    c.position.longitude = item.at("longitude").get<double>();
    if (item.contains("altitude")) c.position.altitude = item["altitude"].get<double>();
    c.projected = {item.at("easting").get<double>(), item.at("northing").get<double>()};
    c.heading = CompassBearing(item.at("heading").get<double>());
    c.sequence_index = item.at("sequence_index").get<int>();
    out.push_back(std::move(c));
  }
  return out;
}

void write_observations(const std::vector<BearingObservation>& obs, const std::string& path) {
  json arr = json::array();
  for (const auto& o : obs) {
    arr.push_back(json{{"easting", o.origin.easting},
                       {"northing", o.origin.northing},
                       {"bearing", o.bearing.degrees()},
                       {"capture_ref", o.capture_ref},
                       {"class", o.object_class.label()},
                       {"confidence", o.confidence},
                       {"sequence_index", o.sequence_index}});
  }
  std::ofstream out(path);
  if (!out) throw IOFailure("write_observations: cannot open " + path);
  out << json{{"observations", std::move(arr)}}.dump(2) << "\n";
}

std::vector<BearingObservation> read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("read_observations: cannot open " + path);
  json doc;
  in >> doc;
  std::vector<BearingObservation> out;
  for (const auto& item : doc.at("observations")) {
    BearingObservation o;
    o.origin = {item.at("easting").get<double>(), item.at("northing").get<double>()};
    o.bearing = CompassBearing(item.at("bearing").get<double>());
    o.capture_ref = item.at("capture_ref").get<std::string>();
    o.object_class = ObjectClass::from_label(item.at("class").get<std::string>());
    o.confidence = item.at("confidence").get<double>();
    o.sequence_index = item.at("sequence_index").get<int>();
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace panoloc
