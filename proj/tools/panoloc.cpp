// Command-line front end: each production stage is independently runnable
// (ingest, slice, detect, locate, report), plus synthetic-scene generation
// and the end-to-end run-all.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "panoloc/pipeline.hpp"
#include "panoloc/raster.hpp"
#include "panoloc/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace panoloc;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> dataset_filter;
  int jobs = 0;
  double min_confidence = -1.0;
  double eps = -1.0;
  int min_pts = -1;
  bool all_cardinals = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
  auto* cfg = cmd->add_option("--config", o.config_path, "pipeline config JSON");
  if (needs_config) cfg->required();
  cmd->add_option("--dataset", o.dataset_filter, "restrict to these dataset ids");
  cmd->add_option("--jobs", o.jobs, "worker pool width");
  cmd->add_option("--min-confidence", o.min_confidence, "detection confidence floor");
  cmd->add_option("--eps", o.eps, "DBSCAN radius, feet");
  cmd->add_option("--min-pts", o.min_pts, "DBSCAN min points");
  cmd->add_flag("--all-cardinals", o.all_cardinals, "send all 8 cardinals to the detector");
  cmd->add_flag("-v,--verbose", o.verbose, "chatty stderr");
}

PipelineConfig load_with_overrides(const CommonOpts& o) {
  PipelineConfig cfg = load_config(o.config_path);
  if (o.jobs > 0) cfg.jobs = o.jobs;
  if (o.min_confidence >= 0.0) cfg.detector.min_confidence = o.min_confidence;
  if (o.eps > 0.0) cfg.cluster.eps = o.eps;
  if (o.min_pts > 0) cfg.cluster.min_pts = o.min_pts;
  if (o.all_cardinals) cfg.detector.all_cardinals = true;
  return cfg;
}

std::vector<DatasetConfig> select_datasets(const PipelineConfig& cfg, const CommonOpts& o) {
  if (o.dataset_filter.empty()) return cfg.datasets;
  std::vector<DatasetConfig> out;
  for (const auto& ds : cfg.datasets) {
    for (const auto& id : o.dataset_filter) {
      if (ds.id == id) out.push_back(ds);
    }
  }
  if (out.empty()) {
    throw InvalidSpec("no configured dataset matches the --dataset filter");
  }
  return out;
}

fs::path output_dir_for(const PipelineConfig& cfg, const DatasetConfig& ds) {
  fs::path dir = fs::path(cfg.output_dir) / ds.id / "output";
  fs::create_directories(dir);
  return dir;
}

json summary_to_json(const DatasetSummary& s) {
  return json{{"dataset_id", s.dataset_id},
              {"area", s.area},
              {"photosphere_count", s.photosphere_count},
              {"cardinal_count", s.cardinal_count},
              {"cardinals_analyzed", s.cardinals_analyzed},
              {"slices_skipped", s.slices_skipped},
              {"miles_travelled", s.miles_travelled},
              {"detections_by_class", s.detections_by_class},
              {"objects_by_class", s.objects_by_class},
              {"detections_total", s.detections_total},
              {"clustered_members", s.clustered_members},
              {"noise_observations", s.noise_observations},
              {"discarded_observations", s.discarded_observations}};
}

DatasetSummary summary_from_json(const json& j) {
  DatasetSummary s;
  s.dataset_id = j.value("dataset_id", std::string{});
  s.area = j.value("area", std::string{});
  s.photosphere_count = j.value("photosphere_count", 0);
  s.cardinal_count = j.value("cardinal_count", 0);
  s.cardinals_analyzed = j.value("cardinals_analyzed", 0);
  s.slices_skipped = j.value("slices_skipped", 0);
  s.miles_travelled = j.value("miles_travelled", 0.0);
  s.detections_by_class = j.value("detections_by_class", std::map<std::string, int>{});
  s.objects_by_class = j.value("objects_by_class", std::map<std::string, int>{});
  s.detections_total = j.value("detections_total", 0);
  s.clustered_members = j.value("clustered_members", 0);
  s.noise_observations = j.value("noise_observations", 0);
  s.discarded_observations = j.value("discarded_observations", 0);
  return s;
}

void write_summary_json(const DatasetSummary& s, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IOFailure("cannot open " + path.string());
  out << summary_to_json(s).dump(2) << "\n";
}

DatasetSummary read_summary_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IOFailure("cannot open " + path.string() + " (run `panoloc detect` first)");
  json doc;
  in >> doc;
  return summary_from_json(doc);
}

void write_all_outputs(const RunResult& r, const fs::path& dir) {
  write_captures(r.captures, (dir / "captures.json").string());
  write_observations(r.observations, (dir / "observations.json").string());
  write_summary_json(r.summary, dir / "summary.json");
  write_feature_collection(r.features, (dir / "features.geojson").string());
  write_summary_csv(r.summary, (dir / "summary.csv").string());
  write_accuracy_csv(r.accuracy, (dir / "accuracy.csv").string());
  {
    std::ofstream out(dir / "summary.txt");
    write_summary_text(r.summary, out);
  }
  {
    std::ofstream out(dir / "accuracy.txt");
    write_accuracy_text(r.accuracy, out);
  }
}

int cmd_ingest(const CommonOpts& o) {
  PipelineConfig cfg = load_with_overrides(o);
  for (const auto& ds : select_datasets(cfg, o)) {
    auto captures = ingest_track(ds.track_csv, ds.id, ds.columns, ds.sign_convention, ds.delimiter);
    fs::path dir = output_dir_for(cfg, ds);
    write_captures(captures, (dir / "captures.json").string());
    std::cerr << "ingest: " << ds.id << ": " << captures.size() << " captures\n";
  }
  return 0;
}

int cmd_slice(const CommonOpts& o) {
  PipelineConfig cfg = load_with_overrides(o);
  for (const auto& ds : select_datasets(cfg, o)) {
    fs::path dir = output_dir_for(cfg, ds);
    fs::path captures_path = dir / "captures.json";
    std::vector<PhotoCapture> captures =
        fs::exists(captures_path)
            ? read_captures(captures_path.string())
            : ingest_track(ds.track_csv, ds.id, ds.columns, ds.sign_convention, ds.delimiter);
    fs::path cardinal_dir = fs::path(cfg.output_dir) / ds.id / "cardinals";
    fs::path sidecar_dir = fs::path(cfg.output_dir) / ds.id / "sidecars";
    fs::create_directories(cardinal_dir);
    fs::create_directories(sidecar_dir);
    int written = 0;
    for (const auto& cap : captures) {
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
      if (!have_image) band = Raster(16 * cfg.imaging.cardinal_count, 16, 128);
      for (const auto& slice : slice_cardinals(band, cap.capture_id, cap.heading, cfg.imaging)) {
        write_metadata_sidecar(cap, slice, {}, sidecar_dir.string());
        if (have_image) {
          write_raster((cardinal_dir / (slice_file_stem(cap.capture_id, slice.cardinal_index,
                                                        slice.directional_class) +
                                        ".jpg"))
                           .string(),
                       slice.raster);
        }
        ++written;
      }
    }
    std::cerr << "slice: " << ds.id << ": " << written << " cardinal slices\n";
  }
  return 0;
}

int run_stages(const CommonOpts& o, bool detect_only) {
  PipelineConfig cfg = load_with_overrides(o);
  int skipped = 0;
  for (const auto& ds : select_datasets(cfg, o)) {
    auto detector = make_detector(cfg.detector, ds);
    RunResult r = run_dataset(ds, cfg, *detector);
    fs::path dir = output_dir_for(cfg, ds);
    if (detect_only) {
      write_captures(r.captures, (dir / "captures.json").string());
      write_observations(r.observations, (dir / "observations.json").string());
      write_summary_json(r.summary, dir / "summary.json");
      std::cerr << "detect: " << ds.id << ": " << r.observations.size() << " observations\n";
    } else {
      write_all_outputs(r, dir);
      std::cerr << "run-all: " << ds.id << ": " << r.features.size() << " objects, "
                << r.summary.slices_skipped << " slices skipped\n";
    }
    skipped += r.summary.slices_skipped;
  }
  return skipped > 0 ? 2 : 0;
}

int cmd_locate(const CommonOpts& o) {
  PipelineConfig cfg = load_with_overrides(o);
  for (const auto& ds : select_datasets(cfg, o)) {
    fs::path dir = output_dir_for(cfg, ds);
    auto obs = read_observations((dir / "observations.json").string());
    LocateResult loc = locate_objects(obs, ds.id, ds.area, cfg.cluster);
    write_feature_collection(loc.features, (dir / "features.geojson").string());
    DatasetSummary s = read_summary_json(dir / "summary.json");
    s.objects_by_class = loc.objects_by_class;
    s.clustered_members = loc.clustered_members;
    s.noise_observations = loc.noise_observations;
    s.discarded_observations = loc.discarded_observations;
    write_summary_json(s, dir / "summary.json");
    std::cerr << "locate: " << ds.id << ": " << loc.features.size() << " objects\n";
  }
  return 0;
}

int cmd_report(const CommonOpts& o) {
  PipelineConfig cfg = load_with_overrides(o);
  for (const auto& ds : select_datasets(cfg, o)) {
    fs::path dir = output_dir_for(cfg, ds);
    DatasetSummary s = read_summary_json(dir / "summary.json");
    auto obs = read_observations((dir / "observations.json").string());
    LocateResult loc = locate_objects(obs, ds.id, ds.area, cfg.cluster);
    write_summary_csv(s, (dir / "summary.csv").string());
    write_accuracy_csv(emit_accuracy_report(loc.area_estimates), (dir / "accuracy.csv").string());
    {
      std::ofstream out(dir / "summary.txt");
      write_summary_text(s, out);
    }
    {
      std::ofstream out(dir / "accuracy.txt");
      write_accuracy_text(emit_accuracy_report(loc.area_estimates), out);
    }
    write_summary_text(s, std::cout);
    write_accuracy_text(emit_accuracy_report(loc.area_estimates), std::cout);
  }
  return 0;
}

struct SynthOpts {
  std::string scene_path;
  std::string out_dir = "synth_data";
  std::string dataset_id = "synth";
  std::uint64_t seed = 0;
  int objects = 0;
  int hydrants = 0;
  int steps = 200;
  double noise_bearing = 0.0;
  double noise_pos = 0.0;
};

int cmd_synth(const SynthOpts& so) {
  SceneSpec spec;
  if (!so.scene_path.empty()) {
    spec = read_scene_spec(so.scene_path);
  } else {
    spec.dataset_id = so.dataset_id;
    spec.seed = so.seed;
    spec.segments = {{0.0, 0.0, so.steps}};
    spec.random_stop_signs = so.objects;
    spec.random_fire_hydrants = so.hydrants;
    spec.noise.bearing_sd_deg = so.noise_bearing;
    spec.noise.position_sd_ft = so.noise_pos;
  }
  SyntheticScene scene = generate(spec);

  fs::path root = fs::path(so.out_dir);
  fs::create_directories(root);
  write_track_csv(scene, (root / "track.csv").string());
  write_ground_truth(scene, (root / "ground_truth.json").string());
  write_scene_json(scene, (root / "scene.json").string());

  // ready-to-run pipeline config for this scene
  json cfgdoc{{"output_dir", (root / "datasets").string()},
              {"detector", {{"backend", "mock"}, {"min_confidence", 0.5}}},
              {"datasets",
               {{{"id", scene.spec.dataset_id},
                 {"area", "Synthetic"},
                 {"track_csv", (root / "track.csv").string()},
                 {"ground_truth", (root / "ground_truth.json").string()}}}}};
  std::ofstream out(root / "config.json");
  if (!out) throw IOFailure("cannot open " + (root / "config.json").string());
  out << cfgdoc.dump(2) << "\n";
  std::cerr << "synth: " << scene.track.size() << " captures, " << scene.objects.size()
            << " objects -> " << root.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"street-side object localization from photosphere detections"};
  app.require_subcommand(1);

  CommonOpts ingest_o, slice_o, detect_o, locate_o, report_o, runall_o;
  SynthOpts synth_o;

  add_common(app.add_subcommand("ingest", "parse GNSS track CSVs into captures"), ingest_o);
  add_common(app.add_subcommand("slice", "crop and slice photospheres, write sidecars"), slice_o);
  add_common(app.add_subcommand("detect", "run the detector, emit bearing observations"),
             detect_o);
  add_common(app.add_subcommand("locate", "triangulate and cluster observations"), locate_o);
  add_common(app.add_subcommand("report", "emit summary and accuracy tables"), report_o);
  add_common(app.add_subcommand("run-all", "all stages end to end"), runall_o);

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset fixture");
  synth_cmd->add_option("--scene", synth_o.scene_path, "scene spec JSON (overrides flags)");
  synth_cmd->add_option("--out", synth_o.out_dir, "output directory");
  synth_cmd->add_option("--dataset-id", synth_o.dataset_id, "dataset id");
  synth_cmd->add_option("--seed", synth_o.seed, "RNG seed");
  synth_cmd->add_option("--objects", synth_o.objects, "random stop signs to plant");
  synth_cmd->add_option("--hydrants", synth_o.hydrants, "random fire hydrants to plant");
  synth_cmd->add_option("--steps", synth_o.steps, "track length in captures");
  synth_cmd->add_option("--noise-bearing", synth_o.noise_bearing, "bearing noise sd, degrees");
  synth_cmd->add_option("--noise-pos", synth_o.noise_pos, "position noise sd, feet");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("ingest")) return cmd_ingest(ingest_o);
    if (app.got_subcommand("slice")) return cmd_slice(slice_o);
    if (app.got_subcommand("detect")) return run_stages(detect_o, true);
    if (app.got_subcommand("locate")) return cmd_locate(locate_o);
    if (app.got_subcommand("report")) return cmd_report(report_o);
    if (app.got_subcommand("run-all")) return run_stages(runall_o, false);
    if (app.got_subcommand("synth")) return cmd_synth(synth_o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
