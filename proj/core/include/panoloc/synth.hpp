#ifndef PANOLOC_SYNTH_HPP
#define PANOLOC_SYNTH_HPP

#include <string>
#include <vector>

#include "panoloc/capture.hpp"
#include "panoloc/detector.hpp"

namespace panoloc {

/// Straight or curved drive segment: `steps` captures, the motion direction
/// starting at `motion_bearing` and turning `turn_deg_per_step` each step.
struct SceneSegment {
  double motion_bearing = 0.0;
  double turn_deg_per_step = 0.0;
  int steps = 0;
};

struct SceneNoise {
  double bearing_sd_deg = 0.0;  // applied to object directions pre-quantization
  double position_sd_ft = 0.0;  // applied to capture fixes
};

/// Recipe for a synthetic scene. Objects are either given explicitly or
/// planted at random alongside the track (`random_*` counts).
struct SceneSpec {
  std::string dataset_id = "synth";
  std::uint64_t seed = 0;
  ProjectedPoint start{6040000.0, 2244000.0};
  double step_ft = 10.0;
  std::vector<SceneSegment> segments;
  std::vector<std::pair<ObjectClass, ProjectedPoint>> objects;
  int random_stop_signs = 0;
  int random_fire_hydrants = 0;
  double random_offset_ft = 25.0;  // lateral offset band for random objects
  SceneNoise noise;
  double max_range_ft = 70.0;
  double bbox_width_px = 60.0;
  int photosphere_width = 8000;
  int cardinal_count = 8;
};

struct SyntheticScene {
  SceneSpec spec;
  std::vector<PhotoCapture> track;
  std::vector<std::pair<ObjectClass, ProjectedPoint>> objects;
};

/// Deterministic scene from spec.seed. Headings follow the consecutive-fix
/// correction, so a due-north track carries heading 180.
SyntheticScene generate(const SceneSpec& spec);

/// Analytically exact detections for one capture: every planted object in
/// the forward hemisphere and within range, inverted through the
/// pixel-bearing mapping into a bbox in the proper cardinal slice.
std::vector<Detection> ground_truth_detect(const SyntheticScene& scene,
                                           const PhotoCapture& capture);

/// Serialize the scene for the mock detector and the ingestion stage:
/// ground-truth detections JSON, a track CSV, and a scene summary JSON.
void write_ground_truth(const SyntheticScene& scene, const std::string& path);
void write_track_csv(const SyntheticScene& scene, const std::string& path);
void write_scene_json(const SyntheticScene& scene, const std::string& path);
SceneSpec read_scene_spec(const std::string& path);

}  // namespace panoloc

#endif
