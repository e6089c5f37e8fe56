#ifndef PANOLOC_DETECTOR_HPP
#define PANOLOC_DETECTOR_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "panoloc/imaging.hpp"

namespace panoloc {

/// Detected object category. Classes outside the two the pipeline tracks
/// explicitly are carried through as labeled `other`.
struct ObjectClass {
  enum class Kind { stop_sign, fire_hydrant, other };
  Kind kind = Kind::other;
  std::string other_label;

  static ObjectClass stop_sign() { return {Kind::stop_sign, {}}; }
  static ObjectClass fire_hydrant() { return {Kind::fire_hydrant, {}}; }
  static ObjectClass other(std::string label) { return {Kind::other, std::move(label)}; }
  static ObjectClass from_label(const std::string& label);

  std::string label() const;
  bool operator==(const ObjectClass& rhs) const {
    return kind == rhs.kind && (kind != Kind::other || other_label == rhs.other_label);
  }
  bool operator<(const ObjectClass& rhs) const { return label() < rhs.label(); }
};

/// Axis-aligned bounding box in slice pixel coordinates.
struct BBox {
  double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  double center_x() const { return (x_min + x_max) / 2.0; }
};

/// One detector hit inside one cardinal sub-image.
struct Detection {
  std::string capture_ref;
  int cardinal_index = 0;  // 1..8
  ObjectClass object_class;
  BBox bbox;
  double confidence = 0.0;
};

struct DetectorResponse {
  std::vector<Detection> detections;
  double latency_ms = 0.0;
  std::string raw_payload;  // retained for audit
};

/// Object-detection boundary. Implementations must return detections sorted
/// by descending confidence and already filtered to >= min_confidence.
class Detector {
public:
  virtual ~Detector() = default;
  virtual DetectorResponse detect(const CardinalSlice& slice, double min_confidence) = 0;
};

/// Generic HTTP vision-service adapter: POST image bytes, JSON reply of
/// [{class, bbox: [x0, y0, x1, y1], score}]. Retries BackendUnavailable and
/// RateLimited with exponential backoff; caps concurrent in-flight requests.
struct HttpDetectorConfig {
  std::string host;           // e.g. "127.0.0.1"
  int port = 80;
  std::string path = "/detect";
  std::string api_key;        // sent as X-Api-Key when non-empty
  int max_attempts = 3;
  double backoff_base_s = 1.0;
  int max_in_flight = 8;
};
std::unique_ptr<Detector> make_http_detector(const HttpDetectorConfig& cfg);

/// Deterministic offline detector: looks detections up in a ground-truth
/// file produced by the synthetic-scene generator. Identical slice inputs
/// always yield identical responses.
std::unique_ptr<Detector> make_mock_detector(const std::string& ground_truth_path);

/// Object direction theta_s for a detection: the line of sight of the bbox
/// center column mapped through the parent photosphere. The second overload
/// takes the nominal geometry directly, for detections whose bbox
/// coordinates live in a coordinate space other than the slice raster's.
CompassBearing bbox_to_bearing(const Detection& d, const CardinalSlice& slice,
                               const CompassBearing& heading, int photosphere_width = 8000);
CompassBearing bbox_to_bearing(const Detection& d, const CompassBearing& heading,
                               int photosphere_width, int cardinal_count);

}  // namespace panoloc

#endif
