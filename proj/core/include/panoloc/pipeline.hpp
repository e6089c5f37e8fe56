#ifndef PANOLOC_PIPELINE_HPP
#define PANOLOC_PIPELINE_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "panoloc/capture.hpp"
#include "panoloc/cluster.hpp"
#include "panoloc/detector.hpp"

namespace panoloc {

/// Names of the CSV columns carrying each field; vendor exports differ.
/// An empty heading name means headings are derived from consecutive fixes.
struct ColumnMap {
  std::string capture_id = "capture_id";
  std::string timestamp = "timestamp";  // optional column
  std::string latitude = "latitude";
  std::string longitude = "longitude";
  std::string altitude = "altitude";    // optional column
  std::string heading;                  // optional column
};

enum class SignConvention { signed_lon, west_positive };

struct DatasetConfig {
  std::string id;
  std::string area;  // dataset-level area label for the accuracy report
  std::string track_csv;
  std::string photosphere_dir;  // empty: flat placeholder rasters
  std::string ground_truth;     // mock-detector ground truth file
  SignConvention sign_convention = SignConvention::signed_lon;
  ColumnMap columns;
  char delimiter = ',';
};

struct DetectorConfig {
  std::string backend = "mock";  // "mock" or "http"
  HttpDetectorConfig http;
  std::string api_key_env = "PANOLOC_API_KEY";
  double min_confidence = 0.5;
  bool all_cardinals = false;  // default: only cardinal 1 is analyzed
};

struct PipelineConfig {
  std::vector<DatasetConfig> datasets;
  std::string output_dir = "datasets";
  DetectorConfig detector;
  ClusterParams cluster;
  ImagingConfig imaging;
  SensorLayout sensor;
  int nominal_photosphere_width = 8000;
  int jobs = 1;
};

PipelineConfig load_config(const std::string& path);

/// Parse a GNSS track CSV into captures: positions projected, rows ordered
/// by timestamp, headings from the heading column or from consecutive fixes
/// (the first capture inherits the second's). Unparseable rows are skipped
/// with a note on stderr.
std::vector<PhotoCapture> ingest_track(const std::string& csv_path, const std::string& dataset_id,
                                       const ColumnMap& columns, SignConvention sign_convention,
                                       char delimiter = ',');

/// RFC 7946 feature: point geometry plus the estimate's statistics.
struct FeatureRecord {
  GeoPoint geometry;
  ObjectEstimate estimate;
  std::string dataset_id;
  std::string area;
  std::string best_directional_code;  // D-code of the highest-confidence member
  int cluster_id = 0;
};

struct DatasetSummary {
  std::string dataset_id;
  std::string area;
  int photosphere_count = 0;
  int cardinal_count = 0;  // 8 x photospheres when fully processed
  int cardinals_analyzed = 0;
  int slices_skipped = 0;  // detector failures, logged and skipped
  double miles_travelled = 0.0;
  std::map<std::string, int> detections_by_class;
  std::map<std::string, int> objects_by_class;
  // conservation audit: detections = clustered + noise + discarded
  int detections_total = 0;
  int clustered_members = 0;
  int noise_observations = 0;
  int discarded_observations = 0;
};

struct AccuracyRow {
  std::string area;
  std::string object_class;
  int n = 0;
  double sigma_lat_mean = 0, sigma_lat_sd = 0, sigma_lat_max = 0;
  double sigma_lon_mean = 0, sigma_lon_sd = 0, sigma_lon_max = 0;
};

struct RunResult {
  std::vector<FeatureRecord> features;
  DatasetSummary summary;
  std::vector<AccuracyRow> accuracy;
  std::vector<PhotoCapture> captures;
  std::vector<BearingObservation> observations;
};

/// Geoprocessing stage on its own: per-class clustering plus within-cluster
/// combinatorial averaging over an observation set.
struct LocateResult {
  std::vector<FeatureRecord> features;
  std::vector<std::pair<std::string, ObjectEstimate>> area_estimates;
  std::map<std::string, int> objects_by_class;
  int clustered_members = 0;
  int noise_observations = 0;
  int discarded_observations = 0;
};
LocateResult locate_objects(const std::vector<BearingObservation>& observations,
                            const std::string& dataset_id, const std::string& area,
                            const ClusterParams& params);

/// Stages 1-3 for one dataset: crop, slice, detect, triangulate, cluster,
/// estimate. Detector errors on individual slices are logged and skipped;
/// summary.slices_skipped reports how many.
RunResult run_dataset(const DatasetConfig& ds, const PipelineConfig& cfg, Detector& detector);

/// Per (area, class) aggregation of estimate sigmas; an "All" row per class
/// is appended when more than one area is present.
std::vector<AccuracyRow> emit_accuracy_report(
    const std::vector<std::pair<std::string, ObjectEstimate>>& area_estimates);

/// One JSON sidecar per cardinal image, `<image_id>_C<i>_<Dcode>.json`:
/// capture id, slice center bearing, D-code, detections. Idempotent.
void write_metadata_sidecar(const PhotoCapture& capture, const CardinalSlice& slice,
                            const std::vector<Detection>& detections, const std::string& dir);

void write_feature_collection(const std::vector<FeatureRecord>& features,
                              const std::string& path);
void write_summary_csv(const DatasetSummary& s, const std::string& path);
void write_summary_text(const DatasetSummary& s, std::ostream& out);
void write_accuracy_csv(const std::vector<AccuracyRow>& rows, const std::string& path);
/// Aligned text table; displayed values scaled x 10^-4.
void write_accuracy_text(const std::vector<AccuracyRow>& rows, std::ostream& out);

std::unique_ptr<Detector> make_detector(const DetectorConfig& cfg, const DatasetConfig& ds);

// stage hand-off files (JSON)
void write_captures(const std::vector<PhotoCapture>& captures, const std::string& path);
std::vector<PhotoCapture> read_captures(const std::string& path);
void write_observations(const std::vector<BearingObservation>& obs, const std::string& path);
std::vector<BearingObservation> read_observations(const std::string& path);

}  // namespace panoloc

#endif
