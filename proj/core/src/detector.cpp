#include "panoloc/detector.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "panoloc/errors.hpp"

namespace panoloc {

using nlohmann::json;

ObjectClass ObjectClass::from_label(const std::string& label) {
  if (label == "stop_sign") return stop_sign();
  if (label == "fire_hydrant") return fire_hydrant();
  return other(label);
}

std::string ObjectClass::label() const {
  switch (kind) {
    case Kind::stop_sign: return "stop_sign";
    case Kind::fire_hydrant: return "fire_hydrant";
    case Kind::other: return other_label;
  }
  return {};
}

namespace {

void validate_bbox(const Detection& d, int slice_width, int slice_height) {
  const BBox& b = d.bbox;
  if (!(b.x_min >= 0 && b.x_min < b.x_max && b.x_max <= slice_width && b.y_min >= 0 &&
        b.y_min < b.y_max && b.y_max <= slice_height)) {
    throw MalformedResponse("detection bbox outside slice bounds", "");
  }
}

std::vector<Detection> parse_detections(const json& arr, const std::string& capture_ref,
                                        int cardinal_index) {
  std::vector<Detection> out;
  for (const auto& item : arr) {
    Detection d;
    d.capture_ref = capture_ref;
    d.cardinal_index = cardinal_index;
    d.object_class = ObjectClass::from_label(item.at("class").get<std::string>());
    const auto& bb = item.at("bbox");
    d.bbox = {bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
              bb.at(3).get<double>()};
    d.confidence = item.contains("score") ? item.at("score").get<double>()
                                          : item.at("confidence").get<double>();
    out.push_back(std::move(d));
  }
  return out;
}

void filter_and_sort(std::vector<Detection>& dets, double min_confidence) {
  std::erase_if(dets, [&](const Detection& d) { return d.confidence < min_confidence; });
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    return a.confidence > b.confidence;
  });
}

class MockDetector final : public Detector {
public:
  explicit MockDetector(const std::string& ground_truth_path) {
    std::ifstream in(ground_truth_path);
    if (!in) {
      throw IOFailure("mock detector: cannot open ground truth " + ground_truth_path);
    }
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw MalformedResponse(std::string("mock detector: bad ground truth: ") + e.what(), "");
    }
    slice_extent_ = doc.value("slice_extent", 1000);
    for (const auto& [capture_id, arr] : doc.at("detections").items()) {
      for (const auto& item : arr) {
        int cardinal = item.at("cardinal_index").get<int>();
        Detection d;
        d.capture_ref = capture_id;
        d.cardinal_index = cardinal;
        d.object_class = ObjectClass::from_label(item.at("class").get<std::string>());
        const auto& bb = item.at("bbox");
        d.bbox = {bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
                  bb.at(3).get<double>()};
        d.confidence = item.at("confidence").get<double>();
        by_key_[{capture_id, cardinal}].push_back(std::move(d));
      }
    }
  }

  DetectorResponse detect(const CardinalSlice& slice, double min_confidence) override {
    if (slice.raster.empty()) {
      throw MalformedResponse("mock detector: empty slice raster", "");
    }
    DetectorResponse resp;
    auto it = by_key_.find({slice.parent_id, slice.cardinal_index});
    if (it != by_key_.end()) resp.detections = it->second;
    filter_and_sort(resp.detections, min_confidence);
    // ground-truth bboxes live in the nominal slice coordinate space, which
    // may differ from the placeholder raster's dimensions
    for (const auto& d : resp.detections) {
      validate_bbox(d, slice_extent_, slice_extent_);
    }
    return resp;
  }

private:
  std::map<std::pair<std::string, int>, std::vector<Detection>> by_key_;
  int slice_extent_ = 1000;
};

class HttpDetector final : public Detector {
public:
  explicit HttpDetector(HttpDetectorConfig cfg)
      : cfg_(std::move(cfg)),
        in_flight_(std::max(1, cfg_.max_in_flight)) {}

  DetectorResponse detect(const CardinalSlice& slice, double min_confidence) override {
    if (slice.raster.empty()) {
      throw MalformedResponse("http detector: empty slice raster", "");
    }
    std::vector<std::uint8_t> png = encode_png(slice.raster);
    std::string body(png.begin(), png.end());

    for (int attempt = 1;; ++attempt) {
      try {
        return attempt_once(slice, body, min_confidence);
      } catch (const BackendUnavailable&) {
        if (attempt >= cfg_.max_attempts) throw;
      } catch (const RateLimited&) {
        if (attempt >= cfg_.max_attempts) throw;
      }
      auto delay = std::chrono::duration<double>(cfg_.backoff_base_s * (1 << (attempt - 1)));
      std::this_thread::sleep_for(delay);
    }
  }

private:
  DetectorResponse attempt_once(const CardinalSlice& slice, const std::string& body,
                                double min_confidence) {
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{in_flight_};

    httplib::Client client(cfg_.host, cfg_.port);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("X-Api-Key", cfg_.api_key);

    auto t0 = std::chrono::steady_clock::now();
    auto res = client.Post(cfg_.path, headers, body, "image/png");
    auto t1 = std::chrono::steady_clock::now();

    if (!res) {
      throw BackendUnavailable("http detector: no response from " + cfg_.host + ":" +
                               std::to_string(cfg_.port));
    }
    if (res->status == 429) {
      throw RateLimited("http detector: rate limited");
    }
    if (res->status >= 500) {
      throw BackendUnavailable("http detector: server status " + std::to_string(res->status));
    }
    if (res->status != 200) {
      throw MalformedResponse("http detector: unexpected status " + std::to_string(res->status),
                              res->body);
    }

    DetectorResponse resp;
    resp.raw_payload = res->body;
    resp.latency_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    try {
      json doc = json::parse(res->body);
      resp.detections = parse_detections(doc, slice.parent_id, slice.cardinal_index);
    } catch (const json::exception& e) {
      throw MalformedResponse(std::string("http detector: bad JSON: ") + e.what(), res->body);
    }
    filter_and_sort(resp.detections, min_confidence);
    for (const auto& d : resp.detections) {
      validate_bbox(d, slice.raster.width, slice.raster.height);
    }
    return resp;
  }

  HttpDetectorConfig cfg_;
  std::counting_semaphore<> in_flight_;
};

}  // namespace

std::unique_ptr<Detector> make_http_detector(const HttpDetectorConfig& cfg) {
  return std::make_unique<HttpDetector>(cfg);
}

std::unique_ptr<Detector> make_mock_detector(const std::string& ground_truth_path) {
  return std::make_unique<MockDetector>(ground_truth_path);
}

CompassBearing bbox_to_bearing(const Detection& d, const CardinalSlice& slice,
                               const CompassBearing& heading, int photosphere_width) {
  if (d.capture_ref != slice.parent_id || d.cardinal_index != slice.cardinal_index) {
    throw ColumnOutOfRange("bbox_to_bearing: detection does not belong to slice");
  }
  double global_column =
      static_cast<double>(slice.raster.width) * (d.cardinal_index - 1) + d.bbox.center_x();
  return pixel_bearing(heading, global_column, photosphere_width);
}

CompassBearing bbox_to_bearing(const Detection& d, const CompassBearing& heading,
                               int photosphere_width, int cardinal_count) {
  double slice_width = static_cast<double>(photosphere_width) / cardinal_count;
  double global_column = slice_width * (d.cardinal_index - 1) + d.bbox.center_x();
  return pixel_bearing(heading, global_column, photosphere_width);
}

}  // namespace panoloc
