#include "panoloc/raster.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "panoloc/errors.hpp"

namespace panoloc {

namespace {

// OpenCV codecs speak BGR; the raster type is RGB.
cv::Mat to_bgr(const Raster& r) {
  cv::Mat bgr(r.height, r.width, CV_8UC3);
  for (int row = 0; row < r.height; ++row) {
    const std::uint8_t* src = r.pixel(row, 0);
    std::uint8_t* dst = bgr.ptr(row);
    for (int col = 0; col < r.width; ++col, src += 3, dst += 3) {
      dst[0] = src[2];
      dst[1] = src[1];
      dst[2] = src[0];
    }
  }
  return bgr;
}

}  // namespace

Raster read_raster(const std::string& path) {
  cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw IOFailure("read_raster: cannot decode " + path);
  }
  Raster r(bgr.cols, bgr.rows);
  for (int row = 0; row < bgr.rows; ++row) {
    const std::uint8_t* src = bgr.ptr(row);
    std::uint8_t* dst = r.pixel(row, 0);
    for (int col = 0; col < bgr.cols; ++col, src += 3, dst += 3) {
      dst[0] = src[2];
      dst[1] = src[1];
      dst[2] = src[0];
    }
  }
  return r;
}

void write_raster(const std::string& path, const Raster& r) {
  if (!cv::imwrite(path, to_bgr(r))) {
    throw IOFailure("write_raster: cannot write " + path);
  }
}

std::vector<std::uint8_t> encode_png(const Raster& r) {
  std::vector<std::uint8_t> buf;
  if (!cv::imencode(".png", to_bgr(r), buf)) {
    throw IOFailure("encode_png: encoding failed");
  }
  return buf;
}

}  // namespace panoloc
