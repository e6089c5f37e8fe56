#ifndef PANOLOC_RASTER_HPP
#define PANOLOC_RASTER_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace panoloc {

/// Row-major interleaved RGB raster.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3 bytes

  Raster() = default;
  Raster(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t* pixel(int row, int col) {
    return data.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  const std::uint8_t* pixel(int row, int col) const {
    return data.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  bool empty() const { return data.empty(); }
};

/// JPEG/PNG codecs (OpenCV imgcodecs behind the scenes).
Raster read_raster(const std::string& path);
void write_raster(const std::string& path, const Raster& r);
std::vector<std::uint8_t> encode_png(const Raster& r);

}  // namespace panoloc

#endif
