#include "panoloc/imaging.hpp"

#include <cstring>

namespace panoloc {

namespace {

const std::array<DirectionalClass, 32> kDirectional = {{
    {1, "N", "North", 354.375, 5.625},
    {2, "NbE", "North by East", 5.625, 16.875},
    {3, "NNE", "North Northeast", 16.875, 28.125},
    {4, "NEbN", "Northeast by North", 28.125, 39.375},
    {5, "NE", "Northeast", 39.375, 50.625},
    {6, "NEbE", "Northeast by East", 50.625, 61.875},
    {7, "ENE", "East Northeast", 61.875, 73.125},
    {8, "EbN", "East by North", 73.125, 84.375},
    {9, "E", "East", 84.375, 95.625},
    {10, "EbS", "East by South", 95.625, 106.875},
    {11, "ESE", "East Southeast", 106.875, 118.125},
    {12, "SEbE", "Southeast by East", 118.125, 129.375},
    {13, "SE", "Southeast", 129.375, 140.625},
    {14, "SEbS", "Southeast by South", 140.625, 151.875},
    {15, "SSE", "South Southeast", 151.875, 163.125},
    {16, "SbE", "South by East", 163.125, 174.375},
    {17, "S", "South", 174.375, 185.625},
    {18, "SbW", "South by West", 185.625, 196.875},
    {19, "SSW", "South Southwest", 196.875, 208.125},
    {20, "SWbS", "Southwest by South", 208.125, 219.375},
    {21, "SW", "Southwest", 219.375, 230.625},
    {22, "SWbW", "Southwest by West", 230.625, 241.875},
    {23, "WSW", "West Southwest", 241.875, 253.125},
    {24, "WbS", "West by South", 253.125, 264.375},
    {25, "W", "West", 264.375, 275.625},
    {26, "WbN", "West by North", 275.625, 286.875},
    {27, "WNW", "West Northwest", 286.875, 298.125},
    {28, "NWbW", "Northwest by West", 298.125, 309.375},
    {29, "NW", "Northwest", 309.375, 320.625},
    {30, "NWbN", "Northwest by North", 320.625, 331.875},
    {31, "NNW", "North Northwest", 331.875, 343.125},
    {32, "NbW", "North by West", 343.125, 354.375},
}};

const std::array<NominalCardinal, 8> kNominal = {{
    {1, "NNE", "North Northeast"},
    {2, "ENE", "East Northeast"},
    {3, "ESE", "East Southeast"},
    {4, "SSE", "South Southeast"},
    {5, "SSW", "South Southwest"},
    {6, "WSW", "West Southwest"},
    {7, "WNW", "West Northwest"},
    {8, "NNW", "North Northwest"},
}};

}  // namespace

const std::array<DirectionalClass, 32>& directional_table() { return kDirectional; }

Raster crop_functional(const Photosphere& p, const ImagingConfig& cfg) {
  if (p.raster.height < cfg.functional_bottom || cfg.functional_top < 0 ||
      cfg.functional_top >= cfg.functional_bottom) {
    throw DimensionMismatch("crop_functional: photosphere " + p.image_id + " is " +
                            std::to_string(p.raster.width) + "x" +
                            std::to_string(p.raster.height) +
                            ", functional band needs rows [" +
                            std::to_string(cfg.functional_top) + ", " +
                            std::to_string(cfg.functional_bottom) + ")");
  }
  if (cfg.strict && (p.raster.width != 8000 || p.raster.height != 4000)) {
    throw DimensionMismatch("crop_functional: strict mode expects 8000x4000, got " +
                            std::to_string(p.raster.width) + "x" +
                            std::to_string(p.raster.height));
  }
  Raster band(p.raster.width, cfg.band_height());
  const std::size_t row_bytes = static_cast<std::size_t>(p.raster.width) * 3;
  for (int row = 0; row < band.height; ++row) {
    std::memcpy(band.pixel(row, 0), p.raster.pixel(cfg.functional_top + row, 0), row_bytes);
  }
  return band;
}

std::vector<CardinalSlice> slice_cardinals(const Raster& band, const std::string& parent_id,
                                           const CompassBearing& heading,
                                           const ImagingConfig& cfg) {
  if (cfg.cardinal_count < 1 || band.width % cfg.cardinal_count != 0) {
    throw DimensionMismatch("slice_cardinals: band width " + std::to_string(band.width) +
                            " not divisible by " + std::to_string(cfg.cardinal_count));
  }
  const int slice_width = band.width / cfg.cardinal_count;
  const double step = 360.0 / cfg.cardinal_count;
  std::vector<CardinalSlice> out;
  out.reserve(cfg.cardinal_count);
  CompassBearing center = heading.add(step / 2.0);
  for (int i = 1; i <= cfg.cardinal_count; ++i) {
    CardinalSlice s;
    s.parent_id = parent_id;
    s.cardinal_index = i;
    s.center_bearing = center;
    s.directional_class = classify_directional(center);
    s.raster = Raster(slice_width, band.height);
    const int col0 = (i - 1) * slice_width;
    const std::size_t slice_bytes = static_cast<std::size_t>(slice_width) * 3;
    for (int row = 0; row < band.height; ++row) {
      std::memcpy(s.raster.pixel(row, 0), band.pixel(row, col0), slice_bytes);
    }
    out.push_back(std::move(s));
    center = center.add(step);
  }
  return out;
}

CompassBearing pixel_bearing(const CompassBearing& heading, double global_column, int width) {
  if (global_column < 0.0 || global_column >= width) {
    throw ColumnOutOfRange("pixel_bearing: column " + std::to_string(global_column) +
                           " outside [0, " + std::to_string(width) + ")");
  }
  return heading.add(global_column * (360.0 / width));
}

CompassBearing pixel_bearing(const CompassBearing& heading, int global_column, int width) {
  return pixel_bearing(heading, static_cast<double>(global_column), width);
}

NominalCardinal classify_nominal(const CompassBearing& bearing) {
  int idx = static_cast<int>(bearing.degrees() / 45.0);
  if (idx > 7) idx = 7;
  return kNominal[idx];
}

DirectionalClass classify_directional(const CompassBearing& bearing) {
  double deg = bearing.degrees();
  if (deg >= kDirectional[0].low || deg < kDirectional[0].high) {
    return kDirectional[0];
  }
  // uniform 11.25-degree bins offset by D1's upper edge
  int idx = static_cast<int>((deg - 5.625) / 11.25) + 1;
  if (idx > 31) idx = 31;
  return kDirectional[idx];
}

std::string slice_file_stem(const std::string& image_id, int cardinal_index,
                            const DirectionalClass& dclass) {
  return image_id + "_C" + std::to_string(cardinal_index) + "_" + dclass.code;
}

}  // namespace panoloc
