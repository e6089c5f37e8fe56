#ifndef PANOLOC_IMAGING_HPP
#define PANOLOC_IMAGING_HPP

#include <array>
#include <string>
#include <vector>

#include "panoloc/geodesy.hpp"
#include "panoloc/raster.hpp"

namespace panoloc {

/// One equirectangular photosphere capture (expected 8000x4000).
struct Photosphere {
  std::string image_id;
  Raster raster;
  std::string capture_ref;
};

/// Geometry of the crop/slice stage. Defaults match the 8000x4000 source
/// format: 0.045 deg/pixel, functional band rows [1500, 2500), 8 cardinals
/// of 1000 columns each.
struct ImagingConfig {
  int functional_top = 1500;
  int functional_bottom = 2500;
  int cardinal_count = 8;
  bool strict = false;  // assert the 8000-wide production defaults

  int band_height() const { return functional_bottom - functional_top; }
  double degrees_per_pixel(int width) const { return 360.0 / width; }
};

/// One of the 32 named 11.25-degree azimuth buckets (D1..D32).
struct DirectionalClass {
  int id;            // 1..32
  const char* code;  // "N", "NbE", ...
  const char* description;
  double low;        // half-open [low, high); D1 wraps through 0
  double high;
};

/// One of 8 cardinal sub-images cut from the functional band.
struct CardinalSlice {
  std::string parent_id;
  int cardinal_index = 0;  // 1..8
  Raster raster;
  CompassBearing center_bearing;
  DirectionalClass directional_class{};
};

/// Rows [functional_top, functional_bottom) of all columns, no resampling.
Raster crop_functional(const Photosphere& p, const ImagingConfig& cfg);

/// Cut the functional band into cardinal_count equal-width slices; slice 1
/// is centered at heading + 22.5 and each following slice 45 further on.
std::vector<CardinalSlice> slice_cardinals(const Raster& band, const std::string& parent_id,
                                           const CompassBearing& heading,
                                           const ImagingConfig& cfg);

/// Line-of-sight direction of a pixel column: (heading + col * deg/px) mod 360.
CompassBearing pixel_bearing(const CompassBearing& heading, int global_column, int width);
CompassBearing pixel_bearing(const CompassBearing& heading, double global_column, int width);

/// Coarse C1..C8 bucket (45-degree bins from true north).
struct NominalCardinal {
  int id;  // 1..8
  const char* code;
  const char* description;
};
NominalCardinal classify_nominal(const CompassBearing& bearing);

/// D1..D32 bucket; D1 covers [354.375, 360) plus [0, 5.625).
DirectionalClass classify_directional(const CompassBearing& bearing);

/// All 32 directional classes in table order.
const std::array<DirectionalClass, 32>& directional_table();

/// Artifact-file stem for one cardinal slice: `<image_id>_C<i>_<Dcode>`.
std::string slice_file_stem(const std::string& image_id, int cardinal_index,
                            const DirectionalClass& dclass);

}  // namespace panoloc

#endif
