#ifndef PANOLOC_CAPTURE_HPP
#define PANOLOC_CAPTURE_HPP

#include <string>

#include "panoloc/geodesy.hpp"

namespace panoloc {

/// One GNSS-stamped photosphere capture.
struct PhotoCapture {
  std::string capture_id;
  std::string dataset_id;
  std::string timestamp;  // ISO 8601 UTC
  GeoPoint position;
  ProjectedPoint projected;
  CompassBearing heading;  // theta_0, corrected
  int sequence_index = 0;
};

}  // namespace panoloc

#endif
