#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "panoloc/imaging.hpp"

using namespace panoloc;

TEST_CASE("degrees per pixel at production width") {
  ImagingConfig cfg;
  CHECK(cfg.degrees_per_pixel(8000) == 0.045);
  CHECK(cfg.degrees_per_pixel(720) == 0.5);
  CHECK(cfg.band_height() == 1000);
}

TEST_CASE("pixel bearing wraps through north") {
  CompassBearing h(350.0);
  CHECK(pixel_bearing(h, 0, 8000).degrees() == doctest::Approx(350.0));
  CHECK(pixel_bearing(h, 400, 8000).degrees() == doctest::Approx(8.0));
  CHECK(pixel_bearing(h, 4000, 8000).degrees() == doctest::Approx(170.0));
  CHECK_THROWS_AS(pixel_bearing(CompassBearing(0.0), 8000, 8000), ColumnOutOfRange);
  CHECK_THROWS_AS(pixel_bearing(CompassBearing(0.0), -1, 8000), ColumnOutOfRange);
}

TEST_CASE("directional table tiles the circle") {
  const auto& table = directional_table();
  REQUIRE(table.size() == 32);
  CHECK(std::string(table[0].code) == "N");
  CHECK(table[0].low == doctest::Approx(354.375));
  CHECK(table[0].high == doctest::Approx(5.625));
  double span = 0.0;
  for (const auto& d : table) {
    double width = d.high - d.low;
    if (width < 0.0) width += 360.0;
    span += width;
  }
  CHECK(span == doctest::Approx(360.0));
}

TEST_CASE("directional classification boundary sweep") {
  // every bucket edge, approached from both sides
  const auto& table = directional_table();
  for (const auto& d : table) {
    CHECK(classify_directional(CompassBearing(d.low + 1e-9)).id == d.id);
    CHECK(classify_directional(CompassBearing(d.high - 1e-9)).id == d.id);
    CHECK(classify_directional(CompassBearing(d.high + 1e-9)).id != d.id);
  }
  CHECK(classify_directional(CompassBearing(0.0)).id == 1);
  CHECK(classify_directional(CompassBearing(359.9)).id == 1);
  CHECK(classify_directional(CompassBearing(5.6)).id == 1);
  CHECK(classify_directional(CompassBearing(5.7)).id == 2);
}

TEST_CASE("nominal classification 45 degree bins") {
  CHECK(classify_nominal(CompassBearing(0.0)).id == 1);
  CHECK(classify_nominal(CompassBearing(44.999)).id == 1);
  CHECK(classify_nominal(CompassBearing(45.0)).id == 2);
  CHECK(classify_nominal(CompassBearing(315.0)).id == 8);
  CHECK(classify_nominal(CompassBearing(359.999)).id == 8);
}

TEST_CASE("functional crop keeps rows unchanged") {
  Photosphere p;
  p.image_id = "img";
  p.raster = Raster(64, 32);
  for (int r = 0; r < 32; ++r) {
    for (int c = 0; c < 64; ++c) {
      p.raster.pixel(r, c)[0] = static_cast<std::uint8_t>(r);
      p.raster.pixel(r, c)[1] = static_cast<std::uint8_t>(c);
      p.raster.pixel(r, c)[2] = 7;
    }
  }
  ImagingConfig cfg;
  cfg.functional_top = 12;
  cfg.functional_bottom = 20;
  Raster band = crop_functional(p, cfg);
  REQUIRE(band.width == 64);
  REQUIRE(band.height == 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 64; ++c) {
      CHECK(band.pixel(r, c)[0] == r + 12);
      CHECK(band.pixel(r, c)[1] == c);
    }
  }
}

TEST_CASE("strict crop rejects off-format photospheres") {
  ImagingConfig cfg;
  cfg.strict = true;
  Photosphere p;
  p.raster = Raster(64, 32);
  CHECK_THROWS_AS(crop_functional(p, cfg), DimensionMismatch);
}

TEST_CASE("cardinal slices reconstruct the band") {
  std::mt19937_64 rng(3);
  Raster band(80, 10);
  for (auto& b : band.data) b = static_cast<std::uint8_t>(rng());
  ImagingConfig cfg;
  cfg.functional_top = 0;
  cfg.functional_bottom = 10;
  auto slices = slice_cardinals(band, "img", CompassBearing(10.0), cfg);
  REQUIRE(slices.size() == 8);
  for (int i = 0; i < 8; ++i) {
    const auto& s = slices[i];
    CHECK(s.cardinal_index == i + 1);
    CHECK(s.raster.width == 10);
    CHECK(s.raster.height == 10);
    for (int r = 0; r < 10; ++r) {
      for (int c = 0; c < 10; ++c) {
        CHECK(s.raster.pixel(r, c)[1] == band.pixel(r, i * 10 + c)[1]);
      }
    }
  }
}

TEST_CASE("slice centers follow the heading") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> deg(0.0, 360.0);
  Raster band(16, 2);
  ImagingConfig cfg;
  cfg.functional_top = 0;
  cfg.functional_bottom = 2;
  for (int trial = 0; trial < 100; ++trial) {
    double h = deg(rng);
    auto slices = slice_cardinals(band, "img", CompassBearing(h), cfg);
    for (int i = 0; i < 8; ++i) {
      double expected = CompassBearing::normalize(h + 22.5 + 45.0 * i);
      CHECK(slices[i].center_bearing.degrees() == doctest::Approx(expected).epsilon(1e-12));
      CHECK(slices[i].directional_class.id ==
            classify_directional(slices[i].center_bearing).id);
    }
  }
}

TEST_CASE("slice file stem naming") {
  DirectionalClass d = classify_directional(CompassBearing(90.0));
  CHECK(slice_file_stem("0001234", 3, d) == "0001234_C3_E");
}
