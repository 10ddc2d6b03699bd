/* Copyright 2026 The adacq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <random>

#include <doctest.h>

#include "adacq/core_types.hpp"
#include "adacq/errors.hpp"
#include "adacq/palette.hpp"
#include "test_util.hpp"

using namespace adacq;

namespace {

void check_geometry(const YoloGeometry& g, double cx, double cy, double w, double h) {
  CHECK(g.cx == doctest::Approx(cx).epsilon(1e-12));
  CHECK(g.cy == doctest::Approx(cy).epsilon(1e-12));
  CHECK(g.w == doctest::Approx(w).epsilon(1e-12));
  CHECK(g.h == doctest::Approx(h).epsilon(1e-12));
}

}  // namespace

TEST_CASE("frame rejects mismatched rasters and negative timestamps") {
  CHECK_THROWS_AS(Frame(0, 0.0, Image(4, 4), SemanticMask(4, 3), InstanceMask(4, 4)),
                  DimensionError);
  CHECK_THROWS_AS(Frame(0, 0.0, Image(4, 4), SemanticMask(4, 4), InstanceMask(5, 4)),
                  DimensionError);
  CHECK_THROWS_AS(Frame(0, -1.0, Image(4, 4), SemanticMask(4, 4), InstanceMask(4, 4)), RangeError);
  const Frame f(3, 0.3, Image(4, 2), SemanticMask(4, 2), InstanceMask(4, 2));
  CHECK(f.width() == 4);
  CHECK(f.height() == 2);
  CHECK(f.id() == 3);
}

TEST_CASE("image validates its buffer") {
  CHECK_THROWS(Image(0, 3));
  CHECK_THROWS(Image(2, 2, std::vector<std::uint8_t>(11)));
  Image img(3, 2);
  img.set(2, 1, {1, 2, 3});
  CHECK(img.at(2, 1) == Rgb{1, 2, 3});
  CHECK(img.pixels()[(1 * 3 + 2) * 3 + 2] == 3);
}

TEST_CASE("pixel box to yolo") {
  check_geometry(pixel_box_to_yolo({10, 30, 20, 50}, 100, 100), 0.15, 0.40, 0.10, 0.20);
  check_geometry(pixel_box_to_yolo({0, 0, 100, 100}, 100, 100), 0.5, 0.5, 1.0, 1.0);
  check_geometry(pixel_box_to_yolo({0, 0, 1, 1}, 100, 100), 0.005, 0.005, 0.01, 0.01);
  CHECK_THROWS_AS(pixel_box_to_yolo({0, 0, 101, 10}, 100, 100), RangeError);
  CHECK_THROWS_AS(pixel_box_to_yolo({5, 5, 5, 10}, 100, 100), RangeError);
}

TEST_CASE("yolo to pixel box") {
  CHECK(yolo_to_pixel_box({0.15, 0.40, 0.10, 0.20}, 100, 100) == PixelBox{10, 30, 20, 50});
  CHECK(yolo_to_pixel_box({0.5, 0.5, 1.0, 1.0}, 640, 640) == PixelBox{0, 0, 640, 640});
  CHECK_THROWS_AS(yolo_to_pixel_box({0.5, 0.5, 0.001, 0.5}, 100, 100), RangeError);
  CHECK_THROWS_AS(yolo_to_pixel_box({1.5, 0.5, 0.1, 0.1}, 100, 100), RangeError);
}

TEST_CASE("yolo geometry validation") {
  CHECK_NOTHROW(validate_yolo_geometry({0.5, 0.5, 1.0, 1.0}));
  CHECK_NOTHROW(validate_yolo_geometry({0.05, 0.5, 0.1 + 1e-7, 0.2}));
  CHECK_THROWS_AS(validate_yolo_geometry({0.05, 0.5, 0.2, 0.2}), RangeError);
  CHECK_THROWS_AS(validate_yolo_geometry({0.5, 0.5, 0.0, 0.2}), RangeError);
  CHECK_THROWS_AS(validate_yolo_geometry({0.5, -0.1, 0.1, 0.1}), RangeError);
}

TEST_CASE("pixel box round trip over random boxes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 1000);
    const int h = 1 + static_cast<int>(rng() % 1000);
    const int x0 = static_cast<int>(rng() % w), y0 = static_cast<int>(rng() % h);
    const int x1 = x0 + 1 + static_cast<int>(rng() % (w - x0));
    const int y1 = y0 + 1 + static_cast<int>(rng() % (h - y0));
    const PixelBox box{x0, y0, x1, y1};
    REQUIRE(yolo_to_pixel_box(pixel_box_to_yolo(box, w, h), w, h) == box);
  }
}

TEST_CASE("decode semantic") {
  const auto& pal = Palette::standard();
  SUBCASE("single class") {
    const Image img(6, 4, pal.color_of(kVehicle));
    const auto m = decode_semantic(img);
    CHECK((m.class_ids == kVehicle).all());
  }
  SUBCASE("two regions") {
    Image img(6, 4, pal.color_of(kRoad));
    for (int y = 0; y < 4; ++y) {
      for (int x = 3; x < 6; ++x) img.set(x, y, pal.color_of(kTrafficLight));
    }
    const auto m = decode_semantic(img);
    CHECK((m.class_ids.leftCols(3) == kRoad).all());
    CHECK((m.class_ids.rightCols(3) == kTrafficLight).all());
    CHECK(encode_semantic(m) == img);
  }
  SUBCASE("off-palette pixel names its position") {
    Image img(6, 4, pal.color_of(kRoad));
    img.set(4, 2, {1, 2, 3});
    try {
      decode_semantic(img);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("(4,2)") != std::string::npos);
    }
  }
}

TEST_CASE("decode instance") {
  Image img(3, 1);
  CHECK((decode_instance(img).instance_ids == 0).all());
  img.set(1, 0, {10, 0, 7});
  img.set(2, 0, {10, 1, 0});
  const auto m = decode_instance(img);
  CHECK(m(0, 0) == 0);
  CHECK(m(1, 0) == 7);
  CHECK(m(2, 0) == 256);
}

TEST_CASE("instance encoding round trip carries the class in red") {
  InstanceMask inst(5, 5);
  SemanticMask sem(5, 5);
  std::mt19937 rng(9);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      inst(x, y) = static_cast<InstanceId>(rng() % 70000);
      sem(x, y) = static_cast<ClassId>(rng() % 4);
    }
  }
  const auto img = encode_instance(inst, sem);
  CHECK(decode_instance(img) == inst);
  CHECK(img.at(2, 3).r == sem(2, 3));
  CHECK(decode_instance(encode_instance(inst)) == inst);
}

TEST_CASE("palette rejects duplicates") {
  CHECK_THROWS_AS(Palette({{0, "a", {0, 0, 0}, false}, {0, "b", {1, 1, 1}, false}}), ConfigError);
  CHECK_THROWS_AS(Palette({{0, "a", {0, 0, 0}, false}, {1, "b", {0, 0, 0}, false}}), ConfigError);
  const auto& pal = Palette::standard();
  CHECK(pal.detectable_classes() == std::vector<ClassId>{kVehicle, kTrafficLight});
  CHECK(pal.class_of(pal.color_of(kRoad)) == kRoad);
  CHECK_FALSE(pal.class_of({1, 2, 3}).has_value());
  CHECK_THROWS_AS(pal.color_of(200), ConfigError);
}
