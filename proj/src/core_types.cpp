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
#include "adacq/core_types.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace adacq {

Frame::Frame(FrameId id, double timestamp, Image rgb, SemanticMask semantic, InstanceMask instance)
    : id_(id),
      timestamp_(timestamp),
      rgb_(std::move(rgb)),
      semantic_(std::move(semantic)),
      instance_(std::move(instance)) {
  if (!(timestamp_ >= 0)) {
    throw RangeError(fmt::format("frame {}: timestamp must be non-negative", id_));
  }
  if (semantic_.width() != rgb_.width() || semantic_.height() != rgb_.height() ||
      instance_.width() != rgb_.width() || instance_.height() != rgb_.height()) {
    throw DimensionError(fmt::format("frame {}: rasters differ in size", id_));
  }
}

std::string to_string(const PixelBox& box) {
  return fmt::format("[{},{})x[{},{})", box.x_min, box.x_max, box.y_min, box.y_max);
}

void validate_yolo_geometry(const YoloGeometry& g) {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(g.cx) || !in_unit(g.cy)) {
    throw RangeError(fmt::format("box center ({}, {}) outside [0,1]", g.cx, g.cy));
  }
  if (!(g.w > 0.0 && g.w <= 1.0) || !(g.h > 0.0 && g.h <= 1.0)) {
    throw RangeError(fmt::format("box size ({}, {}) outside (0,1]", g.w, g.h));
  }
  const double t = kYoloEdgeTolerance;
  if (g.cx - g.w / 2 < -t || g.cx + g.w / 2 > 1 + t || g.cy - g.h / 2 < -t ||
      g.cy + g.h / 2 > 1 + t) {
    throw RangeError("box edges extend outside the image");
  }
}

YoloGeometry pixel_box_to_yolo(const PixelBox& box, int width, int height) {
  if (width < 1 || height < 1) throw DimensionError("image size must be positive");
  if (!box.fits(width, height)) {
    throw RangeError(
        fmt::format("box {} does not fit a {}x{} image", to_string(box), width, height));
  }
  const double w = width;
  const double h = height;
  return {(box.x_min + box.x_max) / (2 * w), (box.y_min + box.y_max) / (2 * h), box.width() / w,
          box.height() / h};
}

PixelBox yolo_to_pixel_box(const YoloGeometry& g, int width, int height) {
  if (width < 1 || height < 1) throw DimensionError("image size must be positive");
  validate_yolo_geometry(g);
  const auto edge = [](double center, double size, int extent, double sign) {
    const double v = std::round((center + sign * size / 2) * extent);
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(extent)));
  };
  PixelBox box{edge(g.cx, g.w, width, -1), edge(g.cy, g.h, height, -1), edge(g.cx, g.w, width, +1),
               edge(g.cy, g.h, height, +1)};
  if (!box.is_valid()) {
    throw RangeError(
        fmt::format("box ({}, {}, {}, {}) is smaller than one pixel", g.cx, g.cy, g.w, g.h));
  }
  return box;
}

SemanticMask decode_semantic(const Image& rgb, const Palette& palette) {
  SemanticMask mask(rgb.width(), rgb.height());
  // Scenes use a handful of colors; remember the last hit.
  Rgb last_color = rgb.at(0, 0);
  auto last_class = palette.class_of(last_color);
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const Rgb c = rgb.at(x, y);
      if (c != last_color) {
        last_color = c;
        last_class = palette.class_of(c);
      }
      if (!last_class) {
        throw ParseError(
            fmt::format("semantic image: color ({},{},{}) at pixel ({},{}) is not "
                        "in the palette",
                        c.r, c.g, c.b, x, y));
      }
      mask(x, y) = *last_class;
    }
  }
  return mask;
}

Image encode_semantic(const SemanticMask& mask, const Palette& palette) {
  Image img(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) img.set(x, y, palette.color_of(mask(x, y)));
  }
  return img;
}

InstanceMask decode_instance(const Image& rgb) {
  InstanceMask mask(rgb.width(), rgb.height());
  for (int y = 0; y < rgb.height(); ++y) {
    for (int x = 0; x < rgb.width(); ++x) {
      const Rgb c = rgb.at(x, y);
      mask(x, y) = static_cast<InstanceId>(c.g * 256 + c.b);
    }
  }
  return mask;
}

namespace {

Image encode_instance_impl(const InstanceMask& mask, const SemanticMask* classes) {
  Image img(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const InstanceId id = mask(x, y);
      const std::uint8_t cls = classes ? (*classes)(x, y) : 0;
      img.set(x, y,
              {cls, static_cast<std::uint8_t>(id >> 8), static_cast<std::uint8_t>(id & 0xff)});
    }
  }
  return img;
}

}  // namespace

Image encode_instance(const InstanceMask& mask) { return encode_instance_impl(mask, nullptr); }

Image encode_instance(const InstanceMask& mask, const SemanticMask& classes) {
  if (classes.width() != mask.width() || classes.height() != mask.height()) {
    throw DimensionError("encode_instance: semantic mask differs in size");
  }
  return encode_instance_impl(mask, &classes);
}

}  // namespace adacq
