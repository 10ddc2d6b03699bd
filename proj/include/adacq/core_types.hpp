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
#ifndef ADACQ_CORE_TYPES_HPP_
#define ADACQ_CORE_TYPES_HPP_

#include <cstdint>
#include <string>

#include "adacq/errors.hpp"
#include "adacq/palette.hpp"
#include "adacq/raster.hpp"

namespace adacq {

using FrameId = std::uint64_t;

// One time step of a camera stream: RGB image plus its semantic and instance
// rasters. Immutable once built.
class Frame {
 public:
  Frame(FrameId id, double timestamp, Image rgb, SemanticMask semantic, InstanceMask instance);

  FrameId id() const { return id_; }
  double timestamp() const { return timestamp_; }
  const Image& rgb() const { return rgb_; }
  const SemanticMask& semantic() const { return semantic_; }
  const InstanceMask& instance() const { return instance_; }
  int width() const { return rgb_.width(); }
  int height() const { return rgb_.height(); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  FrameId id_;
  double timestamp_;
  Image rgb_;
  SemanticMask semantic_;
  InstanceMask instance_;
};

// Half-open pixel rectangle [x_min, x_max) x [y_min, y_max).
struct PixelBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  std::int64_t area() const { return static_cast<std::int64_t>(width()) * height(); }
  bool is_valid() const { return x_min < x_max && y_min < y_max; }
  bool fits(int image_width, int image_height) const {
    return is_valid() && x_min >= 0 && y_min >= 0 && x_max <= image_width && y_max <= image_height;
  }

  friend bool operator==(const PixelBox&, const PixelBox&) = default;
  friend auto operator<=>(const PixelBox&, const PixelBox&) = default;
};

std::string to_string(const PixelBox& box);

// Box center and size normalized by image width/height.
struct YoloGeometry {
  double cx = 0;
  double cy = 0;
  double w = 0;
  double h = 0;
};

struct YoloLabel {
  int class_id = 0;
  YoloGeometry box;
};

// Slack allowed on the normalized box edges.
inline constexpr double kYoloEdgeTolerance = 1e-6;

// Throws RangeError unless 0 < w,h <= 1, 0 <= cx,cy <= 1 and the box edges
// stay inside [0, 1] up to kYoloEdgeTolerance.
void validate_yolo_geometry(const YoloGeometry& g);

YoloGeometry pixel_box_to_yolo(const PixelBox& box, int width, int height);

// Inverse of pixel_box_to_yolo; edges are rounded to the nearest pixel, so
// integer boxes survive the round trip exactly.
PixelBox yolo_to_pixel_box(const YoloGeometry& g, int width, int height);

SemanticMask decode_semantic(const Image& rgb, const Palette& palette = Palette::standard());
Image encode_semantic(const SemanticMask& mask, const Palette& palette = Palette::standard());

// Instance rasters carry the class id in R and the instance id as G*256+B.
InstanceMask decode_instance(const Image& rgb);
Image encode_instance(const InstanceMask& mask);
Image encode_instance(const InstanceMask& mask, const SemanticMask& classes);

}  // namespace adacq

#endif  // ADACQ_CORE_TYPES_HPP_
