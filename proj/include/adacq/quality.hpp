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
#ifndef ADACQ_QUALITY_HPP_
#define ADACQ_QUALITY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "adacq/core_types.hpp"
#include "adacq/uqi.hpp"

namespace adacq {

inline constexpr int kDefaultWindow = 8;
inline constexpr int kDefaultMinArea = 25;

// Rec.601 luma 0.299 R + 0.587 G + 0.114 B. Evaluated in integer
// thousandths first, so white maps to exactly 255.
template <typename Scalar = double>
Plane<Scalar> luma(const Image& rgb) {
  using Channel = Eigen::Map<const Plane<std::uint8_t>, 0, Eigen::Stride<Eigen::Dynamic, 3>>;
  const Eigen::Stride<Eigen::Dynamic, 3> stride(3 * rgb.width(), 3);
  const auto* data = rgb.pixels().data();
  const Channel r(data, rgb.height(), rgb.width(), stride);
  const Channel g(data + 1, rgb.height(), rgb.width(), stride);
  const Channel b(data + 2, rgb.height(), rgb.width(), stride);
  return (299 * r.cast<int>() + 587 * g.cast<int>() + 114 * b.cast<int>()).template cast<Scalar>() /
         Scalar(1000);
}

// Windowed UQI between the luma planes of two frames.
double frame_similarity(const Frame& a, const Frame& b, int window = kDefaultWindow);
// Single-window variant over the whole frame.
double frame_similarity_global(const Frame& a, const Frame& b);

// Pixel footprint of one nonzero instance id.
struct InstanceFootprint {
  InstanceId id = 0;
  PixelBox box;           // tight, half-open
  std::int64_t area = 0;  // visible pixel count
};

// One entry per distinct nonzero instance id, ascending by id.
std::vector<InstanceFootprint> instance_footprints(const InstanceMask& mask);

// 1 - area / box area.
double fill_deficit(std::int64_t area, const PixelBox& box);

struct InstanceStats {
  int count = 0;
  std::map<InstanceId, std::int64_t> areas;  // only instances >= min_area
};

InstanceStats instance_stats(const Frame& frame, int min_area = kDefaultMinArea);

// Number of 4-connected regions of `class_id` in the semantic mask that
// contain two or more distinct instance ids.
int merged_components(const Frame& frame, ClassId class_id,
                      const Palette& palette = Palette::standard());

// 1 - visible pixels / tight box area. Throws RangeError for absent ids.
double occlusion_degree(const Frame& frame, InstanceId id);

struct FrameQuality {
  std::optional<double> uqi_vs_reference;  // empty when there is no reference
  int instance_count = 0;
  int merged_component_count = 0;
  std::map<InstanceId, double> per_instance_occlusion;

  friend bool operator==(const FrameQuality&, const FrameQuality&) = default;
};

// Instance count, merges over the palette's detectable classes, and
// per-instance occlusion for instances >= min_area. Leaves uqi empty.
FrameQuality measure_quality(const Frame& frame, int min_area = kDefaultMinArea,
                             const Palette& palette = Palette::standard());

}  // namespace adacq

#endif  // ADACQ_QUALITY_HPP_
