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
#include "adacq/quality.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace adacq {

namespace {

void require_same_shape(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw DimensionError(fmt::format("frames {} and {} differ in size ({}x{} vs {}x{})", a.id(),
                                     b.id(), a.width(), a.height(), b.width(), b.height()));
  }
}

}  // namespace

double frame_similarity(const Frame& a, const Frame& b, int window) {
  require_same_shape(a, b);
  return uqi_windowed(luma(a.rgb()), luma(b.rgb()), window);
}

double frame_similarity_global(const Frame& a, const Frame& b) {
  require_same_shape(a, b);
  return uqi(luma(a.rgb()), luma(b.rgb()));
}

std::vector<InstanceFootprint> instance_footprints(const InstanceMask& mask) {
  std::unordered_map<InstanceId, InstanceFootprint> by_id;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const InstanceId id = mask(x, y);
      if (id == 0) continue;
      auto [it, fresh] = by_id.try_emplace(id);
      auto& f = it->second;
      if (fresh) {
        f.id = id;
        f.box = {x, y, x + 1, y + 1};
      } else {
        f.box.x_min = std::min(f.box.x_min, x);
        f.box.y_min = std::min(f.box.y_min, y);
        f.box.x_max = std::max(f.box.x_max, x + 1);
        f.box.y_max = std::max(f.box.y_max, y + 1);
      }
      ++f.area;
    }
  }
  std::vector<InstanceFootprint> out;
  out.reserve(by_id.size());
  for (auto& [id, f] : by_id) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

double fill_deficit(std::int64_t area, const PixelBox& box) {
  return 1.0 - static_cast<double>(area) / static_cast<double>(box.area());
}

InstanceStats instance_stats(const Frame& frame, int min_area) {
  InstanceStats stats;
  for (const auto& f : instance_footprints(frame.instance())) {
    if (f.area < min_area) continue;
    stats.areas.emplace(f.id, f.area);
  }
  stats.count = static_cast<int>(stats.areas.size());
  return stats;
}

int merged_components(const Frame& frame, ClassId class_id, const Palette& palette) {
  if (!palette.contains(class_id)) {
    throw ConfigError(fmt::format("merged_components: unknown class id {}", class_id));
  }
  const auto& sem = frame.semantic();
  const auto& inst = frame.instance();
  const int w = frame.width();
  const int h = frame.height();
  Plane<std::uint8_t> seen = Plane<std::uint8_t>::Zero(h, w);
  std::vector<std::pair<int, int>> stack;
  int merged = 0;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (seen(y0, x0) || sem(x0, y0) != class_id) continue;
      // Flood one 4-connected component, tracking whether it spans more
      // than one nonzero instance id.
      InstanceId first = 0;
      bool multiple = false;
      seen(y0, x0) = 1;
      stack.assign(1, {x0, y0});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        const InstanceId id = inst(x, y);
        if (id != 0) {
          if (first == 0) {
            first = id;
          } else if (id != first) {
            multiple = true;
          }
        }
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
          if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
          if (seen(ny[k], nx[k]) || sem(nx[k], ny[k]) != class_id) continue;
          seen(ny[k], nx[k]) = 1;
          stack.push_back({nx[k], ny[k]});
        }
      }
      if (multiple) ++merged;
    }
  }
  return merged;
}

double occlusion_degree(const Frame& frame, InstanceId id) {
  if (id != 0) {
    for (const auto& f : instance_footprints(frame.instance())) {
      if (f.id == id) return fill_deficit(f.area, f.box);
    }
  }
  throw RangeError(fmt::format("frame {}: instance {} not present", frame.id(), id));
}

FrameQuality measure_quality(const Frame& frame, int min_area, const Palette& palette) {
  FrameQuality q;
  for (const auto& f : instance_footprints(frame.instance())) {
    if (f.area < min_area) continue;
    q.per_instance_occlusion.emplace(f.id, fill_deficit(f.area, f.box));
  }
  q.instance_count = static_cast<int>(q.per_instance_occlusion.size());
  if (q.instance_count >= 2) {
    int merged = 0;
    for (ClassId cls : palette.detectable_classes())
      merged += merged_components(frame, cls, palette);
    // Occlusion can split one instance into several blobs; the count of
    // merged regions is capped by the instances that can form them.
    q.merged_component_count = std::min(merged, q.instance_count);
  }
  return q;
}

}  // namespace adacq
