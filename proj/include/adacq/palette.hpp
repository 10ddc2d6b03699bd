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
#ifndef ADACQ_PALETTE_HPP_
#define ADACQ_PALETTE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "adacq/raster.hpp"

namespace adacq {

// Class ids of the built-in registry.
inline constexpr ClassId kBackground = 0;
inline constexpr ClassId kRoad = 1;
inline constexpr ClassId kVehicle = 2;
inline constexpr ClassId kTrafficLight = 3;

struct PaletteEntry {
  ClassId id = 0;
  std::string name;
  Rgb color;
  // Detectable classes carry instances and are exported as labels.
  bool detectable = false;

  friend bool operator==(const PaletteEntry&, const PaletteEntry&) = default;
};

// Class <-> color registry for semantic rasters. Ids and colors are unique.
class Palette {
 public:
  Palette() = default;
  explicit Palette(std::vector<PaletteEntry> entries);

  // background, road, vehicle, traffic_light with Cityscapes-style colors.
  static const Palette& standard();

  const std::vector<PaletteEntry>& entries() const { return entries_; }
  bool contains(ClassId id) const { return find(id) != nullptr; }
  const PaletteEntry* find(ClassId id) const;
  std::optional<ClassId> class_of(Rgb color) const;
  Rgb color_of(ClassId id) const;  // throws ConfigError for unknown ids
  std::vector<ClassId> detectable_classes() const;

  friend bool operator==(const Palette&, const Palette&) = default;

 private:
  std::vector<PaletteEntry> entries_;
};

}  // namespace adacq

#endif  // ADACQ_PALETTE_HPP_
