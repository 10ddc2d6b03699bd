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
#include "adacq/palette.hpp"

#include <set>
#include <string>

#include "adacq/errors.hpp"

namespace adacq {

Palette::Palette(std::vector<PaletteEntry> entries) : entries_(std::move(entries)) {
  std::set<ClassId> ids;
  std::set<Rgb> colors;
  for (const auto& e : entries_) {
    if (!ids.insert(e.id).second) {
      throw ConfigError("palette: duplicate class id " + std::to_string(e.id));
    }
    if (!colors.insert(e.color).second) {
      throw ConfigError("palette: duplicate color for class " + e.name);
    }
  }
}

const Palette& Palette::standard() {
  static const Palette palette({
      {kBackground, "background", {0, 0, 0}, false},
      {kRoad, "road", {128, 64, 128}, false},
      {kVehicle, "vehicle", {0, 0, 142}, true},
      {kTrafficLight, "traffic_light", {250, 170, 30}, true},
  });
  return palette;
}

const PaletteEntry* Palette::find(ClassId id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::optional<ClassId> Palette::class_of(Rgb color) const {
  for (const auto& e : entries_) {
    if (e.color == color) return e.id;
  }
  return std::nullopt;
}

Rgb Palette::color_of(ClassId id) const {
  if (const auto* e = find(id)) return e->color;
  throw ConfigError("palette: unknown class id " + std::to_string(id));
}

std::vector<ClassId> Palette::detectable_classes() const {
  std::vector<ClassId> out;
  for (const auto& e : entries_) {
    if (e.detectable) out.push_back(e.id);
  }
  return out;
}

}  // namespace adacq
