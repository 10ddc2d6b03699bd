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
#ifndef ADACQ_SYNTH_HPP_
#define ADACQ_SYNTH_HPP_

// Seeded 2-D driving scenes: moving vehicle rectangles and static traffic
// lights over a textured road, rendered with a fixed painter's order so that
// nearer objects genuinely occlude farther ones. Every frame carries exact
// visible-region ground truth computed geometrically from the rectangles,
// independently of the rasters.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "adacq/core_types.hpp"
#include "adacq/labeler.hpp"
#include "adacq/policy.hpp"

namespace adacq {

enum class Preset {
  kDenseJunction,  // static camera, 12 vehicles
  kSparseRoad,     // static camera, 3 vehicles
  kStopAndGo,      // panning camera with scripted stops
  kMixedTraffic,   // static camera, alternating sparse and dense phases
};

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view s);

// Frames [start, start + length) show the same frozen world.
struct Pause {
  int start = 0;
  int length = 0;
  friend bool operator==(const Pause&, const Pause&) = default;
};

struct SceneConfig {
  Preset preset = Preset::kSparseRoad;
  std::uint64_t seed = 0;
  int width = 160;
  int height = 120;
  int n_vehicles = 3;
  int n_lights = 1;
  double speed_min = 1.0;  // pixels/frame
  double speed_max = 3.0;
  double ego_speed = 0.0;  // background scroll, pixels/frame
  double frame_period = 0.1;
  int n_frames = 120;
  std::vector<Pause> pause_schedule;
  // Density phases: with phase_length > 0, every other block of
  // phase_length frames (starting with the first) shows only the first
  // sparse_vehicles vehicles.
  int phase_length = 0;
  int sparse_vehicles = 0;

  // Preset defaults. stop_and_go gets one 4-frame stop every 40 frames.
  static SceneConfig for_preset(Preset preset, std::uint64_t seed = 0, int n_frames = 120);

  void validate() const;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct GroundTruthFrame {
  Frame frame;
  std::vector<InstanceRecord> truth;  // every visible instance, ascending id
};

// Lazily generates one scene. Also usable directly as a FrameSource.
class SceneGenerator : public FrameSource {
 public:
  explicit SceneGenerator(SceneConfig config);

  std::optional<GroundTruthFrame> next_with_truth();
  std::optional<Frame> next() override;
  double frame_period() const override { return config_.frame_period; }
  const SceneConfig& config() const { return config_; }

 private:
  struct Actor {
    InstanceId id;
    ClassId cls;
    double x, y, vx, vy;
    int w, h;
    Rgb color;
  };

  bool is_paused(int frame_index) const;
  void advance();
  std::vector<const Actor*> drawn_actors(int frame_index) const;
  Image render_background() const;

  SceneConfig config_;
  std::vector<Actor> vehicles_;
  std::vector<Actor> lights_;
  double ego_offset_ = 0;
  int frame_index_ = 0;
  int horizon_;
};

std::vector<GroundTruthFrame> generate(const SceneConfig& config);

// Visible-region records of a stack of rectangles drawn back to front.
// Exposed for tests; the generator's ground truth is built from it.
struct PaintedRect {
  InstanceId id;
  ClassId cls;
  PixelBox rect;
};
std::vector<InstanceRecord> visible_regions(const std::vector<PaintedRect>& back_to_front);

}  // namespace adacq

#endif  // ADACQ_SYNTH_HPP_
