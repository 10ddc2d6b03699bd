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
#include "adacq/synth.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace adacq {

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::kDenseJunction: return "dense_junction";
    case Preset::kSparseRoad: return "sparse_road";
    case Preset::kStopAndGo: return "stop_and_go";
    case Preset::kMixedTraffic: return "mixed_traffic";
  }
  return "?";
}

Preset parse_preset(std::string_view s) {
  for (auto p :
       {Preset::kDenseJunction, Preset::kSparseRoad, Preset::kStopAndGo, Preset::kMixedTraffic}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError(fmt::format("unknown preset '{}'", s));
}

SceneConfig SceneConfig::for_preset(Preset preset, std::uint64_t seed, int n_frames) {
  SceneConfig c;
  c.preset = preset;
  c.seed = seed;
  c.n_frames = n_frames;
  switch (preset) {
    case Preset::kDenseJunction:
      c.n_vehicles = 12;
      c.n_lights = 2;
      break;
    case Preset::kSparseRoad:
      c.n_vehicles = 3;
      c.n_lights = 1;
      break;
    case Preset::kStopAndGo:
      c.n_vehicles = 6;
      c.n_lights = 1;
      c.ego_speed = 3.0;
      for (int start = 20; start + 4 <= n_frames; start += 40) {
        c.pause_schedule.push_back({start, 4});
      }
      break;
    case Preset::kMixedTraffic:
      c.n_vehicles = 12;
      c.n_lights = 2;
      c.phase_length = 30;
      c.sparse_vehicles = 2;
      break;
  }
  return c;
}

void SceneConfig::validate() const {
  if (width < 1 || height < 1) {
    throw ConfigError(fmt::format("scene must have positive area, got {}x{}", width, height));
  }
  if (n_frames < 1) throw ConfigError("scene needs at least one frame");
  if (n_vehicles < 0 || n_lights < 0) throw ConfigError("object counts must be >= 0");
  if (n_vehicles + n_lights > 65535) throw ConfigError("too many objects for 16-bit ids");
  if (!(speed_min >= 0 && speed_max >= speed_min)) throw ConfigError("bad speed range");
  if (!(frame_period > 0)) throw ConfigError("frame_period must be > 0");
  if (phase_length < 0 || sparse_vehicles < 0) throw ConfigError("bad density phases");
  auto pauses = pause_schedule;
  std::sort(pauses.begin(), pauses.end(),
            [](const Pause& a, const Pause& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < pauses.size(); ++i) {
    const auto& p = pauses[i];
    if (p.length < 1 || p.start < 0 || p.start + p.length > n_frames) {
      throw ConfigError(fmt::format("pause ({}, {}) outside [0, {})", p.start, p.length, n_frames));
    }
    if (i > 0 && pauses[i - 1].start + pauses[i - 1].length > p.start) {
      throw ConfigError(
          fmt::format("pauses starting at {} and {} overlap", pauses[i - 1].start, p.start));
    }
  }
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Fixed 53-bit mapping; std::uniform_real_distribution is not portable.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int texture(std::uint64_t seed, std::int64_t cx, std::int64_t cy, int span) {
  const auto h = mix(seed ^ mix(static_cast<std::uint64_t>(cx) * 0x100000001b3ULL +
                                static_cast<std::uint64_t>(cy)));
  return static_cast<int>(h % static_cast<std::uint64_t>(span));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

void bounce(double& pos, double& vel, double lo, double hi) {
  if (hi <= lo) {
    pos = lo;
    return;
  }
  pos += vel;
  // Reflect until inside; speeds larger than the span fold repeatedly.
  for (int guard = 0; guard < 64 && (pos < lo || pos > hi); ++guard) {
    if (pos < lo) {
      pos = 2 * lo - pos;
      vel = -vel;
    }
    if (pos > hi) {
      pos = 2 * hi - pos;
      vel = -vel;
    }
  }
  pos = std::clamp(pos, lo, hi);
}

}  // namespace

SceneGenerator::SceneGenerator(SceneConfig config) : config_(std::move(config)) {
  config_.validate();
  const int W = config_.width;
  const int H = config_.height;
  horizon_ = H / 3;
  const int road_h = H - horizon_;
  Rng rng(config_.seed);

  for (int i = 0; i < config_.n_vehicles; ++i) {
    Actor a{};
    a.id = static_cast<InstanceId>(i + 1);
    a.cls = kVehicle;
    a.w = std::clamp(static_cast<int>(rng.uniform(14, 29)), 1, W);
    a.h = std::clamp(static_cast<int>(rng.uniform(8, 17)), 1, road_h);
    a.x = rng.uniform(0, W - a.w);
    a.y = rng.uniform(horizon_, H - a.h);
    const double speed = rng.uniform(config_.speed_min, config_.speed_max);
    a.vx = rng.coin() ? speed : -speed;
    a.vy = rng.uniform(-0.3, 0.3) * speed;
    a.color = {clamp8(static_cast<int>(rng.uniform(40, 240))),
               clamp8(static_cast<int>(rng.uniform(40, 240))),
               clamp8(static_cast<int>(rng.uniform(40, 240)))};
    vehicles_.push_back(a);
  }
  for (int j = 0; j < config_.n_lights; ++j) {
    Actor a{};
    a.id = static_cast<InstanceId>(config_.n_vehicles + j + 1);
    a.cls = kTrafficLight;
    a.w = std::min(6, W);
    a.h = std::min(14, H);
    a.x = std::floor(rng.uniform(0, W - a.w));
    a.y = std::clamp(horizon_ - 10, 0, H - a.h);
    a.color = rng.coin() ? Rgb{230, 40, 30} : Rgb{40, 220, 60};
    lights_.push_back(a);
  }
}

bool SceneGenerator::is_paused(int k) const {
  for (const auto& p : config_.pause_schedule) {
    if (k > p.start && k < p.start + p.length) return true;
  }
  return false;
}

void SceneGenerator::advance() {
  for (auto& a : vehicles_) {
    bounce(a.x, a.vx, 0, config_.width - a.w);
    bounce(a.y, a.vy, horizon_, config_.height - a.h);
  }
  ego_offset_ += config_.ego_speed;
}

std::vector<const SceneGenerator::Actor*> SceneGenerator::drawn_actors(int k) const {
  std::size_t shown = vehicles_.size();
  if (config_.phase_length > 0 && (k / config_.phase_length) % 2 == 0) {
    shown = std::min<std::size_t>(shown, config_.sparse_vehicles);
  }
  std::vector<const Actor*> out;
  for (std::size_t i = 0; i < shown; ++i) out.push_back(&vehicles_[i]);
  for (const auto& l : lights_) out.push_back(&l);
  return out;
}

Image SceneGenerator::render_background() const {
  const int W = config_.width;
  const int H = config_.height;
  const auto offset = static_cast<std::int64_t>(std::floor(ego_offset_));
  const int lane_y = horizon_ + (H - horizon_) / 2;
  Image img(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::int64_t wx = x + offset;
      if (y < horizon_) {
        // Facades: coarse blocks with fine grain.
        const int block = texture(config_.seed, floor_div(wx, 12), 0, 60);
        const int grain = texture(config_.seed + 1, floor_div(wx, 2), y / 2, 30);
        img.set(x, y, {clamp8(90 + block + grain), clamp8(80 + block), clamp8(100 + grain)});
      } else {
        const int grain = texture(config_.seed + 2, floor_div(wx, 2), y / 2, 50);
        int v = 70 + grain;
        if (y == lane_y && (((wx % 16) + 16) % 16) < 8) v = 235;
        img.set(x, y, {clamp8(v), clamp8(v), clamp8(v + 5)});
      }
    }
  }
  return img;
}

std::optional<GroundTruthFrame> SceneGenerator::next_with_truth() {
  const int k = frame_index_;
  if (k >= config_.n_frames) return std::nullopt;
  if (k > 0 && !is_paused(k)) advance();
  ++frame_index_;

  const int W = config_.width;
  const int H = config_.height;
  Image rgb = render_background();
  SemanticMask semantic(W, H);
  InstanceMask instance(W, H);
  semantic.class_ids.bottomRows(H - horizon_).setConstant(kRoad);

  std::vector<PaintedRect> painted;
  for (const Actor* a : drawn_actors(k)) {
    const int x0 = static_cast<int>(std::floor(a->x));
    const int y0 = static_cast<int>(std::floor(a->y));
    const PixelBox r{x0, y0, x0 + a->w, y0 + a->h};
    painted.push_back({a->id, a->cls, r});
    semantic.class_ids.block(r.y_min, r.x_min, r.height(), r.width()).setConstant(a->cls);
    instance.instance_ids.block(r.y_min, r.x_min, r.height(), r.width()).setConstant(a->id);
    for (int y = r.y_min; y < r.y_max; ++y) {
      for (int x = r.x_min; x < r.x_max; ++x) {
        const bool edge = x == r.x_min || y == r.y_min || x == r.x_max - 1 || y == r.y_max - 1;
        Rgb c = a->color;
        if (a->cls == kTrafficLight) {
          const bool lamp = y >= r.y_min + 1 && y < r.y_min + 5 && !edge;
          c = lamp ? a->color : Rgb{35, 35, 38};
        } else if (edge) {
          c = {static_cast<std::uint8_t>(c.r / 2), static_cast<std::uint8_t>(c.g / 2),
               static_cast<std::uint8_t>(c.b / 2)};
        }
        rgb.set(x, y, c);
      }
    }
  }

  GroundTruthFrame out{Frame(static_cast<FrameId>(k), k * config_.frame_period, std::move(rgb),
                             std::move(semantic), std::move(instance)),
                       visible_regions(painted)};
  return out;
}

std::optional<Frame> SceneGenerator::next() {
  auto f = next_with_truth();
  if (!f) return std::nullopt;
  return std::move(f->frame);
}

std::vector<GroundTruthFrame> generate(const SceneConfig& config) {
  SceneGenerator gen(config);
  std::vector<GroundTruthFrame> out;
  out.reserve(config.n_frames);
  while (auto f = gen.next_with_truth()) out.push_back(std::move(*f));
  return out;
}

std::vector<InstanceRecord> visible_regions(const std::vector<PaintedRect>& back_to_front) {
  std::vector<InstanceRecord> out;
  for (std::size_t i = 0; i < back_to_front.size(); ++i) {
    const PixelBox& r = back_to_front[i].rect;
    // Split the rectangle along every edge of the nearer rectangles it
    // meets; each resulting cell is either fully covered or fully visible.
    std::vector<const PixelBox*> nearer;
    std::vector<int> xs{r.x_min, r.x_max};
    std::vector<int> ys{r.y_min, r.y_max};
    for (std::size_t j = i + 1; j < back_to_front.size(); ++j) {
      const PixelBox& o = back_to_front[j].rect;
      if (o.x_max <= r.x_min || o.x_min >= r.x_max || o.y_max <= r.y_min || o.y_min >= r.y_max) {
        continue;
      }
      nearer.push_back(&o);
      xs.push_back(std::clamp(o.x_min, r.x_min, r.x_max));
      xs.push_back(std::clamp(o.x_max, r.x_min, r.x_max));
      ys.push_back(std::clamp(o.y_min, r.y_min, r.y_max));
      ys.push_back(std::clamp(o.y_max, r.y_min, r.y_max));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::int64_t area = 0;
    PixelBox box{r.x_max, r.y_max, r.x_min, r.y_min};
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
      for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
        const PixelBox cell{xs[a], ys[b], xs[a + 1], ys[b + 1]};
        const bool covered = std::any_of(nearer.begin(), nearer.end(), [&](const PixelBox* o) {
          return o->x_min <= cell.x_min && o->x_max >= cell.x_max && o->y_min <= cell.y_min &&
                 o->y_max >= cell.y_max;
        });
        if (covered) continue;
        area += cell.area();
        box.x_min = std::min(box.x_min, cell.x_min);
        box.y_min = std::min(box.y_min, cell.y_min);
        box.x_max = std::max(box.x_max, cell.x_max);
        box.y_max = std::max(box.y_max, cell.y_max);
      }
    }
    if (area == 0) continue;
    out.push_back({back_to_front[i].id, back_to_front[i].cls, box, area,
                   1.0 - static_cast<double>(area) / static_cast<double>(box.area())});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; });
  return out;
}

}  // namespace adacq
