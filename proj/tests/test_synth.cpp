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
#include <map>
#include <random>

#include <doctest.h>

#include "adacq/errors.hpp"
#include "adacq/labeler.hpp"
#include "adacq/quality.hpp"
#include "adacq/scene_io.hpp"
#include "adacq/synth.hpp"
#include "test_util.hpp"

using namespace adacq;

TEST_CASE("generation is deterministic") {
  for (auto preset :
       {Preset::kDenseJunction, Preset::kSparseRoad, Preset::kStopAndGo, Preset::kMixedTraffic}) {
    const auto cfg = SceneConfig::for_preset(preset, 99, 30);
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
      REQUIRE(a[i].frame == b[i].frame);
      REQUIRE(a[i].truth == b[i].truth);
    }
  }
  const auto c = generate(SceneConfig::for_preset(Preset::kDenseJunction, 1, 1));
  const auto d = generate(SceneConfig::for_preset(Preset::kDenseJunction, 2, 1));
  CHECK_FALSE(c[0].frame.rgb() == d[0].frame.rgb());
}

TEST_CASE("a pause yields identical consecutive frames") {
  auto cfg = SceneConfig::for_preset(Preset::kStopAndGo, 4, 30);
  cfg.pause_schedule = {{10, 5}};
  const auto f = generate(cfg);
  for (int k = 11; k < 15; ++k) {
    CHECK(f[k].frame.rgb() == f[10].frame.rgb());
    CHECK(f[k].frame.instance() == f[10].frame.instance());
    CHECK(f[k].truth == f[10].truth);
    CHECK(f[k].frame.timestamp() > f[k - 1].frame.timestamp());
  }
  CHECK_FALSE(f[9].frame.rgb() == f[10].frame.rgb());
  CHECK_FALSE(f[15].frame.rgb() == f[14].frame.rgb());
}

TEST_CASE("frame ids and timestamps") {
  const auto f = generate(SceneConfig::for_preset(Preset::kSparseRoad, 4, 5));
  for (int i = 0; i < 5; ++i) {
    CHECK(f[i].frame.id() == static_cast<FrameId>(i));
    CHECK(f[i].frame.timestamp() == doctest::Approx(0.1 * i));
  }
}

TEST_CASE("semantic raster agrees with palette colors") {
  const auto f = generate(SceneConfig::for_preset(Preset::kDenseJunction, 8, 1))[0].frame;
  CHECK(decode_semantic(encode_semantic(f.semantic())) == f.semantic());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      const bool object = f.instance()(x, y) != 0;
      const auto cls = f.semantic()(x, y);
      REQUIRE(object == (cls == kVehicle || cls == kTrafficLight));
    }
  }
}

TEST_CASE("mixed traffic alternates sparse and dense phases") {
  auto cfg = SceneConfig::for_preset(Preset::kMixedTraffic, 6, 60);
  const auto f = generate(cfg);
  auto vehicles = [&](int k) {
    int n = 0;
    for (const auto& r : f[k].truth) n += r.class_id == kVehicle;
    return n;
  };
  CHECK(vehicles(5) <= cfg.sparse_vehicles);
  CHECK(vehicles(45) > cfg.sparse_vehicles);
}

TEST_CASE("scene config validation") {
  auto cfg = SceneConfig::for_preset(Preset::kStopAndGo, 0, 10);
  CHECK_NOTHROW(cfg.validate());
  cfg.n_frames = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.n_frames = 10;
  cfg.pause_schedule = {{8, 5}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.pause_schedule = {{1, 3}, {2, 3}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.pause_schedule = {};
  cfg.width = 0;
  CHECK_THROWS_AS(SceneGenerator{cfg}, ConfigError);
  CHECK(parse_preset("mixed_traffic") == Preset::kMixedTraffic);
  CHECK_THROWS_AS(parse_preset("highway"), ConfigError);
}

TEST_CASE("visible regions match a painted raster") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PaintedRect> rects;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const int x = static_cast<int>(rng() % 30), y = static_cast<int>(rng() % 30);
      rects.push_back(
          {static_cast<InstanceId>(i + 1),
           static_cast<ClassId>(rng() % 2 ? kVehicle : kTrafficLight),
           {x, y, x + 1 + static_cast<int>(rng() % 12), y + 1 + static_cast<int>(rng() % 12)}});
    }
    const auto frame = adacq::testing::paint(48, 48, rects);
    REQUIRE(visible_regions(rects) == extract_instances(frame, 1));
  }
}

TEST_CASE("scene export and import") {
  adacq::testing::ScratchDir dir;
  const auto cfg = SceneConfig::for_preset(Preset::kStopAndGo, 3, 20);
  const auto frames = generate(cfg);
  export_scene(frames, dir / "s", SceneMetadata::from_config(cfg));
  const auto back = import_scene(dir / "s");
  CHECK(back.metadata == SceneMetadata::from_config(cfg));
  REQUIRE(back.frames.size() == 20);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(back.frames[i].frame == frames[i].frame);
    CHECK(back.frames[i].truth == frames[i].truth);
  }
  SceneDirectorySource src(dir / "s");
  CHECK(src.size() == 20);
  CHECK(src.frame_period() == doctest::Approx(0.1));
  int n = 0;
  while (auto f = src.next()) CHECK(*f == frames[n++].frame);
  CHECK(n == 20);

  export_scene({}, dir / "empty", SceneMetadata::from_config(cfg));
  const auto empty = import_scene(dir / "empty");
  CHECK(empty.frames.empty());
  CHECK(empty.metadata.preset == "stop_and_go");

  CHECK_THROWS(import_scene(dir / "nowhere"));
}

TEST_CASE("dense junction is denser than a sparse road") {
  auto mean_instances = [](Preset preset) {
    auto cfg = SceneConfig::for_preset(preset, 31, 60);
    cfg.n_lights = 1;
    double total = 0;
    for (const auto& g : generate(cfg)) total += static_cast<double>(g.truth.size());
    return total / 60;
  };
  CHECK(mean_instances(Preset::kDenseJunction) > mean_instances(Preset::kSparseRoad));
}

TEST_CASE("paused frames are fully similar") {
  const auto cfg = SceneConfig::for_preset(Preset::kStopAndGo, 2, 60);
  const auto f = generate(cfg);
  const auto& pause = cfg.pause_schedule.at(0);
  for (int k = pause.start + 1; k < pause.start + pause.length; ++k) {
    CHECK(frame_similarity(f[k].frame, f[k - 1].frame) == 1.0);
  }
}

TEST_CASE("visible pixels per class equal semantic pixel counts") {
  for (const auto& g : generate(SceneConfig::for_preset(Preset::kDenseJunction, 6, 15))) {
    std::map<ClassId, std::int64_t> from_truth, from_mask;
    for (const auto& r : g.truth) from_truth[r.class_id] += r.pixel_area;
    const auto& sem = g.frame.semantic();
    for (int y = 0; y < sem.height(); ++y) {
      for (int x = 0; x < sem.width(); ++x) {
        if (sem(x, y) == kVehicle || sem(x, y) == kTrafficLight) ++from_mask[sem(x, y)];
      }
    }
    REQUIRE(from_truth == from_mask);
  }
}

TEST_CASE("re-imported truth agrees with the labeler") {
  adacq::testing::ScratchDir dir;
  const auto cfg = SceneConfig::for_preset(Preset::kMixedTraffic, 8, 40);
  export_scene(generate(cfg), dir / "s", SceneMetadata::from_config(cfg));
  for (const auto& g : import_scene(dir / "s").frames) {
    REQUIRE(extract_instances(g.frame, 1) == g.truth);
  }
}
