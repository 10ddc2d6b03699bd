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
#include <sstream>

#include <doctest.h>

#include "adacq/errors.hpp"
#include "adacq/policy.hpp"
#include "adacq/synth.hpp"
#include "test_util.hpp"

using namespace adacq;

namespace {

// Random RGB with `vehicles` separate 8x8 vehicle instances.
Frame noisy(std::mt19937_64& rng, FrameId id, int vehicles = 1, int w = 48, int h = 32) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(rng());
  SemanticMask sem(w, h);
  InstanceMask inst(w, h);
  for (int v = 0; v < vehicles; ++v) {
    for (int y = 2; y < 10; ++y) {
      for (int x = 10 * v; x < 10 * v + 8; ++x) {
        sem(x, y) = kVehicle;
        inst(x, y) = static_cast<InstanceId>(v + 1);
      }
    }
  }
  return Frame(id, 0.1 * static_cast<double>(id), Image(w, h, std::move(px)), std::move(sem),
               std::move(inst));
}

Frame renumber(const Frame& f, FrameId id) {
  return Frame(id, 0.1 * static_cast<double>(id), f.rgb(), f.semantic(), f.instance());
}

std::vector<Frame> stream_of(const SceneConfig& cfg) {
  std::vector<Frame> out;
  for (auto& g : generate(cfg)) out.push_back(std::move(g.frame));
  return out;
}

std::int64_t kept_with(const std::vector<Frame>& frames, const PolicyConfig& cfg) {
  VectorFrameSource src(frames, 0.1);
  return collect_active_time(src, cfg).stats.frames_kept;
}

}  // namespace

TEST_CASE("policy config validation") {
  PolicyConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK_NOTHROW(Policy{c});
  c.tau = 0;
  CHECK_THROWS_AS(Policy{c}, ConfigError);
  c.tau = 1.2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.tau = 0.98;
  c.density_boost = 0.05;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.density_boost = 0.02;
  CHECK_NOTHROW(c.validate());
  c.window = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.min_instances = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.density_boost = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("effective threshold") {
  PolicyConfig c;
  c.tau = 0.9;
  c.density_boost = 0.1;
  c.boost_at = 4;
  const Policy p(c);
  CHECK(p.effective_threshold(3) == 0.9);
  CHECK(p.effective_threshold(4) == doctest::Approx(1.0));
  CHECK(p.effective_threshold(4) <= 1.0);
}

TEST_CASE("identical frames are redundant after the first") {
  std::mt19937_64 rng(1);
  const auto base = noisy(rng, 0);
  PolicyConfig c;
  c.tau = 0.98;
  c.density_boost = 0;
  Policy p(c);
  auto first = p.step(base);
  CHECK(first.verdict == Verdict::kKeep);
  CHECK(first.reason == Reason::kFirstFrame);
  CHECK_FALSE(first.quality.uqi_vs_reference.has_value());
  for (FrameId i = 1; i < 10; ++i) {
    const auto d = p.step(renumber(base, i));
    CHECK(d.verdict == Verdict::kDrop);
    CHECK(d.reason == Reason::kRedundant);
    CHECK(*d.quality.uqi_vs_reference == 1.0);
  }
}

TEST_CASE("gate order") {
  std::mt19937_64 rng(2);
  PolicyConfig c;
  c.min_instances = 1;
  SUBCASE("novel frame with no instances") {
    Policy p(c);
    p.step(noisy(rng, 0));
    const auto d = p.step(noisy(rng, 1, 0));
    CHECK(d.verdict == Verdict::kDrop);
    CHECK(d.reason == Reason::kTooFewInstances);
  }
  SUBCASE("redundant frame with no instances reports redundancy") {
    Policy p(c);
    const auto empty = noisy(rng, 0, 0);
    p.step(empty);
    CHECK(p.step(renumber(empty, 1)).reason == Reason::kRedundant);
  }
  SUBCASE("merged frames") {
    // Two touching vehicles.
    auto merged = [&](FrameId id) {
      auto f = noisy(rng, id, 2);
      SemanticMask sem = f.semantic();
      for (int y = 2; y < 10; ++y) {
        sem(8, y) = kVehicle;
        sem(9, y) = kVehicle;
      }
      InstanceMask inst = f.instance();
      for (int y = 2; y < 10; ++y) {
        inst(8, y) = 1;
        inst(9, y) = 2;
      }
      return Frame(id, 0.0, f.rgb(), sem, inst);
    };
    c.drop_merged = true;
    c.max_merged = 0;
    Policy p(c);
    p.step(noisy(rng, 0));
    const auto d = p.step(merged(1));
    CHECK(d.quality.merged_component_count == 1);
    CHECK(d.reason == Reason::kTooManyMerged);
    c.max_merged = 1;
    Policy q(c);
    q.step(noisy(rng, 0));
    CHECK(q.step(merged(1)).reason == Reason::kNovel);
    c.drop_merged = false;
    c.max_merged = 0;
    Policy r(c);
    r.step(noisy(rng, 0));
    CHECK(r.step(merged(1)).reason == Reason::kNovel);
  }
}

TEST_CASE("policy rejects a frame of another size") {
  std::mt19937_64 rng(3);
  Policy p{PolicyConfig{}};
  p.step(noisy(rng, 0));
  CHECK_THROWS_AS(p.step(noisy(rng, 1, 1, 40, 32)), DimensionError);
}

TEST_CASE("reference modes") {
  // Slow drift: each frame differs a little from the last.
  std::vector<Frame> frames;
  Image img(32, 32);
  std::mt19937_64 rng(4);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) img.set(x, y, {static_cast<std::uint8_t>(rng()), 90, 40});
  }
  for (FrameId i = 0; i < 40; ++i) {
    frames.push_back(adacq::testing::from_image(img, i));
    const int x = static_cast<int>(i % 32), y = static_cast<int>((i * 7) % 32);
    img.set(x, y, {static_cast<std::uint8_t>(rng()), 10, 200});
  }
  PolicyConfig c;
  c.min_instances = 0;
  c.density_boost = 0;
  c.tau = 0.99;
  c.reference_mode = ReferenceMode::kPreviousRaw;
  const auto raw = kept_with(frames, c);
  c.reference_mode = ReferenceMode::kPreviousKept;
  const auto kept = kept_with(frames, c);
  // Against the previous raw frame every step looks tiny; against the last
  // kept frame the drift accumulates past the threshold.
  CHECK(raw == 1);
  CHECK(kept > 1);
  CHECK(parse_reference_mode("previous-raw") == ReferenceMode::kPreviousRaw);
  CHECK_THROWS_AS(parse_reference_mode("latest"), ConfigError);
}

TEST_CASE("passive collection") {
  std::mt19937_64 rng(5);
  std::vector<Frame> ten;
  for (FrameId i = 0; i < 10; ++i) ten.push_back(noisy(rng, i));
  {
    VectorFrameSource src(ten, 0.1);
    const auto r = collect_passive(src, 2);
    CHECK(r.stats.frames_kept == 5);
    CHECK(r.stats.frames_seen == 10);
    CHECK(r.decisions[1].reason == Reason::kStrideSkip);
    CHECK(r.stats.wall_clock_equivalent == doctest::Approx(1.0));
    CHECK(r.stats.instances_kept == 5);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const int stride = 1 + static_cast<int>(rng() % 7);
    std::vector<Frame> frames;
    for (int i = 0; i < n; ++i) frames.push_back(noisy(rng, static_cast<FrameId>(i), 0, 8, 8));
    VectorFrameSource src(frames, 0.1);
    const auto r = collect_passive(src, stride);
    REQUIRE(r.stats.frames_kept == (n + stride - 1) / stride);
  }
  VectorFrameSource src(ten, 0.1);
  CHECK_THROWS_AS(collect_passive(src, 0), ConfigError);
}

TEST_CASE("passive keeps 900 of 900 at stride 1") {
  auto cfg = SceneConfig::for_preset(Preset::kSparseRoad, 9, 900);
  cfg.width = 64;
  cfg.height = 48;
  SceneGenerator gen(cfg);
  CHECK(collect_passive(gen, 1).stats.frames_kept == 900);
}

TEST_CASE("empty streams are errors") {
  VectorFrameSource a({}, 0.1), b({}, 0.1), c({}, 0.1);
  CHECK_THROWS_AS(collect_passive(a, 1), Error);
  CHECK_THROWS_AS(collect_active_time(b, {}), Error);
  CHECK_THROWS_AS(collect_active_size(c, {}, 3), Error);
}

TEST_CASE("injected duplicate runs") {
  std::mt19937_64 rng(6);
  std::vector<Frame> frames;
  int runs = 0;
  for (int u = 0; u < 40; ++u) {
    const auto f = noisy(rng, frames.size());
    frames.push_back(f);
    if (u % 4 == 0) {
      ++runs;
      for (int k = 0; k < 6; ++k) frames.push_back(renumber(f, frames.size()));
    }
  }
  REQUIRE(frames.size() == 100);  // 60 duplicates
  PolicyConfig c;
  c.tau = 0.98;
  c.density_boost = 0;
  VectorFrameSource src(frames, 0.1);
  const auto r = collect_active_time(src, c);
  CHECK(r.stats.frames_kept <= 40 + runs);
  CHECK(r.stats.frames_kept == 40);
}

TEST_CASE("distinct qualifying frames are all kept at tau near 1") {
  std::mt19937_64 rng(7);
  std::vector<Frame> frames;
  for (FrameId i = 0; i < 30; ++i) frames.push_back(noisy(rng, i));
  PolicyConfig c;
  c.tau = 0.999;
  c.density_boost = 0;
  CHECK(kept_with(frames, c) == 30);
}

TEST_CASE("with no boost and no quality gates the only drop reason is redundancy") {
  PolicyConfig c;
  c.density_boost = 0;
  c.min_instances = 0;
  c.drop_merged = false;
  for (auto preset : {Preset::kStopAndGo, Preset::kMixedTraffic}) {
    SceneGenerator gen(SceneConfig::for_preset(preset, 12, 150));
    const auto r = collect_active_time(gen, c);
    CHECK(r.decisions.front().verdict == Verdict::kKeep);
    for (const auto& d : r.decisions) {
      if (d.verdict == Verdict::kDrop) REQUIRE(d.reason == Reason::kRedundant);
    }
  }
}

TEST_CASE("lowering tau never keeps more frames") {
  for (auto mode : {ReferenceMode::kPreviousRaw, ReferenceMode::kPreviousKept}) {
    for (auto preset : {Preset::kStopAndGo, Preset::kMixedTraffic, Preset::kSparseRoad}) {
      const auto frames = stream_of(SceneConfig::for_preset(preset, 21, 120));
      PolicyConfig c;
      c.reference_mode = mode;
      c.density_boost = 0.0;
      std::int64_t previous = 0;
      for (int t = 40; t <= 100; t += 2) {
        c.tau = t / 100.0;
        const auto kept = kept_with(frames, c);
        CAPTURE(to_string(mode));
        CAPTURE(to_string(preset));
        CAPTURE(c.tau);
        REQUIRE(kept >= previous);
        previous = kept;
      }
    }
  }
}

TEST_CASE("decisions are deterministic") {
  auto run = [] {
    SceneGenerator gen(SceneConfig::for_preset(Preset::kMixedTraffic, 5, 90));
    return collect_active_time(gen, PolicyConfig{});
  };
  const auto a = run();
  const auto b = run();
  CHECK(a.decisions == b.decisions);
  CHECK(a.stats == b.stats);
}

TEST_CASE("active-time on stop-and-go keeps fewer frames at about the same density") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto frames = stream_of(SceneConfig::for_preset(Preset::kStopAndGo, seed, 120));
    VectorFrameSource ps(frames, 0.1), as(frames, 0.1);
    const auto passive = collect_passive(ps, 1).stats;
    const auto active = collect_active_time(as, PolicyConfig{}).stats;
    CHECK(active.frames_kept < passive.frames_kept);
    // Dropped frames are exact copies of kept ones, so the density only moves
    // by the luck of which frames the camera stopped on.
    CHECK(active.instances_per_kept_frame >= 0.995 * passive.instances_per_kept_frame);
  }
}

TEST_CASE("active-size") {
  SUBCASE("quota on a long stream") {
    SceneGenerator gen(SceneConfig::for_preset(Preset::kMixedTraffic, 3, 2000));
    int sunk = 0;
    const auto r = collect_active_size(gen, PolicyConfig{}, 300,
                                       [&](const Frame&, const AcquisitionDecision&) { ++sunk; });
    CHECK(r.stats.frames_kept == 300);
    CHECK(sunk == 300);
    CHECK(r.stats.quota_reached);
    CHECK(r.stats.target_frames == 300);
    CHECK(r.stats.frames_seen < 2000);
    CHECK(r.decisions.back().verdict == Verdict::kKeep);
  }
  SUBCASE("exhaustion") {
    SceneGenerator gen(SceneConfig::for_preset(Preset::kStopAndGo, 3, 60));
    const auto r = collect_active_size(gen, PolicyConfig{}, 500);
    CHECK(r.stats.frames_kept < 500);
    CHECK_FALSE(r.stats.quota_reached);
    CHECK(r.stats.frames_seen == 60);
  }
  SUBCASE("drain marks the rest") {
    SceneGenerator gen(SceneConfig::for_preset(Preset::kStopAndGo, 3, 60));
    const auto r = collect_active_size(gen, PolicyConfig{}, 5, {}, true);
    CHECK(r.stats.frames_kept == 5);
    CHECK(r.stats.frames_seen == 60);
    CHECK(r.decisions.back().reason == Reason::kQuotaReached);
  }
  SUBCASE("bad target") {
    SceneGenerator gen(SceneConfig::for_preset(Preset::kStopAndGo, 3, 5));
    CHECK_THROWS_AS(collect_active_size(gen, PolicyConfig{}, 0), ConfigError);
  }
}

TEST_CASE("active-size beats passive density on mixed traffic") {
  auto cfg = SceneConfig::for_preset(Preset::kMixedTraffic, 8, 600);
  SceneGenerator gp(cfg), ga(cfg);
  const auto passive = collect_passive(gp, 5).stats;
  const auto active = collect_active_size(ga, PolicyConfig{}, passive.frames_kept).stats;
  CHECK(active.frames_kept == passive.frames_kept);
  CHECK(active.instances_kept > passive.instances_kept);
}

TEST_CASE("decision log") {
  std::mt19937_64 rng(8);
  const auto f = noisy(rng, 4);
  Policy p{PolicyConfig{}};
  std::vector<AcquisitionDecision> ds{p.step(f), p.step(renumber(f, 5))};
  std::ostringstream out;
  write_decision_log(out, ds);
  CHECK(out.str() ==
        "frame_id,verdict,reason,uqi,instance_count,merged_count\n"
        "4,keep,first_frame,,1,0\n"
        "5,drop,redundant,1.000000000,1,0\n");
}
