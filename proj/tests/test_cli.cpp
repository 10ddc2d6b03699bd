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
#include <fstream>
#include <set>
#include <sstream>

#include <doctest.h>

#include "adacq/cli.hpp"
#include "adacq/dataset_io.hpp"
#include "adacq/synth.hpp"
#include "test_util.hpp"

using namespace adacq;
using adacq::testing::ScratchDir;
using adacq::testing::slurp;

namespace fs = std::filesystem;

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string p(const fs::path& path) { return path.string(); }

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("synth writes a scene") {
  ScratchDir dir;
  const auto r = cli({"synth", "--preset", "stop_and_go", "--seed", "7", "--frames", "120", "--out",
                      p(dir / "scene")});
  REQUIRE(r.rc == 0);
  for (const char* sub : {"rgb", "semantic", "instance"}) {
    int n = 0;
    for (const auto& e : fs::directory_iterator(dir / "scene" / sub)) n += e.is_regular_file();
    CHECK(n == 120);
  }
  CHECK(fs::exists(dir / "scene" / "scene.json"));
  REQUIRE(cli({"synth", "--preset", "stop_and_go", "--seed", "7", "--frames", "120", "--out",
               p(dir / "again")})
              .rc == 0);
  for (const auto& e : fs::recursive_directory_iterator(dir / "scene")) {
    if (!e.is_regular_file()) continue;
    REQUIRE(slurp(e.path()) == slurp(dir / "again" / fs::relative(e.path(), dir / "scene")));
  }
}

TEST_CASE("usage errors") {
  ScratchDir dir;
  CHECK(cli({"synth", "--frames", "0", "--out", p(dir / "x")}).rc != 0);
  CHECK(cli({"synth", "--preset", "moon", "--out", p(dir / "x")}).rc != 0);
  CHECK(cli({"synth", "--pause", "5", "--out", p(dir / "x")}).rc != 0);
  CHECK(cli({}).rc != 0);
  CHECK(cli({"bogus"}).rc != 0);
  CHECK(cli({"collect", "--scene", p(dir.path()), "--out", p(dir / "y")}).rc != 0);
  const auto help = cli({"--help"});
  CHECK(help.rc == 0);
  CHECK(help.out.find("collect") != std::string::npos);
}

TEST_CASE("collect modes") {
  ScratchDir dir;
  const auto scene = p(dir / "scene");
  REQUIRE(
      cli({"synth", "--preset", "stop_and_go", "--seed", "3", "--frames", "120", "--out", scene})
          .rc == 0);

  SUBCASE("passive keeps everything") {
    const auto r = cli(
        {"collect", "--scene", scene, "--out", p(dir / "p"), "--mode", "passive", "--stride", "1"});
    REQUIRE(r.rc == 0);
    CHECK(read_dataset(dir / "p").entries.size() == 120);
    CHECK(count_lines(slurp(dir / "p" / "decisions.csv")) == 121);
  }
  SUBCASE("active-time keeps one frame per stop") {
    const auto r = cli({"collect", "--scene", scene, "--out", p(dir / "t"), "--mode", "active-time",
                        "--tau", "0.9", "--decisions", p(dir / "log.csv")});
    REQUIRE(r.rc == 0);
    const auto m = read_dataset(dir / "t");
    CHECK(m.entries.size() < 120);
    std::set<FrameId> kept;
    for (const auto& e : m.entries) kept.insert(e.frame_id);
    const auto cfg = SceneConfig::for_preset(Preset::kStopAndGo, 3, 120);
    REQUIRE_FALSE(cfg.pause_schedule.empty());
    for (const auto& pause : cfg.pause_schedule) {
      int in_run = 0;
      for (int k = pause.start; k < pause.start + pause.length; ++k) {
        in_run += static_cast<int>(kept.count(static_cast<FrameId>(k)));
      }
      CHECK(in_run == 1);
    }
    const auto log = slurp(dir / "log.csv");
    CHECK(log.rfind("frame_id,verdict,reason,uqi,instance_count,merged_count\n", 0) == 0);
    CHECK(count_lines(log) == 121);
  }
  SUBCASE("active-size hits the target") {
    const auto r = cli({"collect", "--scene", scene, "--out", p(dir / "s"), "--mode", "active-size",
                        "--target-frames", "50"});
    REQUIRE(r.rc == 0);
    CHECK(read_dataset(dir / "s").entries.size() == 50);
    CHECK(r.err.empty());
  }
  SUBCASE("active-size warns on exhaustion") {
    const auto r = cli({"collect", "--scene", scene, "--out", p(dir / "s"), "--mode", "active-size",
                        "--target-frames", "500"});
    REQUIRE(r.rc == 0);
    CHECK(read_dataset(dir / "s").entries.size() < 500);
    CHECK(r.err.find("warning") != std::string::npos);
  }
  SUBCASE("bad flag combinations") {
    CHECK(cli({"collect", "--scene", scene, "--out", p(dir / "s"), "--mode", "active-size"}).rc !=
          0);
    CHECK(cli({"collect", "--scene", scene, "--out", p(dir / "s"), "--mode", "active-time", "--tau",
               "0.98"})
              .rc != 0);
    CHECK(cli({"collect", "--scene", scene, "--out", p(dir / "s"), "--mode", "sometimes"}).rc != 0);
  }
}

TEST_CASE("label, stats, eval and compare") {
  ScratchDir dir;
  const auto scene = p(dir / "scene");
  REQUIRE(
      cli({"synth", "--preset", "dense_junction", "--seed", "5", "--frames", "30", "--out", scene})
          .rc == 0);
  REQUIRE(cli({"collect", "--scene", scene, "--out", p(dir / "d"), "--mode", "passive"}).rc == 0);
  REQUIRE(cli({"collect", "--scene", scene, "--out", p(dir / "t"), "--mode", "active-time"}).rc ==
          0);

  const auto l = cli({"label", scene, "--out", p(dir / "lab")});
  REQUIRE(l.rc == 0);
  // Labels from the scene equal the dataset's labels frame by frame.
  for (int i = 0; i < 30; ++i) {
    const auto name = std::to_string(i) + ".txt";
    REQUIRE(slurp(dir / "lab" / "labels" / name) == slurp(dir / "d" / "labels" / name));
  }

  const auto s = cli({"stats", p(dir / "d"), "--csv", p(dir / "stats.csv")});
  REQUIRE(s.rc == 0);
  CHECK(s.out.find("instances") != std::string::npos);
  CHECK(slurp(dir / "stats.csv").find("frames_kept,30\n") != std::string::npos);

  // Predictions identical to the truth, with a confidence column.
  fs::create_directories(dir / "preds");
  for (int i = 0; i < 30; ++i) {
    std::istringstream in(slurp(dir / "d" / "labels" / (std::to_string(i) + ".txt")));
    std::ofstream out(dir / "preds" / (std::to_string(i) + ".txt"));
    for (std::string line; std::getline(in, line);) out << line << " 1.0\n";
  }
  const auto e = cli({"eval", "--preds", p(dir / "preds"), "--truth", p(dir / "d"), "--iou", "0.5",
                      "--csv", p(dir / "eval.csv")});
  REQUIRE(e.rc == 0);
  CHECK(e.out.find("mAP@0.5 = 1.0000") != std::string::npos);
  CHECK(slurp(dir / "eval.csv").find("all,,") != std::string::npos);
  CHECK(cli({"eval", "--preds", p(dir / "preds"), "--truth", p(dir / "d"), "--ap-mode", "11"}).rc !=
        0);

  const auto c = cli({"compare", p(dir / "d"), p(dir / "t"), "--csv", p(dir / "cmp.csv")});
  REQUIRE(c.rc == 0);
  const auto csv = slurp(dir / "cmp.csv");
  CHECK(csv.rfind("metric,a,b,delta,ratio\n", 0) == 0);
  CHECK(count_lines(csv) == 6);

  CHECK(cli({"stats", p(dir / "nowhere")}).rc != 0);
}
