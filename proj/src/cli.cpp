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
#include "adacq/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <CLI11.hpp>

#include "adacq/dataset_io.hpp"
#include "adacq/evaluation.hpp"
#include "adacq/labeler.hpp"
#include "adacq/policy.hpp"
#include "adacq/scene_io.hpp"
#include "adacq/synth.hpp"

namespace adacq {

namespace fs = std::filesystem;

namespace {

struct SynthOptions {
  std::string preset = "stop_and_go";
  std::uint64_t seed = 0;
  int frames = 120;
  int width = 160;
  int height = 120;
  std::optional<int> vehicles;
  std::optional<int> lights;
  std::optional<double> ego_speed;
  std::vector<std::string> pauses;
  bool no_pauses = false;
  std::string out;
};

struct CollectOptions {
  std::string scene;
  std::string out;
  std::string mode;
  std::string name;
  std::string decisions;
  std::string reference = "previous-kept";
  int stride = 1;
  std::optional<std::int64_t> target_frames;
  PolicyConfig policy;
};

struct LabelOptions {
  std::string scene;
  std::string out;
  int min_area = kDefaultMinArea;
};

struct StatsOptions {
  std::string dataset;
  std::string csv;
};

struct EvalOptions {
  std::string preds;
  std::string truth;
  double iou = 0.5;
  std::string ap_mode = "101";
  double conf = 0.25;
  std::string csv;
};

struct CompareOptions {
  std::string a;
  std::string b;
  std::string csv;
};

Pause parse_pause(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("--pause expects START:LENGTH, got '{}'", s));
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  if (o.frames < 1) throw ConfigError("--frames must be >= 1");
  auto cfg = SceneConfig::for_preset(parse_preset(o.preset), o.seed, o.frames);
  cfg.width = o.width;
  cfg.height = o.height;
  if (o.vehicles) cfg.n_vehicles = *o.vehicles;
  if (o.lights) cfg.n_lights = *o.lights;
  if (o.ego_speed) cfg.ego_speed = *o.ego_speed;
  if (o.no_pauses) cfg.pause_schedule.clear();
  if (!o.pauses.empty()) {
    cfg.pause_schedule.clear();
    for (const auto& p : o.pauses) cfg.pause_schedule.push_back(parse_pause(p));
  }
  SceneGenerator gen(cfg);
  SceneWriter writer(o.out, SceneMetadata::from_config(cfg));
  std::int64_t frames = 0;
  std::int64_t instances = 0;
  while (auto f = gen.next_with_truth()) {
    writer.add(*f);
    ++frames;
    instances += static_cast<std::int64_t>(f->truth.size());
  }
  writer.finish();
  out << fmt::format("synth: {} frames of {} (seed {}) -> {}; {:.3f} visible instances/frame\n",
                     frames, o.preset, o.seed, o.out,
                     static_cast<double>(instances) / static_cast<double>(frames));
  return 0;
}

int cmd_collect(CollectOptions o, std::ostream& out, std::ostream& err) {
  const auto mode = parse_collection_mode(o.mode);
  o.policy.reference_mode = parse_reference_mode(o.reference);
  if (mode == CollectionMode::kActiveSize && !o.target_frames) {
    throw ConfigError("--mode active-size requires --target-frames");
  }
  if (mode != CollectionMode::kActiveSize && o.target_frames) {
    throw ConfigError("--target-frames only applies to --mode active-size");
  }
  if (mode != CollectionMode::kPassive && o.stride != 1) {
    throw ConfigError("--stride only applies to --mode passive");
  }
  if (mode != CollectionMode::kPassive) o.policy.validate();

  SceneDirectorySource source(o.scene);
  DatasetManifest header;
  header.name = o.name.empty() ? fs::path(o.out).filename().string() : o.name;
  if (header.name.empty()) header.name = fs::path(o.out).parent_path().filename().string();
  header.preset = source.metadata().preset;
  header.mode = mode;
  header.stride = o.stride;
  header.policy = o.policy;
  header.palette = source.metadata().palette;
  header.width = source.metadata().width;
  header.height = source.metadata().height;
  header.frame_period = source.frame_period();

  DatasetWriter writer(o.out, header);
  const KeepSink sink = [&](const Frame& f, const AcquisitionDecision& d) {
    writer.add(f, d.quality);
  };
  CollectionResult result;
  switch (mode) {
    case CollectionMode::kPassive:
      result = collect_passive(source, o.stride, o.policy, sink);
      break;
    case CollectionMode::kActiveTime: result = collect_active_time(source, o.policy, sink); break;
    case CollectionMode::kActiveSize:
      result = collect_active_size(source, o.policy, *o.target_frames, sink);
      break;
  }
  writer.finish(result.stats);

  const fs::path log_path =
      o.decisions.empty() ? fs::path(o.out) / "decisions.csv" : fs::path(o.decisions);
  auto log = open_output(log_path);
  write_decision_log(log, result.decisions);

  const auto& s = result.stats;
  out << fmt::format("collect ({}): kept {} of {} frames, {} instances ({:.3f}/frame) -> {}\n",
                     o.mode, s.frames_kept, s.frames_seen, s.instances_kept,
                     s.instances_per_kept_frame, o.out);
  if (mode == CollectionMode::kActiveSize && !s.quota_reached) {
    err << fmt::format("warning: stream exhausted after {} frames; kept {} of the {} requested\n",
                       s.frames_seen, s.frames_kept, *o.target_frames);
  }
  return 0;
}

int cmd_label(const LabelOptions& o, std::ostream& out) {
  SceneDirectorySource source(o.scene);
  const fs::path labels_dir = fs::path(o.out) / "labels";
  fs::create_directories(labels_dir);
  std::int64_t frames = 0;
  std::int64_t labels = 0;
  while (auto f = source.next()) {
    const auto records = exportable(extract_instances(*f, o.min_area));
    const auto yolo = to_yolo_labels(records, f->width(), f->height());
    write_label_file(labels_dir / fmt::format("{}.txt", f->id()), yolo);
    ++frames;
    labels += static_cast<std::int64_t>(yolo.size());
  }
  out << fmt::format("label: {} frames, {} labels -> {}\n", frames, labels, labels_dir.string());
  return 0;
}

int cmd_stats(const StatsOptions& o, std::ostream& out, std::ostream& err) {
  const auto manifest = read_manifest(fs::path(o.dataset) / "manifest.json");
  const auto stats = dataset_stats(o.dataset);
  print_stats_table(out, manifest.name, stats);
  for (const auto& w : stats.warnings) err << "warning: " << w << '\n';
  if (!o.csv.empty()) {
    auto csv = open_output(o.csv);
    write_stats_csv(csv, stats);
  }
  return 0;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  EvalConfig cfg;
  cfg.iou_threshold = o.iou;
  cfg.confidence_cut = o.conf;
  if (o.ap_mode == "101") {
    cfg.ap_mode = ApMode::kPoints101;
  } else if (o.ap_mode == "all-points") {
    cfg.ap_mode = ApMode::kAllPoints;
  } else {
    throw ConfigError(fmt::format("--ap-mode must be 101 or all-points, got '{}'", o.ap_mode));
  }
  const auto manifest = read_manifest(fs::path(o.truth) / "manifest.json");
  std::vector<GroundTruthBox> truths;
  std::vector<Detection> preds;
  for (const auto& e : manifest.entries) {
    for (const auto& l : read_label_file(fs::path(o.truth) / e.label)) {
      truths.push_back(
          {e.frame_id, l.class_id, yolo_to_pixel_box(l.box, manifest.width, manifest.height)});
    }
    const auto pred_path = fs::path(o.preds) / fmt::format("{}.txt", e.frame_id);
    if (fs::exists(pred_path)) {
      auto d = read_prediction_file(pred_path, e.frame_id, manifest.width, manifest.height);
      preds.insert(preds.end(), d.begin(), d.end());
    }
  }
  const auto report = evaluate(preds, truths, cfg);
  print_eval_table(out, report);
  if (!o.csv.empty()) {
    auto csv = open_output(o.csv);
    write_eval_csv(csv, report);
  }
  return 0;
}

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  const auto report = compare_datasets(fs::path(o.a), fs::path(o.b));
  print_comparison_table(out, report);
  if (!o.csv.empty()) {
    auto csv = open_output(o.csv);
    write_comparison_csv(csv, report);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Active data acquisition toolkit: synthetic scenes, frame filtering, "
      "YOLO labeling and detection evaluation",
      "adacq"};
  app.require_subcommand(1);

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Generate and export a synthetic scene");
  synth
      ->add_option("--preset", so.preset,
                   "dense_junction | sparse_road | stop_and_go | mixed_traffic")
      ->capture_default_str();
  synth->add_option("--seed", so.seed, "Random seed")->capture_default_str();
  synth->add_option("--frames", so.frames, "Number of frames")->capture_default_str();
  synth->add_option("--width", so.width, "Frame width in pixels")->capture_default_str();
  synth->add_option("--height", so.height, "Frame height in pixels")->capture_default_str();
  synth->add_option("--vehicles", so.vehicles, "Override the preset's vehicle count");
  synth->add_option("--lights", so.lights, "Override the preset's traffic light count");
  synth->add_option("--ego-speed", so.ego_speed, "Background scroll in pixels/frame");
  synth->add_option("--pause", so.pauses, "Camera stop START:LENGTH (repeatable)");
  synth->add_flag("--no-pauses", so.no_pauses, "Drop the preset's stops");
  synth->add_option("--out", so.out, "Output scene directory")->required();

  CollectOptions co;
  auto* collect = app.add_subcommand("collect", "Collect a dataset from an exported scene");
  collect->add_option("--scene", co.scene, "Scene directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  collect->add_option("--out", co.out, "Output dataset directory")->required();
  collect->add_option("--mode", co.mode, "passive | active-time | active-size")->required();
  collect->add_option("--name", co.name, "Dataset name (default: output directory name)");
  collect->add_option("--stride", co.stride, "Passive: keep every n-th frame")
      ->capture_default_str();
  collect->add_option("--target-frames", co.target_frames, "Active-size: frames to keep");
  collect->add_option("--tau", co.policy.tau, "Similarity threshold")->capture_default_str();
  collect->add_option("--window", co.policy.window, "UQI tile size")->capture_default_str();
  collect
      ->add_option("--min-instances", co.policy.min_instances, "Drop frames with fewer instances")
      ->capture_default_str();
  collect->add_flag("--drop-merged", co.policy.drop_merged, "Drop frames with merged regions");
  collect->add_option("--max-merged", co.policy.max_merged, "Merged regions tolerated")
      ->capture_default_str();
  collect
      ->add_option("--density-boost", co.policy.density_boost, "Threshold bonus for dense frames")
      ->capture_default_str();
  collect->add_option("--boost-at", co.policy.boost_at, "Instance count that triggers the bonus")
      ->capture_default_str();
  collect->add_option("--min-area", co.policy.min_area, "Smallest instance in pixels")
      ->capture_default_str();
  collect->add_option("--reference", co.reference, "previous-kept | previous-raw")
      ->capture_default_str();
  collect->add_option("--decisions", co.decisions,
                      "Decision log CSV (default: <out>/decisions.csv)");

  LabelOptions lo;
  auto* label = app.add_subcommand("label", "Write YOLO labels for every frame of a scene");
  label->add_option("scene", lo.scene, "Scene directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  label->add_option("--out", lo.out, "Output directory (labels/ is created inside)")->required();
  label->add_option("--min-area", lo.min_area, "Smallest instance in pixels")
      ->capture_default_str();

  StatsOptions sto;
  auto* stats = app.add_subcommand("stats", "Recount dataset statistics from its label files");
  stats->add_option("dataset", sto.dataset, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  stats->add_option("--csv", sto.csv, "Also write the statistics as CSV");

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate YOLO-format predictions against a dataset");
  eval->add_option("--preds", eo.preds, "Directory of <frame_id>.txt prediction files")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--truth", eo.truth, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--iou", eo.iou, "IoU threshold for TP/FP/FN")->capture_default_str();
  eval->add_option("--ap-mode", eo.ap_mode, "101 | all-points")->capture_default_str();
  eval->add_option("--conf", eo.conf, "Confidence cut for precision/recall/F1")
      ->capture_default_str();
  eval->add_option("--csv", eo.csv, "Also write the report as CSV");

  CompareOptions cpo;
  auto* compare = app.add_subcommand("compare", "Compare two datasets");
  compare->add_option("a", cpo.a, "First dataset")->required()->check(CLI::ExistingDirectory);
  compare->add_option("b", cpo.b, "Second dataset")->required()->check(CLI::ExistingDirectory);
  compare->add_option("--csv", cpo.csv, "Also write the comparison as CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth) return cmd_synth(so, out);
    if (*collect) return cmd_collect(co, out, err);
    if (*label) return cmd_label(lo, out);
    if (*stats) return cmd_stats(sto, out, err);
    if (*eval) return cmd_eval(eo, out);
    if (*compare) return cmd_compare(cpo, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace adacq
