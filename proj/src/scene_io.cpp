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
#include "adacq/scene_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "json_codec.hpp"

namespace adacq {

namespace fs = std::filesystem;
using json_codec::json;

namespace {

constexpr int kSceneSchemaVersion = 1;

std::string frame_file(FrameId id) { return fmt::format("{}.png", id); }

void make_dirs(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", p.string(), ec.message()));
}

}  // namespace

SceneMetadata SceneMetadata::from_config(const SceneConfig& config) {
  SceneMetadata m;
  m.preset = std::string(to_string(config.preset));
  m.seed = config.seed;
  m.width = config.width;
  m.height = config.height;
  m.frame_period = config.frame_period;
  return m;
}

SceneWriter::SceneWriter(fs::path directory, SceneMetadata metadata)
    : dir_(std::move(directory)), meta_(std::move(metadata)) {
  for (const char* sub : {"rgb", "semantic", "instance"}) make_dirs(dir_ / sub);
  truth_ = "# frame_id instance_id class_id x_min y_min x_max y_max area occlusion\n";
}

void SceneWriter::add(const GroundTruthFrame& gt) {
  const Frame& f = gt.frame;
  if (f.width() != meta_.width || f.height() != meta_.height) {
    throw DimensionError(fmt::format("frame {}: {}x{} does not match scene size {}x{}", f.id(),
                                     f.width(), f.height(), meta_.width, meta_.height));
  }
  const auto name = frame_file(f.id());
  write_png(dir_ / "rgb" / name, f.rgb());
  write_png(dir_ / "semantic" / name, encode_semantic(f.semantic(), meta_.palette));
  write_png(dir_ / "instance" / name, encode_instance(f.instance(), f.semantic()));
  frames_.push_back({f.id(), f.timestamp()});
  for (const auto& r : gt.truth) {
    truth_ +=
        fmt::format("{} {} {} {} {} {} {} {} {:.17g}\n", f.id(), r.instance_id, r.class_id,
                    r.box.x_min, r.box.y_min, r.box.x_max, r.box.y_max, r.pixel_area, r.occlusion);
  }
}

void SceneWriter::finish() {
  json frames = json::array();
  for (const auto& f : frames_) frames.push_back({{"frame_id", f.id}, {"timestamp", f.timestamp}});
  json doc = {{"schema_version", kSceneSchemaVersion},
              {"source", meta_.source},
              {"preset", meta_.preset},
              {"seed", meta_.seed},
              {"width", meta_.width},
              {"height", meta_.height},
              {"frame_period", meta_.frame_period},
              {"palette", json_codec::palette_to_json(meta_.palette)},
              {"frames", frames}};
  json_codec::write_json_file(dir_ / "scene.json", doc);
  std::ofstream out(dir_ / "truth.txt", std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir_ / "truth.txt").string());
  out << truth_;
}

void export_scene(const std::vector<GroundTruthFrame>& frames, const fs::path& directory,
                  const SceneMetadata& metadata) {
  SceneWriter writer(directory, metadata);
  for (const auto& f : frames) writer.add(f);
  writer.finish();
}

SceneMetadata read_scene_metadata(const fs::path& directory, std::vector<FrameRef>* frames) {
  const auto doc = json_codec::read_json_file(directory / "scene.json");
  try {
    if (doc.at("schema_version").get<int>() != kSceneSchemaVersion) {
      throw ParseError(fmt::format("{}: unsupported scene schema_version {}",
                                   (directory / "scene.json").string(),
                                   doc.at("schema_version").dump()));
    }
    SceneMetadata m;
    m.source = doc.at("source").get<std::string>();
    m.preset = doc.at("preset").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.width = doc.at("width").get<int>();
    m.height = doc.at("height").get<int>();
    m.frame_period = doc.at("frame_period").get<double>();
    m.palette = json_codec::palette_from_json(doc.at("palette"));
    if (frames) {
      frames->clear();
      for (const auto& f : doc.at("frames")) {
        frames->push_back({f.at("frame_id").get<FrameId>(), f.at("timestamp").get<double>()});
      }
    }
    return m;
  } catch (const json_codec::json::exception& e) {
    throw ParseError((directory / "scene.json").string() + ": " + e.what());
  }
}

Frame load_scene_frame(const fs::path& directory, const FrameRef& ref, const Palette& palette) {
  const auto name = frame_file(ref.id);
  Image rgb = read_png(directory / "rgb" / name);
  const Image sem = read_png(directory / "semantic" / name);
  const Image inst = read_png(directory / "instance" / name);
  SemanticMask semantic;
  try {
    semantic = decode_semantic(sem, palette);
  } catch (const ParseError& e) {
    throw ParseError((directory / "semantic" / name).string() + ": " + e.what());
  }
  return Frame(ref.id, ref.timestamp, std::move(rgb), std::move(semantic), decode_instance(inst));
}

ImportedScene import_scene(const fs::path& directory) {
  ImportedScene scene;
  std::vector<FrameRef> refs;
  scene.metadata = read_scene_metadata(directory, &refs);

  std::map<FrameId, std::vector<InstanceRecord>> truth;
  const auto truth_path = directory / "truth.txt";
  std::ifstream in(truth_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + truth_path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    is.imbue(std::locale::classic());
    FrameId fid;
    unsigned inst_id, cls;
    InstanceRecord r;
    if (!(is >> fid >> inst_id >> cls >> r.box.x_min >> r.box.y_min >> r.box.x_max >> r.box.y_max >>
          r.pixel_area >> r.occlusion)) {
      throw ParseError(fmt::format("{}:{}: malformed truth line", truth_path.string(), n), n);
    }
    r.instance_id = static_cast<InstanceId>(inst_id);
    r.class_id = static_cast<ClassId>(cls);
    truth[fid].push_back(r);
  }

  for (const auto& ref : refs) {
    auto frame = load_scene_frame(directory, ref, scene.metadata.palette);
    auto it = truth.find(ref.id);
    std::vector<InstanceRecord> records =
        it == truth.end() ? std::vector<InstanceRecord>{} : std::move(it->second);
    scene.frames.push_back({std::move(frame), std::move(records)});
  }
  return scene;
}

SceneDirectorySource::SceneDirectorySource(fs::path directory) : dir_(std::move(directory)) {
  meta_ = read_scene_metadata(dir_, &frames_);
}

std::optional<Frame> SceneDirectorySource::next() {
  if (pos_ >= frames_.size()) return std::nullopt;
  return load_scene_frame(dir_, frames_[pos_++], meta_.palette);
}

}  // namespace adacq
