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
#ifndef ADACQ_SCENE_IO_HPP_
#define ADACQ_SCENE_IO_HPP_

// On-disk scene layout:
//
//   scene.json            metadata + frame list (id, timestamp)
//   truth.txt             one line per visible instance:
//                         frame_id instance_id class_id x_min y_min x_max y_max area occlusion
//   rgb/<id>.png          camera image
//   semantic/<id>.png     palette-colored classes
//   instance/<id>.png     R = class id, G*256+B = instance id

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adacq/palette.hpp"
#include "adacq/policy.hpp"
#include "adacq/synth.hpp"

namespace adacq {

struct SceneMetadata {
  std::string source = "synthetic";
  std::string preset;
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;
  double frame_period = 0.1;
  Palette palette = Palette::standard();

  static SceneMetadata from_config(const SceneConfig& config);
  friend bool operator==(const SceneMetadata&, const SceneMetadata&) = default;
};

struct FrameRef {
  FrameId id = 0;
  double timestamp = 0;
  friend bool operator==(const FrameRef&, const FrameRef&) = default;
};

// Incremental exporter; call finish() once all frames were added.
class SceneWriter {
 public:
  SceneWriter(std::filesystem::path directory, SceneMetadata metadata);
  void add(const GroundTruthFrame& frame);
  void finish();

 private:
  std::filesystem::path dir_;
  SceneMetadata meta_;
  std::vector<FrameRef> frames_;
  std::string truth_;
};

void export_scene(const std::vector<GroundTruthFrame>& frames,
                  const std::filesystem::path& directory, const SceneMetadata& metadata);

struct ImportedScene {
  SceneMetadata metadata;
  std::vector<GroundTruthFrame> frames;
};

ImportedScene import_scene(const std::filesystem::path& directory);

SceneMetadata read_scene_metadata(const std::filesystem::path& directory,
                                  std::vector<FrameRef>* frames = nullptr);

// Streams frames of an exported scene in file order, decoding lazily.
class SceneDirectorySource : public FrameSource {
 public:
  explicit SceneDirectorySource(std::filesystem::path directory);
  std::optional<Frame> next() override;
  double frame_period() const override { return meta_.frame_period; }
  const SceneMetadata& metadata() const { return meta_; }
  std::size_t size() const { return frames_.size(); }

 private:
  std::filesystem::path dir_;
  SceneMetadata meta_;
  std::vector<FrameRef> frames_;
  std::size_t pos_ = 0;
};

Frame load_scene_frame(const std::filesystem::path& directory, const FrameRef& ref,
                       const Palette& palette);

}  // namespace adacq

#endif  // ADACQ_SCENE_IO_HPP_
