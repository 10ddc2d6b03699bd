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
#ifndef ADACQ_DATASET_IO_HPP_
#define ADACQ_DATASET_IO_HPP_

// Dataset directory layout:
//
//   manifest.json        schema_version 1, see README for the fields
//   images/<id>.png      kept camera frames
//   labels/<id>.txt      YOLO labels for the matching image
//
// Label files are the source of truth; statistics stored in the manifest
// are a cache and are always recomputed on read.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adacq/labeler.hpp"
#include "adacq/palette.hpp"
#include "adacq/policy.hpp"
#include "adacq/quality.hpp"

namespace adacq {

inline constexpr int kManifestSchemaVersion = 1;

enum class CollectionMode { kPassive, kActiveTime, kActiveSize };

std::string_view to_string(CollectionMode m);
CollectionMode parse_collection_mode(std::string_view s);

struct ManifestEntry {
  FrameId frame_id = 0;
  double timestamp = 0;
  std::string image;  // relative to the dataset root
  std::string label;
  std::uint32_t image_crc = 0;
  std::uint32_t label_crc = 0;
  std::int64_t label_count = 0;
  FrameQuality quality;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  int schema_version = kManifestSchemaVersion;
  std::string name;
  std::string preset;  // map / scene preset identifier
  CollectionMode mode = CollectionMode::kPassive;
  int stride = 1;  // passive only
  PolicyConfig policy;
  Palette palette = Palette::standard();
  ExportClassMap export_classes = ExportClassMap::standard();
  int width = 0;
  int height = 0;
  double frame_period = 0.1;
  std::vector<ManifestEntry> entries;
  CollectionStats stats;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// Streams kept frames into a dataset directory. Labels are derived from the
// frame's masks (instances >= policy.min_area of exported classes).
class DatasetWriter {
 public:
  // `header` supplies everything except entries and stats.
  DatasetWriter(std::filesystem::path directory, DatasetManifest header);
  void add(const Frame& frame, const FrameQuality& quality);
  // Writes manifest.json and returns the complete manifest.
  const DatasetManifest& finish(const CollectionStats& stats);

 private:
  std::filesystem::path dir_;
  DatasetManifest manifest_;
};

struct KeptFrame {
  Frame frame;
  FrameQuality quality;
};

DatasetManifest write_dataset(const std::vector<KeptFrame>& entries,
                              const std::filesystem::path& directory, const DatasetManifest& header,
                              const CollectionStats& stats);

// Parses manifest.json and checks every entry: files present, checksums and
// image shape as recorded, label files parse. All problems are collected into
// one IntegrityError.
DatasetManifest read_dataset(const std::filesystem::path& directory);

// Parses manifest.json only.
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct DatasetStats {
  CollectionStats stats;                        // frames/instances recounted from label files
  std::map<int, std::int64_t> class_histogram;  // export class id -> instances
  std::vector<std::string> warnings;            // disagreements with the manifest
};

DatasetStats dataset_stats(const std::filesystem::path& directory);

// metric,value rows followed by class_<id>,count rows.
void write_stats_csv(std::ostream& out, const DatasetStats& stats);
void print_stats_table(std::ostream& out, const std::string& name, const DatasetStats& stats);

struct DatasetSummary {
  std::string name;
  std::int64_t frames = 0;
  std::int64_t instances = 0;
  double instances_per_frame = 0;
  double merged_frame_rate = 0;
  double wall_clock_equivalent = 0;
};

struct ComparisonRow {
  std::string metric;
  double a = 0;
  double b = 0;
  double delta = 0;             // b - a
  std::optional<double> ratio;  // b / a, empty when a == 0
};

struct ComparisonReport {
  DatasetSummary a;
  DatasetSummary b;
  std::vector<ComparisonRow> rows;
};

DatasetSummary summarize_dataset(const std::filesystem::path& directory);
ComparisonReport compare_datasets(const DatasetSummary& a, const DatasetSummary& b);
ComparisonReport compare_datasets(const std::filesystem::path& a, const std::filesystem::path& b);

// metric,a,b,delta,ratio
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
void print_comparison_table(std::ostream& out, const ComparisonReport& report);

// zlib crc32 of a file's bytes.
std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace adacq

#endif  // ADACQ_DATASET_IO_HPP_
