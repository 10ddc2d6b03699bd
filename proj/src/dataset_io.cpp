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
#include "adacq/dataset_io.hpp"

#include <zlib.h>

#include <fstream>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

#include "json_codec.hpp"

namespace adacq {

namespace fs = std::filesystem;
using json_codec::json;

std::string_view to_string(CollectionMode m) {
  switch (m) {
    case CollectionMode::kPassive: return "passive";
    case CollectionMode::kActiveTime: return "active-time";
    case CollectionMode::kActiveSize: return "active-size";
  }
  return "?";
}

CollectionMode parse_collection_mode(std::string_view s) {
  for (auto m :
       {CollectionMode::kPassive, CollectionMode::kActiveTime, CollectionMode::kActiveSize}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError(fmt::format("unknown collection mode '{}'", s));
}

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

// ---------------------------------------------------------------------------
// Manifest JSON

namespace {

json manifest_to_json(const DatasetManifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"frame_id", e.frame_id},
                       {"timestamp", e.timestamp},
                       {"image", e.image},
                       {"label", e.label},
                       {"image_crc", e.image_crc},
                       {"label_crc", e.label_crc},
                       {"label_count", e.label_count},
                       {"quality", json_codec::quality_to_json(e.quality)}});
  }
  return {{"schema_version", m.schema_version},
          {"name", m.name},
          {"preset", m.preset},
          {"collection_mode", std::string(to_string(m.mode))},
          {"stride", m.stride},
          {"policy", json_codec::policy_to_json(m.policy)},
          {"palette", json_codec::palette_to_json(m.palette)},
          {"export_classes", json_codec::export_map_to_json(m.export_classes)},
          {"width", m.width},
          {"height", m.height},
          {"frame_period", m.frame_period},
          {"entries", entries},
          {"stats", json_codec::stats_to_json(m.stats)}};
}

DatasetManifest manifest_from_json(const json& j) {
  DatasetManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kManifestSchemaVersion) {
    throw ParseError(fmt::format("unsupported manifest schema_version {}", m.schema_version));
  }
  m.name = j.at("name").get<std::string>();
  m.preset = j.at("preset").get<std::string>();
  m.mode = parse_collection_mode(j.at("collection_mode").get<std::string>());
  m.stride = j.at("stride").get<int>();
  m.policy = json_codec::policy_from_json(j.at("policy"));
  m.palette = json_codec::palette_from_json(j.at("palette"));
  m.export_classes = json_codec::export_map_from_json(j.at("export_classes"));
  m.width = j.at("width").get<int>();
  m.height = j.at("height").get<int>();
  m.frame_period = j.at("frame_period").get<double>();
  for (const auto& e : j.at("entries")) {
    ManifestEntry me;
    me.frame_id = e.at("frame_id").get<FrameId>();
    me.timestamp = e.at("timestamp").get<double>();
    me.image = e.at("image").get<std::string>();
    me.label = e.at("label").get<std::string>();
    me.image_crc = e.at("image_crc").get<std::uint32_t>();
    me.label_crc = e.at("label_crc").get<std::uint32_t>();
    me.label_count = e.at("label_count").get<std::int64_t>();
    me.quality = json_codec::quality_from_json(e.at("quality"));
    m.entries.push_back(std::move(me));
  }
  m.stats = json_codec::stats_from_json(j.at("stats"));
  return m;
}

}  // namespace

DatasetManifest read_manifest(const fs::path& path) {
  const auto doc = json_codec::read_json_file(path);
  try {
    return manifest_from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  json_codec::write_json_file(path, manifest_to_json(manifest));
}

// ---------------------------------------------------------------------------
// Writing

DatasetWriter::DatasetWriter(fs::path directory, DatasetManifest header)
    : dir_(std::move(directory)), manifest_(std::move(header)) {
  manifest_.entries.clear();
  for (const char* sub : {"images", "labels"}) {
    std::error_code ec;
    fs::create_directories(dir_ / sub, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", (dir_ / sub).string(), ec.message()));
  }
}

void DatasetWriter::add(const Frame& frame, const FrameQuality& quality) {
  if (manifest_.width == 0) {
    manifest_.width = frame.width();
    manifest_.height = frame.height();
  } else if (frame.width() != manifest_.width || frame.height() != manifest_.height) {
    throw DimensionError(fmt::format("frame {}: size differs from the dataset's {}x{}", frame.id(),
                                     manifest_.width, manifest_.height));
  }
  ManifestEntry e;
  e.frame_id = frame.id();
  e.timestamp = frame.timestamp();
  e.image = fmt::format("images/{}.png", frame.id());
  e.label = fmt::format("labels/{}.txt", frame.id());
  const auto records =
      exportable(extract_instances(frame, manifest_.policy.min_area), manifest_.export_classes);
  const auto labels =
      to_yolo_labels(records, frame.width(), frame.height(), manifest_.export_classes);
  write_png(dir_ / e.image, frame.rgb());
  write_label_file(dir_ / e.label, labels);
  e.image_crc = file_crc32(dir_ / e.image);
  e.label_crc = file_crc32(dir_ / e.label);
  e.label_count = static_cast<std::int64_t>(labels.size());
  e.quality = quality;
  manifest_.entries.push_back(std::move(e));
}

const DatasetManifest& DatasetWriter::finish(const CollectionStats& stats) {
  manifest_.stats = stats;
  write_manifest(dir_ / "manifest.json", manifest_);
  return manifest_;
}

DatasetManifest write_dataset(const std::vector<KeptFrame>& entries, const fs::path& directory,
                              const DatasetManifest& header, const CollectionStats& stats) {
  DatasetWriter writer(directory, header);
  for (const auto& k : entries) writer.add(k.frame, k.quality);
  return writer.finish(stats);
}

// ---------------------------------------------------------------------------
// Reading

DatasetManifest read_dataset(const fs::path& directory) {
  auto manifest = read_manifest(directory / "manifest.json");
  std::vector<std::string> issues;
  for (const auto& e : manifest.entries) {
    const auto where = fmt::format("frame {}", e.frame_id);
    const auto image = directory / e.image;
    const auto label = directory / e.label;
    if (!fs::exists(image)) {
      issues.push_back(fmt::format("{}: missing image {}", where, e.image));
    } else {
      try {
        if (file_crc32(image) != e.image_crc) {
          issues.push_back(fmt::format("{}: image {} checksum mismatch", where, e.image));
        }
        const auto img = read_png(image);
        if (img.width() != manifest.width || img.height() != manifest.height) {
          issues.push_back(fmt::format("{}: image {} is {}x{}, manifest says {}x{}", where, e.image,
                                       img.width(), img.height(), manifest.width, manifest.height));
        }
      } catch (const Error& err) {
        issues.push_back(fmt::format("{}: {}", where, err.what()));
      }
    }
    if (!fs::exists(label)) {
      issues.push_back(fmt::format("{}: missing label file {}", where, e.label));
    } else {
      try {
        if (file_crc32(label) != e.label_crc) {
          issues.push_back(fmt::format("{}: label file {} checksum mismatch", where, e.label));
        }
        const auto n = static_cast<std::int64_t>(read_label_file(label).size());
        if (n != e.label_count) {
          issues.push_back(
              fmt::format("{}: {} labels on disk, manifest says {}", where, n, e.label_count));
        }
      } catch (const Error& err) {
        issues.push_back(fmt::format("{}: {}", where, err.what()));
      }
    }
  }
  if (!issues.empty()) {
    std::string msg = fmt::format("{}: {} problem(s)", directory.string(), issues.size());
    for (const auto& i : issues) msg += "\n  " + i;
    throw IntegrityError(msg, std::move(issues));
  }
  return manifest;
}

// ---------------------------------------------------------------------------
// Statistics and comparison

namespace {

DatasetStats stats_for(const fs::path& directory, const DatasetManifest& m) {
  DatasetStats out;
  out.stats.frames_seen = m.stats.frames_seen;
  out.stats.merged_frames_seen = m.stats.merged_frames_seen;
  out.stats.wall_clock_equivalent = m.stats.wall_clock_equivalent;
  out.stats.target_frames = m.stats.target_frames;
  out.stats.quota_reached = m.stats.quota_reached;
  out.stats.frames_kept = static_cast<std::int64_t>(m.entries.size());
  for (const auto& e : m.entries) {
    const auto labels = read_label_file(directory / e.label);
    const auto n = static_cast<std::int64_t>(labels.size());
    out.stats.instances_kept += n;
    for (const auto& l : labels) ++out.class_histogram[l.class_id];
    if (n != e.label_count) {
      out.warnings.push_back(fmt::format("frame {}: {} labels on disk, manifest says {}",
                                         e.frame_id, n, e.label_count));
    }
  }
  out.stats.instances_per_kept_frame = out.stats.frames_kept > 0
                                           ? static_cast<double>(out.stats.instances_kept) /
                                                 static_cast<double>(out.stats.frames_kept)
                                           : 0.0;
  if (m.stats.frames_kept != out.stats.frames_kept) {
    out.warnings.push_back(fmt::format("manifest stats claim {} kept frames, {} entries present",
                                       m.stats.frames_kept, out.stats.frames_kept));
  }
  if (m.stats.instances_kept != out.stats.instances_kept) {
    out.warnings.push_back(fmt::format("manifest stats claim {} instances, labels hold {}",
                                       m.stats.instances_kept, out.stats.instances_kept));
  }
  if (m.stats.frames_kept > m.stats.frames_seen) {
    out.warnings.push_back("manifest stats: frames_kept exceeds frames_seen");
  }
  return out;
}

}  // namespace

DatasetStats dataset_stats(const fs::path& directory) {
  return stats_for(directory, read_manifest(directory / "manifest.json"));
}

void write_stats_csv(std::ostream& out, const DatasetStats& s) {
  out << "metric,value\n";
  out << fmt::format("frames_seen,{}\n", s.stats.frames_seen);
  out << fmt::format("frames_kept,{}\n", s.stats.frames_kept);
  out << fmt::format("instances_kept,{}\n", s.stats.instances_kept);
  out << fmt::format("instances_per_kept_frame,{:.6f}\n", s.stats.instances_per_kept_frame);
  out << fmt::format("merged_frames_seen,{}\n", s.stats.merged_frames_seen);
  out << fmt::format("wall_clock_equivalent,{:.6f}\n", s.stats.wall_clock_equivalent);
  for (const auto& [cls, n] : s.class_histogram) out << fmt::format("class_{},{}\n", cls, n);
}

void print_stats_table(std::ostream& out, const std::string& name, const DatasetStats& s) {
  out << fmt::format("dataset {}\n", name);
  out << fmt::format("  frames seen / kept     {} / {}\n", s.stats.frames_seen,
                     s.stats.frames_kept);
  out << fmt::format("  instances              {}\n", s.stats.instances_kept);
  out << fmt::format("  instances per frame    {:.4f}\n", s.stats.instances_per_kept_frame);
  out << fmt::format("  merged frames seen     {}\n", s.stats.merged_frames_seen);
  out << fmt::format("  wall-clock equivalent  {:.2f} s\n", s.stats.wall_clock_equivalent);
  for (const auto& [cls, n] : s.class_histogram) {
    out << fmt::format("  class {:<16} {}\n", cls, n);
  }
}

DatasetSummary summarize_dataset(const fs::path& directory) {
  const auto m = read_manifest(directory / "manifest.json");
  const auto s = stats_for(directory, m);
  DatasetSummary out;
  out.name = m.name;
  out.frames = s.stats.frames_kept;
  out.instances = s.stats.instances_kept;
  out.instances_per_frame = s.stats.instances_per_kept_frame;
  std::int64_t merged = 0;
  for (const auto& e : m.entries) merged += e.quality.merged_component_count > 0;
  out.merged_frame_rate =
      out.frames > 0 ? static_cast<double>(merged) / static_cast<double>(out.frames) : 0.0;
  out.wall_clock_equivalent = s.stats.wall_clock_equivalent;
  return out;
}

ComparisonReport compare_datasets(const DatasetSummary& a, const DatasetSummary& b) {
  ComparisonReport r{a, b, {}};
  const auto row = [&](std::string metric, double va, double vb) {
    ComparisonRow cr{std::move(metric), va, vb, vb - va, std::nullopt};
    if (va != 0.0) cr.ratio = vb / va;
    r.rows.push_back(std::move(cr));
  };
  row("frames", static_cast<double>(a.frames), static_cast<double>(b.frames));
  row("instances", static_cast<double>(a.instances), static_cast<double>(b.instances));
  row("instances_per_frame", a.instances_per_frame, b.instances_per_frame);
  row("merged_frame_rate", a.merged_frame_rate, b.merged_frame_rate);
  row("wall_clock_equivalent", a.wall_clock_equivalent, b.wall_clock_equivalent);
  return r;
}

ComparisonReport compare_datasets(const fs::path& a, const fs::path& b) {
  return compare_datasets(summarize_dataset(a), summarize_dataset(b));
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& r) {
  out << "metric,a,b,delta,ratio\n";
  for (const auto& row : r.rows) {
    out << fmt::format("{},{:.6f},{:.6f},{:.6f},{}\n", row.metric, row.a, row.b, row.delta,
                       row.ratio ? fmt::format("{:.6f}", *row.ratio) : std::string());
  }
}

void print_comparison_table(std::ostream& out, const ComparisonReport& r) {
  out << fmt::format("{:<24} {:>14} {:>14} {:>12} {:>8}\n", "metric",
                     r.a.name.empty() ? "a" : r.a.name, r.b.name.empty() ? "b" : r.b.name, "delta",
                     "ratio");
  for (const auto& row : r.rows) {
    out << fmt::format("{:<24} {:>14.4f} {:>14.4f} {:>12.4f} {:>8}\n", row.metric, row.a, row.b,
                       row.delta, row.ratio ? fmt::format("{:.4f}", *row.ratio) : "-");
  }
}

}  // namespace adacq
