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
// JSON codecs shared by the scene and dataset writers.
#ifndef ADACQ_SRC_JSON_CODEC_HPP_
#define ADACQ_SRC_JSON_CODEC_HPP_

#include <fstream>
#include <string>

#include <json.hpp>

#include "adacq/errors.hpp"
#include "adacq/labeler.hpp"
#include "adacq/palette.hpp"
#include "adacq/policy.hpp"
#include "adacq/quality.hpp"

namespace adacq::json_codec {

using nlohmann::json;

inline json palette_to_json(const Palette& p) {
  json arr = json::array();
  for (const auto& e : p.entries()) {
    arr.push_back({{"id", e.id},
                   {"name", e.name},
                   {"color", {e.color.r, e.color.g, e.color.b}},
                   {"detectable", e.detectable}});
  }
  return arr;
}

inline Palette palette_from_json(const json& j) {
  std::vector<PaletteEntry> entries;
  for (const auto& e : j) {
    const auto c = e.at("color");
    entries.push_back(
        {e.at("id").get<ClassId>(),
         e.at("name").get<std::string>(),
         {c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(), c.at(2).get<std::uint8_t>()},
         e.at("detectable").get<bool>()});
  }
  return Palette(std::move(entries));
}

inline json export_map_to_json(const ExportClassMap& m) {
  json arr = json::array();
  for (const auto& [cls, id] : m.mapping()) arr.push_back({{"class_id", cls}, {"export_id", id}});
  return arr;
}

inline ExportClassMap export_map_from_json(const json& j) {
  std::map<ClassId, int> m;
  for (const auto& e : j) m.emplace(e.at("class_id").get<ClassId>(), e.at("export_id").get<int>());
  return ExportClassMap(std::move(m));
}

inline json policy_to_json(const PolicyConfig& p) {
  return {{"tau", p.tau},
          {"window", p.window},
          {"min_instances", p.min_instances},
          {"drop_merged", p.drop_merged},
          {"max_merged", p.max_merged},
          {"density_boost", p.density_boost},
          {"boost_at", p.boost_at},
          {"min_area", p.min_area},
          {"reference_mode", std::string(to_string(p.reference_mode))}};
}

inline PolicyConfig policy_from_json(const json& j) {
  PolicyConfig p;
  p.tau = j.at("tau").get<double>();
  p.window = j.at("window").get<int>();
  p.min_instances = j.at("min_instances").get<int>();
  p.drop_merged = j.at("drop_merged").get<bool>();
  p.max_merged = j.at("max_merged").get<int>();
  p.density_boost = j.at("density_boost").get<double>();
  p.boost_at = j.at("boost_at").get<int>();
  p.min_area = j.at("min_area").get<int>();
  p.reference_mode = parse_reference_mode(j.at("reference_mode").get<std::string>());
  return p;
}

inline json quality_to_json(const FrameQuality& q) {
  json occ = json::array();
  for (const auto& [id, d] : q.per_instance_occlusion) occ.push_back({id, d});
  return {{"uqi", q.uqi_vs_reference ? json(*q.uqi_vs_reference) : json(nullptr)},
          {"instance_count", q.instance_count},
          {"merged_component_count", q.merged_component_count},
          {"occlusion", occ}};
}

inline FrameQuality quality_from_json(const json& j) {
  FrameQuality q;
  if (!j.at("uqi").is_null()) q.uqi_vs_reference = j.at("uqi").get<double>();
  q.instance_count = j.at("instance_count").get<int>();
  q.merged_component_count = j.at("merged_component_count").get<int>();
  for (const auto& pair : j.at("occlusion")) {
    q.per_instance_occlusion.emplace(pair.at(0).get<InstanceId>(), pair.at(1).get<double>());
  }
  return q;
}

inline json stats_to_json(const CollectionStats& s) {
  return {{"frames_seen", s.frames_seen},
          {"frames_kept", s.frames_kept},
          {"instances_kept", s.instances_kept},
          {"instances_per_kept_frame", s.instances_per_kept_frame},
          {"merged_frames_seen", s.merged_frames_seen},
          {"wall_clock_equivalent", s.wall_clock_equivalent},
          {"target_frames", s.target_frames ? json(*s.target_frames) : json(nullptr)},
          {"quota_reached", s.quota_reached}};
}

inline CollectionStats stats_from_json(const json& j) {
  CollectionStats s;
  s.frames_seen = j.at("frames_seen").get<std::int64_t>();
  s.frames_kept = j.at("frames_kept").get<std::int64_t>();
  s.instances_kept = j.at("instances_kept").get<std::int64_t>();
  s.instances_per_kept_frame = j.at("instances_per_kept_frame").get<double>();
  s.merged_frames_seen = j.at("merged_frames_seen").get<std::int64_t>();
  s.wall_clock_equivalent = j.at("wall_clock_equivalent").get<double>();
  if (!j.at("target_frames").is_null()) s.target_frames = j.at("target_frames").get<std::int64_t>();
  s.quota_reached = j.at("quota_reached").get<bool>();
  return s;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace adacq::json_codec

#endif  // ADACQ_SRC_JSON_CODEC_HPP_
