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
#include "adacq/labeler.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace adacq {

std::vector<InstanceRecord> extract_instances(const Frame& frame, int min_area) {
  const auto& sem = frame.semantic();
  const auto& inst = frame.instance();
  std::vector<InstanceRecord> out;
  for (const auto& f : instance_footprints(inst)) {
    if (f.area < min_area) continue;
    // Every pixel of the instance must agree on its class.
    std::optional<ClassId> found;
    for (int y = f.box.y_min; y < f.box.y_max; ++y) {
      for (int x = f.box.x_min; x < f.box.x_max; ++x) {
        if (inst(x, y) != f.id) continue;
        if (!found) {
          found = sem(x, y);
        } else if (*found != sem(x, y)) {
          throw IntegrityError(fmt::format("frame {}: instance {} spans classes {} and {}",
                                           frame.id(), f.id, *found, sem(x, y)));
        }
      }
    }
    out.push_back({f.id, *found, f.box, f.area, fill_deficit(f.area, f.box)});
  }
  return out;
}

ExportClassMap::ExportClassMap(std::map<ClassId, int> mapping) : mapping_(std::move(mapping)) {
  std::map<int, ClassId> inverse;
  for (const auto& [cls, id] : mapping_) {
    if (id < 0) throw ConfigError("export class ids must be non-negative");
    if (!inverse.emplace(id, cls).second) {
      throw ConfigError(fmt::format("export class id {} assigned twice", id));
    }
  }
}

const ExportClassMap& ExportClassMap::standard() {
  static const ExportClassMap map({{kVehicle, 0}, {kTrafficLight, 1}});
  return map;
}

std::optional<int> ExportClassMap::export_id(ClassId cls) const {
  const auto it = mapping_.find(cls);
  if (it == mapping_.end()) return std::nullopt;
  return it->second;
}

std::optional<ClassId> ExportClassMap::source_class(int export_id) const {
  for (const auto& [cls, id] : mapping_) {
    if (id == export_id) return cls;
  }
  return std::nullopt;
}

std::vector<InstanceRecord> exportable(const std::vector<InstanceRecord>& records,
                                       const ExportClassMap& classes) {
  std::vector<InstanceRecord> out;
  for (const auto& r : records) {
    if (classes.export_id(r.class_id)) out.push_back(r);
  }
  return out;
}

std::vector<YoloLabel> to_yolo_labels(const std::vector<InstanceRecord>& records, int width,
                                      int height, const ExportClassMap& classes) {
  std::vector<YoloLabel> labels;
  labels.reserve(records.size());
  for (const auto& r : records) {
    const auto id = classes.export_id(r.class_id);
    if (!id) {
      throw ConfigError(
          fmt::format("instance {}: class {} has no export id", r.instance_id, r.class_id));
    }
    labels.push_back({*id, pixel_box_to_yolo(r.box, width, height)});
  }
  return labels;
}

void write_labels(std::ostream& out, const std::vector<YoloLabel>& labels) {
  for (const auto& l : labels) {
    out << fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f}\n", l.class_id, l.box.cx, l.box.cy, l.box.w,
                       l.box.h);
  }
}

namespace {

// Strict decimal parse of one whitespace-separated field.
template <typename T>
T parse_field(const std::string& token, std::size_t line, const char* what) {
  std::istringstream is(token);
  is.imbue(std::locale::classic());
  T value{};
  if (!(is >> value) || !is.eof()) {
    throw ParseError(fmt::format("line {}: bad {} '{}'", line, what, token), line);
  }
  return value;
}

}  // namespace

std::vector<YoloLabel> read_labels(std::istream& in) {
  std::vector<YoloLabel> labels;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    std::istringstream fields(text);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 5) {
      throw ParseError(fmt::format("line {}: expected 5 fields, got {}", line, tok.size()), line);
    }
    YoloLabel l;
    l.class_id = parse_field<int>(tok[0], line, "class id");
    if (l.class_id < 0) throw ParseError(fmt::format("line {}: negative class id", line), line);
    l.box = {parse_field<double>(tok[1], line, "cx"), parse_field<double>(tok[2], line, "cy"),
             parse_field<double>(tok[3], line, "w"), parse_field<double>(tok[4], line, "h")};
    try {
      validate_yolo_geometry(l.box);
    } catch (const RangeError& e) {
      throw RangeError(fmt::format("line {}: {}", line, e.what()));
    }
    labels.push_back(l);
  }
  return labels;
}

void write_label_file(const std::filesystem::path& path, const std::vector<YoloLabel>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_labels(out, labels);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<YoloLabel> read_label_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return read_labels(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  } catch (const RangeError& e) {
    throw RangeError(path.string() + ": " + e.what());
  }
}

}  // namespace adacq
