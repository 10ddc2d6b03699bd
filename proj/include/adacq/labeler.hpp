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
#ifndef ADACQ_LABELER_HPP_
#define ADACQ_LABELER_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "adacq/core_types.hpp"
#include "adacq/quality.hpp"

namespace adacq {

// Ground truth for one visible instance.
struct InstanceRecord {
  InstanceId instance_id = 0;
  ClassId class_id = 0;
  PixelBox box;  // tight box around the visible pixels
  std::int64_t pixel_area = 0;
  double occlusion = 0;

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

// One record per nonzero instance id with area >= min_area, ascending by id.
// The class comes from the semantic mask under the instance's pixels; an
// instance painted with more than one class throws IntegrityError.
std::vector<InstanceRecord> extract_instances(const Frame& frame, int min_area = kDefaultMinArea);

// Maps palette classes to the contiguous ids written into label files.
class ExportClassMap {
 public:
  ExportClassMap() = default;
  explicit ExportClassMap(std::map<ClassId, int> mapping);

  // vehicle -> 0, traffic light -> 1
  static const ExportClassMap& standard();

  std::optional<int> export_id(ClassId cls) const;
  std::optional<ClassId> source_class(int export_id) const;
  const std::map<ClassId, int>& mapping() const { return mapping_; }

  friend bool operator==(const ExportClassMap&, const ExportClassMap&) = default;

 private:
  std::map<ClassId, int> mapping_;
};

// Drops records whose class is not exported.
std::vector<InstanceRecord> exportable(const std::vector<InstanceRecord>& records,
                                       const ExportClassMap& classes = ExportClassMap::standard());

// Throws ConfigError for a record whose class is not in the map.
std::vector<YoloLabel> to_yolo_labels(const std::vector<InstanceRecord>& records, int width,
                                      int height,
                                      const ExportClassMap& classes = ExportClassMap::standard());

// "class cx cy w h" per line, 6 decimals, newline-terminated.
void write_labels(std::ostream& out, const std::vector<YoloLabel>& labels);
// Throws ParseError (with the 1-based line) on malformed lines and RangeError
// on out-of-range geometry.
std::vector<YoloLabel> read_labels(std::istream& in);

void write_label_file(const std::filesystem::path& path, const std::vector<YoloLabel>& labels);
std::vector<YoloLabel> read_label_file(const std::filesystem::path& path);

}  // namespace adacq

#endif  // ADACQ_LABELER_HPP_
