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
#ifndef ADACQ_RASTER_HPP_
#define ADACQ_RASTER_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace adacq {

// Row-major 2-D array; rows = height, cols = width.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ClassId = std::uint8_t;
using InstanceId = std::uint16_t;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
  friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

// 8-bit RGB raster, row-major interleaved triples.
class Image {
 public:
  Image(int width, int height, Rgb fill = {});
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  Rgb at(int x, int y) const {
    const auto i = offset(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const auto i = offset(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const { return (static_cast<std::size_t>(y) * width_ + x) * 3; }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

// Per-pixel class identifiers.
struct SemanticMask {
  Plane<ClassId> class_ids;

  SemanticMask() = default;
  SemanticMask(int width, int height) : class_ids(Plane<ClassId>::Zero(height, width)) {}
  explicit SemanticMask(Plane<ClassId> ids) : class_ids(std::move(ids)) {}

  int width() const { return static_cast<int>(class_ids.cols()); }
  int height() const { return static_cast<int>(class_ids.rows()); }
  ClassId operator()(int x, int y) const { return class_ids(y, x); }
  ClassId& operator()(int x, int y) { return class_ids(y, x); }

  friend bool operator==(const SemanticMask& a, const SemanticMask& b) {
    return a.class_ids.rows() == b.class_ids.rows() && a.class_ids.cols() == b.class_ids.cols() &&
           (a.class_ids == b.class_ids).all();
  }
};

// Per-pixel instance identifiers, 0 = background.
struct InstanceMask {
  Plane<InstanceId> instance_ids;

  InstanceMask() = default;
  InstanceMask(int width, int height) : instance_ids(Plane<InstanceId>::Zero(height, width)) {}
  explicit InstanceMask(Plane<InstanceId> ids) : instance_ids(std::move(ids)) {}

  int width() const { return static_cast<int>(instance_ids.cols()); }
  int height() const { return static_cast<int>(instance_ids.rows()); }
  InstanceId operator()(int x, int y) const { return instance_ids(y, x); }
  InstanceId& operator()(int x, int y) { return instance_ids(y, x); }

  friend bool operator==(const InstanceMask& a, const InstanceMask& b) {
    return a.instance_ids.rows() == b.instance_ids.rows() &&
           a.instance_ids.cols() == b.instance_ids.cols() &&
           (a.instance_ids == b.instance_ids).all();
  }
};

// PNG I/O. Reading accepts any bit depth / color type libpng can expand and
// returns 8-bit RGB; writing always produces 8-bit RGB with fixed settings so
// identical images give identical files.
Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& image);

}  // namespace adacq

#endif  // ADACQ_RASTER_HPP_
