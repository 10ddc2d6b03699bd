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
#ifndef ADACQ_ERRORS_HPP_
#define ADACQ_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace adacq {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range configuration or argument values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Values outside their documented domain (normalized coordinates, boxes
// exceeding the image, confidences outside [0,1]).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Raster shapes that do not agree with each other.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Text input that does not follow its documented format. `line` is 1-based,
// 0 when the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Data that parsed fine but contradicts itself (e.g. one instance id painted
// with two classes, a manifest entry whose checksum does not match).
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what, std::vector<std::string> issues = {})
      : Error(what), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// Filesystem failures; the message always carries the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace adacq

#endif  // ADACQ_ERRORS_HPP_
