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
#ifndef ADACQ_POLICY_HPP_
#define ADACQ_POLICY_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adacq/core_types.hpp"
#include "adacq/quality.hpp"

namespace adacq {

enum class Verdict { kKeep, kDrop };

enum class Reason {
  kFirstFrame,
  kNovel,
  kRedundant,
  kTooFewInstances,
  kTooManyMerged,
  kQuotaReached,
  kStrideSkip,  // passive collection, frame between two strides
};

enum class ReferenceMode { kPreviousKept, kPreviousRaw };

std::string_view to_string(Verdict v);
std::string_view to_string(Reason r);
std::string_view to_string(ReferenceMode m);
ReferenceMode parse_reference_mode(std::string_view s);

struct PolicyConfig {
  double tau = 0.90;            // drop when similarity >= effective threshold
  int window = kDefaultWindow;  // UQI tile size
  int min_instances = 1;
  bool drop_merged = false;
  int max_merged = 0;
  double density_boost = 0.05;  // threshold bonus for dense frames
  int boost_at = 4;             // instance count that triggers the bonus
  int min_area = kDefaultMinArea;
  ReferenceMode reference_mode = ReferenceMode::kPreviousKept;

  // Throws ConfigError unless 0 < tau <= 1, density_boost >= 0,
  // tau + density_boost <= 1, window >= 2 and the counts are non-negative.
  void validate() const;

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

struct AcquisitionDecision {
  FrameId frame_id = 0;
  Verdict verdict = Verdict::kDrop;
  Reason reason = Reason::kRedundant;
  FrameQuality quality;

  friend bool operator==(const AcquisitionDecision&, const AcquisitionDecision&) = default;
};

struct CollectionStats {
  std::int64_t frames_seen = 0;
  std::int64_t frames_kept = 0;
  std::int64_t instances_kept = 0;
  double instances_per_kept_frame = 0;
  std::int64_t merged_frames_seen = 0;
  double wall_clock_equivalent = 0;           // seconds, frames_seen * frame period
  std::optional<std::int64_t> target_frames;  // active-size only
  bool quota_reached = false;

  friend bool operator==(const CollectionStats&, const CollectionStats&) = default;
};

// Online keep/drop engine. One reference frame of state; steps must be
// applied in stream order.
class Policy {
 public:
  explicit Policy(PolicyConfig config);

  AcquisitionDecision step(const Frame& frame);

  const PolicyConfig& config() const { return config_; }
  bool has_reference() const { return reference_.has_value(); }
  double effective_threshold(int instance_count) const;

 private:
  struct Reference {
    Plane<double> luma;
    int width;
    int height;
  };

  PolicyConfig config_;
  std::optional<Reference> reference_;
};

// Pull-based frame stream. Returns std::nullopt when exhausted.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<Frame> next() = 0;
  virtual double frame_period() const = 0;
};

class VectorFrameSource : public FrameSource {
 public:
  VectorFrameSource(std::vector<Frame> frames, double frame_period);
  std::optional<Frame> next() override;
  double frame_period() const override { return period_; }

 private:
  std::vector<Frame> frames_;
  std::size_t pos_ = 0;
  double period_;
};

struct CollectionResult {
  std::vector<AcquisitionDecision> decisions;
  CollectionStats stats;
};

// Called once per kept frame, in stream order.
using KeepSink = std::function<void(const Frame&, const AcquisitionDecision&)>;

// Keeps frames 0, stride, 2*stride, ... unconditionally. Similarity to the
// previous kept frame and quality are still measured (with `measurement`'s
// window and min_area) so the decision log is comparable across modes.
CollectionResult collect_passive(FrameSource& source, int stride,
                                 const PolicyConfig& measurement = {}, const KeepSink& sink = {});

// Runs the policy over the whole stream.
CollectionResult collect_active_time(FrameSource& source, const PolicyConfig& config,
                                     const KeepSink& sink = {});

// Runs the policy until `target_frames` are kept or the stream ends. With
// `drain_remaining`, the rest of the stream is consumed and logged as
// Drop/QuotaReached instead of being left unread.
CollectionResult collect_active_size(FrameSource& source, const PolicyConfig& config,
                                     std::int64_t target_frames, const KeepSink& sink = {},
                                     bool drain_remaining = false);

// CSV: frame_id,verdict,reason,uqi,instance_count,merged_count
void write_decision_log(std::ostream& out, const std::vector<AcquisitionDecision>& decisions);

}  // namespace adacq

#endif  // ADACQ_POLICY_HPP_
