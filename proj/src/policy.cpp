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
#include "adacq/policy.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace adacq {

std::string_view to_string(Verdict v) { return v == Verdict::kKeep ? "keep" : "drop"; }

std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::kFirstFrame: return "first_frame";
    case Reason::kNovel: return "novel";
    case Reason::kRedundant: return "redundant";
    case Reason::kTooFewInstances: return "too_few_instances";
    case Reason::kTooManyMerged: return "too_many_merged";
    case Reason::kQuotaReached: return "quota_reached";
    case Reason::kStrideSkip: return "stride_skip";
  }
  return "?";
}

std::string_view to_string(ReferenceMode m) {
  return m == ReferenceMode::kPreviousKept ? "previous-kept" : "previous-raw";
}

ReferenceMode parse_reference_mode(std::string_view s) {
  if (s == "previous-kept") return ReferenceMode::kPreviousKept;
  if (s == "previous-raw") return ReferenceMode::kPreviousRaw;
  throw ConfigError(fmt::format("unknown reference mode '{}'", s));
}

void PolicyConfig::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ConfigError(fmt::format("tau must be in (0, 1], got {}", tau));
  }
  if (!(density_boost >= 0.0)) {
    throw ConfigError(fmt::format("density_boost must be >= 0, got {}", density_boost));
  }
  if (tau + density_boost > 1.0) {
    throw ConfigError(
        fmt::format("tau + density_boost must be <= 1, got {} + {}", tau, density_boost));
  }
  if (window < 2) throw ConfigError(fmt::format("window must be >= 2, got {}", window));
  if (min_instances < 0) throw ConfigError("min_instances must be >= 0");
  if (max_merged < 0) throw ConfigError("max_merged must be >= 0");
  if (boost_at < 0) throw ConfigError("boost_at must be >= 0");
  if (min_area < 1) throw ConfigError("min_area must be >= 1");
}

Policy::Policy(PolicyConfig config) : config_(config) { config_.validate(); }

double Policy::effective_threshold(int instance_count) const {
  const double bonus = instance_count >= config_.boost_at ? config_.density_boost : 0.0;
  return std::min(1.0, config_.tau + bonus);
}

AcquisitionDecision Policy::step(const Frame& frame) {
  AcquisitionDecision d;
  d.frame_id = frame.id();
  d.quality = measure_quality(frame, config_.min_area);

  if (!reference_) {
    d.verdict = Verdict::kKeep;
    d.reason = Reason::kFirstFrame;
    reference_ = Reference{luma(frame.rgb()), frame.width(), frame.height()};
    return d;
  }
  if (frame.width() != reference_->width || frame.height() != reference_->height) {
    throw DimensionError(fmt::format("frame {}: {}x{} does not match the stream's {}x{}",
                                     frame.id(), frame.width(), frame.height(), reference_->width,
                                     reference_->height));
  }

  auto current = luma(frame.rgb());
  const double q = uqi_windowed(current, reference_->luma, config_.window);
  d.quality.uqi_vs_reference = q;

  if (q >= effective_threshold(d.quality.instance_count)) {
    d.verdict = Verdict::kDrop;
    d.reason = Reason::kRedundant;
  } else if (d.quality.instance_count < config_.min_instances) {
    d.verdict = Verdict::kDrop;
    d.reason = Reason::kTooFewInstances;
  } else if (config_.drop_merged && d.quality.merged_component_count > config_.max_merged) {
    d.verdict = Verdict::kDrop;
    d.reason = Reason::kTooManyMerged;
  } else {
    d.verdict = Verdict::kKeep;
    d.reason = Reason::kNovel;
  }

  if (d.verdict == Verdict::kKeep || config_.reference_mode == ReferenceMode::kPreviousRaw) {
    reference_->luma = std::move(current);
  }
  return d;
}

VectorFrameSource::VectorFrameSource(std::vector<Frame> frames, double frame_period)
    : frames_(std::move(frames)), period_(frame_period) {}

std::optional<Frame> VectorFrameSource::next() {
  if (pos_ >= frames_.size()) return std::nullopt;
  return frames_[pos_++];
}

namespace {

class StatsAccumulator {
 public:
  explicit StatsAccumulator(double period) : period_(period) {}

  void add(const AcquisitionDecision& d) {
    ++stats_.frames_seen;
    if (d.quality.merged_component_count > 0) ++stats_.merged_frames_seen;
    if (d.verdict == Verdict::kKeep) {
      ++stats_.frames_kept;
      stats_.instances_kept += d.quality.instance_count;
    }
  }

  CollectionStats finish() {
    stats_.wall_clock_equivalent = static_cast<double>(stats_.frames_seen) * period_;
    stats_.instances_per_kept_frame =
        stats_.frames_kept > 0
            ? static_cast<double>(stats_.instances_kept) / static_cast<double>(stats_.frames_kept)
            : 0.0;
    return stats_;
  }

  CollectionStats& raw() { return stats_; }

 private:
  double period_;
  CollectionStats stats_;
};

std::optional<Frame> first_frame(FrameSource& source) {
  auto f = source.next();
  if (!f) throw Error("collection: empty stream");
  return f;
}

}  // namespace

CollectionResult collect_passive(FrameSource& source, int stride, const PolicyConfig& measurement,
                                 const KeepSink& sink) {
  if (stride < 1) throw ConfigError(fmt::format("stride must be >= 1, got {}", stride));
  if (measurement.window < 2) throw ConfigError("window must be >= 2");
  CollectionResult result;
  StatsAccumulator acc(source.frame_period());
  std::optional<Plane<double>> reference;
  std::int64_t index = 0;
  for (auto frame = first_frame(source); frame; frame = source.next(), ++index) {
    AcquisitionDecision d;
    d.frame_id = frame->id();
    d.quality = measure_quality(*frame, measurement.min_area);
    auto current = luma(frame->rgb());
    if (reference) {
      if (reference->rows() != current.rows() || reference->cols() != current.cols()) {
        throw DimensionError(fmt::format("frame {}: size differs from the stream", frame->id()));
      }
      d.quality.uqi_vs_reference = uqi_windowed(current, *reference, measurement.window);
    }
    if (index % stride == 0) {
      d.verdict = Verdict::kKeep;
      d.reason = index == 0 ? Reason::kFirstFrame : Reason::kNovel;
      reference = std::move(current);
      if (sink) sink(*frame, d);
    } else {
      d.verdict = Verdict::kDrop;
      d.reason = Reason::kStrideSkip;
    }
    acc.add(d);
    result.decisions.push_back(std::move(d));
  }
  result.stats = acc.finish();
  return result;
}

CollectionResult collect_active_time(FrameSource& source, const PolicyConfig& config,
                                     const KeepSink& sink) {
  Policy policy(config);
  CollectionResult result;
  StatsAccumulator acc(source.frame_period());
  for (auto frame = first_frame(source); frame; frame = source.next()) {
    auto d = policy.step(*frame);
    if (d.verdict == Verdict::kKeep && sink) sink(*frame, d);
    acc.add(d);
    result.decisions.push_back(std::move(d));
  }
  result.stats = acc.finish();
  return result;
}

CollectionResult collect_active_size(FrameSource& source, const PolicyConfig& config,
                                     std::int64_t target_frames, const KeepSink& sink,
                                     bool drain_remaining) {
  if (target_frames < 1) {
    throw ConfigError(fmt::format("target_frames must be >= 1, got {}", target_frames));
  }
  Policy policy(config);
  CollectionResult result;
  StatsAccumulator acc(source.frame_period());
  for (auto frame = first_frame(source); frame; frame = source.next()) {
    auto d = policy.step(*frame);
    if (d.verdict == Verdict::kKeep && sink) sink(*frame, d);
    acc.add(d);
    result.decisions.push_back(std::move(d));
    if (acc.raw().frames_kept == target_frames) {
      acc.raw().quota_reached = true;
      break;
    }
  }
  if (drain_remaining && acc.raw().quota_reached) {
    for (auto frame = source.next(); frame; frame = source.next()) {
      AcquisitionDecision d;
      d.frame_id = frame->id();
      d.verdict = Verdict::kDrop;
      d.reason = Reason::kQuotaReached;
      d.quality = measure_quality(*frame, config.min_area);
      acc.add(d);
      result.decisions.push_back(std::move(d));
    }
  }
  result.stats = acc.finish();
  result.stats.target_frames = target_frames;
  return result;
}

void write_decision_log(std::ostream& out, const std::vector<AcquisitionDecision>& decisions) {
  out << "frame_id,verdict,reason,uqi,instance_count,merged_count\n";
  for (const auto& d : decisions) {
    out << fmt::format("{},{},{},{},{},{}\n", d.frame_id, to_string(d.verdict), to_string(d.reason),
                       d.quality.uqi_vs_reference
                           ? fmt::format("{:.9f}", *d.quality.uqi_vs_reference)
                           : std::string(),
                       d.quality.instance_count, d.quality.merged_component_count);
  }
}

}  // namespace adacq
