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
#include "adacq/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace adacq {

double iou(const PixelBox& a, const PixelBox& b) {
  const int ix = std::max(0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
  const int iy = std::max(0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
  const std::int64_t inter = static_cast<std::int64_t>(ix) * iy;
  if (inter == 0) return 0.0;
  const std::int64_t uni = a.area() + b.area() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::size_t> rank_detections(std::span<const Detection> preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = preds[i];
    const auto& b = preds[j];
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.box.x_min != b.box.x_min) return a.box.x_min < b.box.x_min;
    return a.box.y_min < b.box.y_min;
  });
  return order;
}

namespace {

void check_detection(const Detection& d) {
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
    throw RangeError(fmt::format("detection confidence {} outside [0,1]", d.confidence));
  }
  if (!d.box.is_valid()) throw RangeError("detection box " + to_string(d.box) + " is empty");
}

}  // namespace

MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruthBox> truths, double iou_threshold) {
  std::optional<std::pair<FrameId, int>> key;
  const auto check_key = [&](FrameId f, int c) {
    if (!key) {
      key = {f, c};
    } else if (key->first != f || key->second != c) {
      throw ConfigError("match_detections: inputs mix frames or classes");
    }
  };
  for (const auto& p : preds) {
    check_detection(p);
    check_key(p.frame_id, p.class_id);
  }
  for (const auto& t : truths) check_key(t.frame_id, t.class_id);

  MatchResult m;
  m.order = rank_detections(preds);
  std::vector<bool> taken(truths.size(), false);
  for (std::size_t idx : m.order) {
    int best = -1;
    double best_iou = iou_threshold;
    for (std::size_t t = 0; t < truths.size(); ++t) {
      if (taken[t]) continue;
      const double v = iou(preds[idx].box, truths[t].box);
      if (v >= best_iou && (best < 0 || v > best_iou)) {
        best = static_cast<int>(t);
        best_iou = v;
      }
    }
    if (best >= 0) {
      taken[best] = true;
      ++m.true_positives;
    } else {
      ++m.false_positives;
    }
    m.tp.push_back(best >= 0);
    m.matched_truth.push_back(best);
  }
  m.false_negatives = static_cast<std::int64_t>(truths.size()) - m.true_positives;
  return m;
}

double average_precision(const std::vector<bool>& tp, const std::vector<double>& confidence,
                         std::int64_t total_truths, ApMode mode) {
  if (tp.size() != confidence.size()) {
    throw DimensionError(fmt::format("average_precision: {} flags but {} confidences", tp.size(),
                                     confidence.size()));
  }
  if (total_truths < 0) throw RangeError("average_precision: negative truth count");
  for (std::size_t i = 1; i < confidence.size(); ++i) {
    if (confidence[i] > confidence[i - 1]) {
      throw RangeError("average_precision: confidences must be non-increasing");
    }
  }
  if (total_truths == 0) return tp.empty() ? 1.0 : 0.0;

  // One PR point per distinct confidence.
  std::vector<double> recall;
  std::vector<double> precision;
  std::int64_t n_tp = 0;
  std::int64_t n_fp = 0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    tp[i] ? ++n_tp : ++n_fp;
    if (i + 1 < tp.size() && confidence[i + 1] == confidence[i]) continue;
    recall.push_back(static_cast<double>(n_tp) / static_cast<double>(total_truths));
    precision.push_back(static_cast<double>(n_tp) / static_cast<double>(n_tp + n_fp));
  }
  // Envelope: best precision at this recall or beyond.
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }

  if (mode == ApMode::kAllPoints) {
    double ap = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < recall.size(); ++i) {
      ap += (recall[i] - prev) * precision[i];
      prev = recall[i];
    }
    return ap;
  }
  double sum = 0.0;
  std::size_t i = 0;
  for (int step = 0; step <= 100; ++step) {
    const double r = step / 100.0;
    while (i < recall.size() && recall[i] < r - 1e-12) ++i;
    if (i == recall.size()) break;
    sum += precision[i];
  }
  return sum / 101.0;
}

namespace {

struct ClassData {
  std::map<FrameId, std::vector<Detection>> preds;
  std::map<FrameId, std::vector<GroundTruthBox>> truths;
  std::int64_t n_preds = 0;
  std::int64_t n_truths = 0;
};

std::map<int, ClassData> group_by_class(std::span<const Detection> preds,
                                        std::span<const GroundTruthBox> truths,
                                        double confidence_cut = 0.0) {
  std::map<int, ClassData> out;
  for (const auto& p : preds) {
    check_detection(p);
    auto& c = out[p.class_id];
    if (p.confidence < confidence_cut) continue;
    c.preds[p.frame_id].push_back(p);
    ++c.n_preds;
  }
  for (const auto& t : truths) {
    auto& c = out[t.class_id];
    c.truths[t.frame_id].push_back(t);
    ++c.n_truths;
  }
  return out;
}

struct Counts {
  std::int64_t tp = 0, fp = 0, fn = 0;
};

// Matches every frame of one class and returns the ranked flags.
Counts match_class(const ClassData& c, double threshold, std::vector<bool>* flags,
                   std::vector<double>* conf) {
  std::vector<std::pair<double, bool>> scored;
  Counts n;
  std::set<FrameId> frames;
  for (const auto& [f, _] : c.preds) frames.insert(f);
  for (const auto& [f, _] : c.truths) frames.insert(f);
  static const std::vector<Detection> kNoPreds;
  static const std::vector<GroundTruthBox> kNoTruths;
  for (FrameId f : frames) {
    const auto pit = c.preds.find(f);
    const auto tit = c.truths.find(f);
    const auto& p = pit == c.preds.end() ? kNoPreds : pit->second;
    const auto& t = tit == c.truths.end() ? kNoTruths : tit->second;
    const auto m = match_detections(p, t, threshold);
    for (std::size_t k = 0; k < m.order.size(); ++k) {
      scored.emplace_back(p[m.order[k]].confidence, m.tp[k]);
    }
    n.tp += m.true_positives;
    n.fp += m.false_positives;
    n.fn += m.false_negatives;
  }
  if (flags && conf) {
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    flags->clear();
    conf->clear();
    for (const auto& [s, hit] : scored) {
      conf->push_back(s);
      flags->push_back(hit);
    }
  }
  return n;
}

double class_ap(const ClassData& c, double threshold, ApMode mode) {
  std::vector<bool> flags;
  std::vector<double> conf;
  match_class(c, threshold, &flags, &conf);
  return average_precision(flags, conf, c.n_truths, mode);
}

double iou_step(int i) { return (50 + 5 * i) / 100.0; }

double ratio(std::int64_t num, std::int64_t den) {
  return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double f1_score(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

}  // namespace

double mean_average_precision(std::span<const Detection> preds,
                              std::span<const GroundTruthBox> truths, double iou_threshold,
                              ApMode mode) {
  double sum = 0;
  int n = 0;
  for (const auto& [cls, c] : group_by_class(preds, truths)) {
    if (c.n_truths == 0) continue;
    sum += class_ap(c, iou_threshold, mode);
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

EvalReport evaluate(std::span<const Detection> preds, std::span<const GroundTruthBox> truths,
                    const EvalConfig& config) {
  if (!(config.iou_threshold > 0.0 && config.iou_threshold <= 1.0)) {
    throw ConfigError(fmt::format("iou threshold {} outside (0,1]", config.iou_threshold));
  }
  EvalReport report;
  const auto all = group_by_class(preds, truths);
  const auto cut = group_by_class(preds, truths, config.confidence_cut);
  int classes_with_truth = 0;
  double sum50 = 0;
  double sum50_95 = 0;
  for (const auto& [cls, c] : all) {
    ClassEval ce;
    ce.class_id = cls;
    ce.truths = c.n_truths;
    ce.predictions = c.n_preds;
    if (c.n_truths > 0) {
      ce.ap50 = class_ap(c, 0.5, config.ap_mode);
      double s = 0;
      for (int i = 0; i < 10; ++i) s += class_ap(c, iou_step(i), config.ap_mode);
      ce.ap50_95 = s / 10;
      sum50 += ce.ap50;
      sum50_95 += ce.ap50_95;
      ++classes_with_truth;
    }
    const auto n = match_class(cut.at(cls), config.iou_threshold, nullptr, nullptr);
    ce.tp = n.tp;
    ce.fp = n.fp;
    ce.fn = n.fn;
    ce.precision = ratio(n.tp, n.tp + n.fp);
    ce.recall = ratio(n.tp, n.tp + n.fn);
    ce.f1 = f1_score(ce.precision, ce.recall);
    report.tp += n.tp;
    report.fp += n.fp;
    report.fn += n.fn;
    report.per_class.push_back(ce);
  }
  if (classes_with_truth > 0) {
    // Mean over thresholds of per-threshold mAP equals the mean of the
    // per-class threshold averages (same class set at every threshold).
    report.map50 = sum50 / classes_with_truth;
    report.map50_95 = sum50_95 / classes_with_truth;
  }
  report.precision = ratio(report.tp, report.tp + report.fp);
  report.recall = ratio(report.tp, report.tp + report.fn);
  report.f1 = f1_score(report.precision, report.recall);
  return report;
}

std::vector<Detection> read_predictions(std::istream& in, FrameId frame_id, int width, int height) {
  std::vector<Detection> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    std::vector<std::string> tok;
    for (std::string t; is >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 6) {
      throw ParseError(fmt::format("line {}: expected 6 fields, got {}", line, tok.size()), line);
    }
    double v[5];
    int cls = 0;
    try {
      std::size_t used = 0;
      cls = std::stoi(tok[0], &used);
      if (used != tok[0].size() || cls < 0) throw std::invalid_argument("class");
      for (int k = 0; k < 5; ++k) {
        v[k] = std::stod(tok[k + 1], &used);
        if (used != tok[k + 1].size()) throw std::invalid_argument("number");
      }
    } catch (const std::logic_error&) {
      throw ParseError(fmt::format("line {}: malformed number", line), line);
    }
    try {
      Detection d{frame_id, cls, yolo_to_pixel_box({v[0], v[1], v[2], v[3]}, width, height), v[4]};
      check_detection(d);
      out.push_back(d);
    } catch (const RangeError& e) {
      throw ParseError(fmt::format("line {}: {}", line, e.what()), line);
    }
  }
  return out;
}

std::vector<Detection> read_prediction_file(const std::filesystem::path& path, FrameId frame_id,
                                            int width, int height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return read_predictions(in, frame_id, width, height);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_predictions(std::ostream& out, const std::vector<Detection>& dets, int width,
                       int height) {
  for (const auto& d : dets) {
    const auto g = pixel_box_to_yolo(d.box, width, height);
    out << fmt::format("{} {:.6f} {:.6f} {:.6f} {:.6f} {:.6f}\n", d.class_id, g.cx, g.cy, g.w, g.h,
                       d.confidence);
  }
}

void write_eval_csv(std::ostream& out, const EvalReport& r) {
  out << "scope,class_id,truths,predictions,ap50,ap50_95,tp,fp,fn,precision,recall,f1\n";
  std::int64_t truths = 0;
  std::int64_t preds = 0;
  for (const auto& c : r.per_class) {
    out << fmt::format("class,{},{},{},{:.6f},{:.6f},{},{},{},{:.6f},{:.6f},{:.6f}\n", c.class_id,
                       c.truths, c.predictions, c.ap50, c.ap50_95, c.tp, c.fp, c.fn, c.precision,
                       c.recall, c.f1);
    truths += c.truths;
    preds += c.predictions;
  }
  out << fmt::format("all,,{},{},{:.6f},{:.6f},{},{},{},{:.6f},{:.6f},{:.6f}\n", truths, preds,
                     r.map50, r.map50_95, r.tp, r.fp, r.fn, r.precision, r.recall, r.f1);
}

void print_eval_table(std::ostream& out, const EvalReport& r) {
  out << fmt::format("{:>6} {:>7} {:>7} {:>8} {:>10} {:>9} {:>7} {:>7}\n", "class", "truths",
                     "preds", "AP@0.5", "AP@.5:.95", "P", "R", "F1");
  for (const auto& c : r.per_class) {
    out << fmt::format("{:>6} {:>7} {:>7} {:>8.4f} {:>10.4f} {:>9.4f} {:>7.4f} {:>7.4f}\n",
                       c.class_id, c.truths, c.predictions, c.ap50, c.ap50_95, c.precision,
                       c.recall, c.f1);
  }
  out << fmt::format("mAP@0.5 = {:.4f}  mAP@[.5:.95] = {:.4f}\n", r.map50, r.map50_95);
  out << fmt::format(
      "TP = {}  FP = {}  FN = {}  precision = {:.4f}  recall = {:.4f}  F1 = {:.4f}\n", r.tp, r.fp,
      r.fn, r.precision, r.recall, r.f1);
}

}  // namespace adacq
