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
#ifndef ADACQ_UQI_HPP_
#define ADACQ_UQI_HPP_

// Universal Image Quality Index over scalar planes.
//
//   Q = 4 cov_xy mean_x mean_y / ((var_x + var_y) (mean_x^2 + mean_y^2))
//
// with sample statistics (divisor N - 1). Q combines loss of correlation,
// luminance distortion and contrast distortion; Q = 1 iff y == x and
// Q = -1 for perfectly anti-correlated signals with equal means and
// variances. When the denominator vanishes (both windows constant, or both
// zero-mean) Q is 1 for bitwise-identical inputs and 0 otherwise.
//
// Everything here accepts any Eigen array expression, so tiles are plain
// `.block()` views with no copies.

#include <algorithm>

#include <Eigen/Core>

#include "adacq/errors.hpp"

namespace adacq {

template <typename Scalar>
struct WindowStats {
  Scalar mean_x = 0;
  Scalar mean_y = 0;
  Scalar var_x = 0;
  Scalar var_y = 0;
  Scalar cov_xy = 0;
};

template <typename DerivedX, typename DerivedY>
WindowStats<typename DerivedX::Scalar> window_stats(const Eigen::ArrayBase<DerivedX>& x,
                                                    const Eigen::ArrayBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  const auto n = static_cast<Scalar>(x.size());
  WindowStats<Scalar> s;
  s.mean_x = x.sum() / n;
  s.mean_y = y.sum() / n;
  // var and cov share one expression shape so that cov(x, x) == var(x)
  // bit for bit.
  s.var_x = ((x - s.mean_x) * (x - s.mean_x)).sum() / (n - 1);
  s.var_y = ((y - s.mean_y) * (y - s.mean_y)).sum() / (n - 1);
  s.cov_xy = ((x - s.mean_x) * (y - s.mean_y)).sum() / (n - 1);
  return s;
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar uqi(const Eigen::ArrayBase<DerivedX>& x,
                              const Eigen::ArrayBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("uqi: planes differ in shape");
  }
  if (x.size() < 2) {
    throw DimensionError("uqi: need at least 2 samples");
  }
  const auto s = window_stats(x, y);
  // Grouping keeps uqi(x, x) at exactly 1: both sides reduce to
  // 4 * (var * mean^2) after exact power-of-two scalings.
  const Scalar num = (Scalar(4) * s.cov_xy) * (s.mean_x * s.mean_y);
  const Scalar den = (s.var_x + s.var_y) * (s.mean_x * s.mean_x + s.mean_y * s.mean_y);
  if (den == Scalar(0)) {
    return (x.derived() == y.derived()).all() ? Scalar(1) : Scalar(0);
  }
  return num / den;
}

// Mean of per-tile Q over non-overlapping window x window tiles. Tiles at
// the right/bottom edges are clipped and kept when they hold >= 2 pixels; a
// window larger than the plane degenerates to a single global tile.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar uqi_windowed(const Eigen::ArrayBase<DerivedX>& x,
                                       const Eigen::ArrayBase<DerivedY>& y, Eigen::Index window) {
  using Scalar = typename DerivedX::Scalar;
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("uqi_windowed: planes differ in shape");
  }
  if (x.rows() < 2 || x.cols() < 2) {
    throw DimensionError("uqi_windowed: planes must be at least 2x2");
  }
  if (window < 2) {
    throw ConfigError("uqi_windowed: window must be >= 2");
  }
  Scalar total = 0;
  Eigen::Index tiles = 0;
  for (Eigen::Index r = 0; r < x.rows(); r += window) {
    const auto h = std::min(window, x.rows() - r);
    for (Eigen::Index c = 0; c < x.cols(); c += window) {
      const auto w = std::min(window, x.cols() - c);
      if (h * w < 2) continue;
      total += uqi(x.block(r, c, h, w), y.block(r, c, h, w));
      ++tiles;
    }
  }
  return total / static_cast<Scalar>(tiles);
}

}  // namespace adacq

#endif  // ADACQ_UQI_HPP_
