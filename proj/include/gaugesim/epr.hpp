// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "gaugesim/gauge.hpp"

namespace gaugesim {

// Closed-form gauges for the two-region singlet-type table with K = 2, 3 or 4
// arbitrary angles. Weights sit on the lifted double-plateau words and
// configuration k + K copies configuration k. Throws NegativeEntry when the
// angles leave the region where every weight is non-negative.
GaugeSet epr_b_working_gauge(std::span<const double> angles);

// Weight of configuration 0 on the r-th double-plateau word for K equally
// spaced angles k*pi/K. Configuration k uses r - k (mod 2K).
double regular_gauge_weight(int setting_count, int r);

// Bit that configuration 0 reads from the r-th double-plateau word.
int regular_projection(int setting_count, int r);

GaugeSet epr_regular_gauge(int setting_count);

// Angle-indexed gauge of the continuous model: density |cos(angle - lambda)| / 4
// on [0, 2 pi).
class ContinuousGauge {
 public:
  explicit ContinuousGauge(double angle) : angle_(angle) {}

  double angle() const { return angle_; }
  double density(double lambda) const;
  double cdf(double lambda) const;  // lambda in [0, 2 pi)
  // Inverse CDF, one quarter period at a time.
  double sample(double uniform01) const;

 private:
  double angle_;
};

// 1 when cos(angle - lambda) > 0.
int continuous_projection(double angle, double lambda);

}  // namespace gaugesim
