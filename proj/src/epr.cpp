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

#include "gaugesim/epr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gaugesim/error.hpp"

namespace gaugesim {

namespace {

using std::numbers::pi;

struct WordTable {
  std::vector<IgnitionIndex> words;
  std::vector<std::vector<double>> weights;  // [setting][word], still scaled by 4
};

WordTable working_table(std::span<const double> t) {
  const auto c = [&](int a, int b) { return std::cos(t[b] - t[a]); };
  switch (t.size()) {
    case 2:
      return {{0, 1, 2, 3},
              {{1 + c(0, 1), 1 - c(0, 1), 1 - c(0, 1), 1 + c(0, 1)},
               {1 + c(0, 1), 1 - c(0, 1), 1 - c(0, 1), 1 + c(0, 1)}}};
    case 3: {
      const double a0 = 1 + c(0, 2), a1 = 1 - c(0, 1), a3 = c(0, 1) - c(0, 2);
      const double b0 = c(0, 1) + c(2, 1), b1 = 1 - c(0, 1), b3 = 1 - c(1, 2);
      const double d0 = 1 + c(0, 2), d1 = c(1, 2) - c(0, 2), d3 = 1 - c(1, 2);
      return {{0, 1, 3, 4, 6, 7},
              {{a0, a1, a3, a3, a1, a0}, {b0, b1, b3, b3, b1, b0}, {d0, d1, d3, d3, d1, d0}}};
    }
    case 4: {
      const std::array<double, 4> g0{1 + c(3, 0), 1 - c(1, 0), c(1, 0) - c(2, 0), c(2, 0) - c(3, 0)};
      const std::array<double, 4> g1{c(1, 0) + c(1, 3), 1 - c(1, 0), 1 - c(1, 2), c(2, 1) - c(3, 1)};
      const std::array<double, 4> g2{c(2, 0) + c(2, 3), c(2, 1) - c(2, 0), 1 - c(1, 2), 1 - c(2, 3)};
      const std::array<double, 4> g3{1 + c(3, 0), c(3, 1) - c(3, 0), c(3, 2) - c(3, 1), 1 - c(2, 3)};
      // Words 0,1,3,7 and their complements 15,14,12,8 share weights.
      auto mirror = [](const std::array<double, 4>& h) {
        return std::vector<double>{h[0], h[1], h[2], h[3], h[3], h[2], h[1], h[0]};
      };
      return {{0, 1, 3, 7, 8, 12, 14, 15}, {mirror(g0), mirror(g1), mirror(g2), mirror(g3)}};
    }
    default:
      throw Error(ErrorCode::RangeError, "closed-form working gauge exists for 2, 3 or 4 angles");
  }
}

GaugeSet duplicate_for_both_regions(int k, const std::vector<IgnitionIndex>& words,
                                    const std::vector<std::vector<double>>& weights) {
  std::vector<IgnitionIndex> lifted;
  for (IgnitionIndex w : words) lifted.push_back(lift_bipartite(w, k));
  std::vector<GaugeDistribution> gauges;
  for (int gamma = 0; gamma < 2 * k; ++gamma) {
    const auto& row = weights[static_cast<std::size_t>(gamma % k)];
    gauges.emplace_back(gamma, lifted, std::vector<Scalar>(row.begin(), row.end()));
  }
  return GaugeSet(2, k, std::move(gauges));
}

int wrap(int r, int modulus) { return ((r % modulus) + modulus) % modulus; }

// Integral of |cos| from 0 to phi, any real phi.
double abs_cos_integral(double phi) {
  const double periods = std::floor(phi / pi);
  const double rest = phi - periods * pi;
  const double partial = rest <= pi / 2 ? std::sin(rest) : 2.0 - std::sin(rest);
  return 2.0 * periods + partial;
}

}  // namespace

GaugeSet epr_b_working_gauge(std::span<const double> angles) {
  WordTable table = working_table(angles);
  const int k = static_cast<int>(angles.size());
  for (auto& row : table.weights) {
    for (double& w : row) {
      w /= 4.0;
      if (w < -kNumericTolerance) {
        throw Error(ErrorCode::NegativeEntry, "angles give a negative gauge weight " + std::to_string(w));
      }
    }
  }
  return duplicate_for_both_regions(k, table.words, table.weights);
}

double regular_gauge_weight(int setting_count, int r) {
  if (setting_count < 1) throw Error(ErrorCode::RangeError, "setting count must be positive");
  const double alpha = pi / (2.0 * setting_count);
  const int rr = wrap(r, 2 * setting_count);
  // Odd K centres the profile on word 0, even K half a step earlier.
  const double phase = setting_count % 2 == 1 ? 2.0 * rr * alpha : (2.0 * rr - 1.0) * alpha;
  return 0.5 * std::sin(alpha) * std::fabs(std::cos(phase));
}

int regular_projection(int setting_count, int r) {
  const int rr = wrap(r, 2 * setting_count);
  return (2 * rr <= setting_count || 2 * rr > 3 * setting_count) ? 1 : 0;
}

GaugeSet epr_regular_gauge(int setting_count) {
  const int k = setting_count;
  std::vector<IgnitionIndex> words = double_plateau(k);
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    for (int r = 0; r < 2 * k; ++r) weights[s].push_back(regular_gauge_weight(k, r - s));
  }
  return duplicate_for_both_regions(k, words, weights);
}

double ContinuousGauge::density(double lambda) const { return std::fabs(std::cos(angle_ - lambda)) / 4.0; }

double ContinuousGauge::cdf(double lambda) const {
  return (abs_cos_integral(lambda - angle_) - abs_cos_integral(-angle_)) / 4.0;
}

double ContinuousGauge::sample(double uniform01) const {
  const double scaled = std::clamp(uniform01, 0.0, std::nextafter(1.0, 0.0)) * 4.0;
  const int quarter = std::min(3, static_cast<int>(scaled));
  const double v = scaled - quarter;
  const double t = quarter % 2 == 0 ? std::asin(v) : std::acos(1.0 - v);
  const double lambda = std::fmod(angle_ + quarter * (pi / 2) + t, 2 * pi);
  return lambda < 0 ? lambda + 2 * pi : lambda;
}

int continuous_projection(double angle, double lambda) { return std::cos(angle - lambda) > 0.0 ? 1 : 0; }

}  // namespace gaugesim
