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

#include <optional>
#include <vector>

#include "gaugesim/scalar.hpp"

namespace gaugesim {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Rows of `matrix` forming a basis of its row space, chosen greedily in order.
std::vector<std::size_t> independent_rows(const RationalMatrix& matrix);

// Basic feasible solution of A x = b, x >= 0, or nullopt when none exists.
// Phase one with Bland's rule: the entering column is the lowest index with a
// negative reduced cost, ties on the ratio test go to the lowest basic index.
std::optional<std::vector<Rational>> find_feasible_point(const RationalMatrix& a, const std::vector<Rational>& b);

}  // namespace gaugesim
