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

#include "gaugesim/simplex.hpp"

#include "gaugesim/error.hpp"

namespace gaugesim {

std::vector<std::size_t> independent_rows(const RationalMatrix& matrix) {
  std::vector<std::size_t> chosen;
  std::vector<std::vector<Rational>> echelon;  // reduced copies of the chosen rows
  std::vector<std::size_t> pivots;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    std::vector<Rational> row = matrix[r];
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      const std::size_t p = pivots[e];
      if (sgn(row[p]) == 0) continue;
      const Rational factor = row[p] / echelon[e][p];
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (sgn(echelon[e][c]) != 0) row[c] -= factor * echelon[e][c];
      }
    }
    std::size_t pivot = row.size();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (sgn(row[c]) != 0) {
        pivot = c;
        break;
      }
    }
    if (pivot == row.size()) continue;
    chosen.push_back(r);
    pivots.push_back(pivot);
    echelon.push_back(std::move(row));
  }
  return chosen;
}

namespace {

class Tableau {
 public:
  Tableau(const RationalMatrix& a, const std::vector<Rational>& b)
      : rows_(a.size()), structural_(a.empty() ? 0 : a.front().size()), width_(structural_ + rows_ + 1) {
    cells_.assign(rows_ * width_, Rational(0));
    basis_.resize(rows_);
    cost_.assign(width_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (a[r].size() != structural_) throw Error(ErrorCode::WrongArity, "ragged constraint matrix");
      const bool flip = sgn(b[r]) < 0;
      for (std::size_t c = 0; c < structural_; ++c) cell(r, c) = flip ? Rational(-a[r][c]) : a[r][c];
      cell(r, structural_ + r) = 1;
      cell(r, width_ - 1) = flip ? Rational(-b[r]) : b[r];
      basis_[r] = structural_ + r;
    }
    // Phase-one costs: one per artificial, expressed in the initial basis.
    for (std::size_t c = 0; c < structural_; ++c) {
      for (std::size_t r = 0; r < rows_; ++r) cost_[c] -= cell(r, c);
    }
    for (std::size_t r = 0; r < rows_; ++r) cost_[width_ - 1] -= cell(r, width_ - 1);
  }

  // Returns false once no structural column improves the objective.
  bool step() {
    std::size_t entering = structural_;
    for (std::size_t c = 0; c < structural_; ++c) {
      if (sgn(cost_[c]) < 0) {
        entering = c;
        break;
      }
    }
    if (entering == structural_) return false;
    std::size_t leaving = rows_;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (sgn(cell(r, entering)) <= 0) continue;
      Rational ratio = cell(r, width_ - 1) / cell(r, entering);
      if (leaving == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[leaving])) {
        leaving = r;
        best_ratio = std::move(ratio);
      }
    }
    // The phase-one objective is bounded below, so a positive entry always exists.
    pivot(leaving, entering);
    return true;
  }

  bool objective_is_zero() const { return sgn(cost_[width_ - 1]) == 0; }

  // Pivots zero-valued artificials out wherever a structural column allows it.
  void expel_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < structural_) continue;
      for (std::size_t c = 0; c < structural_; ++c) {
        if (sgn(cell(r, c)) != 0 && !is_basic(c)) {
          pivot(r, c);
          break;
        }
      }
    }
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(structural_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < structural_) x[basis_[r]] = cell(r, width_ - 1);
    }
    return x;
  }

 private:
  Rational& cell(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }
  const Rational& cell(std::size_t r, std::size_t c) const { return cells_[r * width_ + c]; }

  bool is_basic(std::size_t column) const {
    for (std::size_t b : basis_) {
      if (b == column) return true;
    }
    return false;
  }

  void pivot(std::size_t row, std::size_t column) {
    const Rational scale = cell(row, column);
    for (std::size_t c = 0; c < width_; ++c) {
      if (sgn(cell(row, c)) != 0) cell(row, c) /= scale;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || sgn(cell(r, column)) == 0) continue;
      const Rational factor = cell(r, column);
      for (std::size_t c = 0; c < width_; ++c) {
        if (sgn(cell(row, c)) != 0) cell(r, c) -= factor * cell(row, c);
      }
    }
    if (sgn(cost_[column]) != 0) {
      const Rational factor = cost_[column];
      for (std::size_t c = 0; c < width_; ++c) {
        if (sgn(cell(row, c)) != 0) cost_[c] -= factor * cell(row, c);
      }
    }
    basis_[row] = column;
  }

  std::size_t rows_;
  std::size_t structural_;
  std::size_t width_;
  std::vector<Rational> cells_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::optional<std::vector<Rational>> find_feasible_point(const RationalMatrix& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::WrongArity, "matrix and right-hand side disagree");
  if (a.empty()) return std::vector<Rational>{};
  Tableau tableau(a, b);
  while (tableau.step()) {
  }
  if (!tableau.objective_is_zero()) return std::nullopt;
  tableau.expel_artificials();
  return tableau.solution();
}

}  // namespace gaugesim
