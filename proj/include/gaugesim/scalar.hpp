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

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace gaugesim {

using Rational = mpq_class;

// Absolute tolerance used for every float comparison in the library.
inline constexpr double kNumericTolerance = 1e-9;

// Float entries handed to the exact solver are replaced by the simplest
// rational within this distance.
inline constexpr double kSnapTolerance = 1e-12;

enum class Backend { Exact, Float };

std::string_view backend_name(Backend backend);

// Accepts "p/q", integers and plain decimals ("0.0625", "1e-3"); the result is exact.
Rational parse_rational(std::string_view text);

// Always "num/den", e.g. "0/1", "3/8".
std::string format_rational(const Rational& value);
// Nearest double (rounded, not truncated) for word-sized parts.
double rational_to_double(const Rational& value);

// Simplest rational (smallest denominator) in [value - tolerance, value + tolerance].
Rational snap_to_rational(double value, double tolerance = kSnapTolerance);

class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Scalar(double value) : value_(value) {}               // NOLINT(google-explicit-constructor)
  Scalar(int value) : value_(Rational(value)) {}        // NOLINT(google-explicit-constructor)

  static Scalar ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return Scalar(q);
  }

  Backend backend() const { return std::holds_alternative<Rational>(value_) ? Backend::Exact : Backend::Float; }
  bool is_exact() const { return backend() == Backend::Exact; }

  // Throws ErrorCode::RangeError on a float scalar.
  const Rational& exact() const;
  double to_double() const;
  // Exact value, or the snapped rational for a float scalar.
  Rational to_rational() const;
  // Same value in the requested backend.
  Scalar as(Backend backend) const;

  bool is_zero(double tolerance = kNumericTolerance) const;
  bool is_negative(double tolerance = kNumericTolerance) const;

  // "num/den" for exact scalars, shortest round-trip decimal otherwise.
  std::string to_string() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& other);
  Scalar& operator-=(const Scalar& other);
  Scalar& operator*=(const Scalar& other);
  Scalar& operator/=(const Scalar& other);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

 private:
  std::variant<Rational, double> value_;
};

// Exact equality when both are exact, |a - b| <= tolerance otherwise.
bool approx_equal(const Scalar& a, const Scalar& b, double tolerance = kNumericTolerance);

// |a - b| as a double (exact subtraction first when possible).
double abs_difference(const Scalar& a, const Scalar& b);

}  // namespace gaugesim
