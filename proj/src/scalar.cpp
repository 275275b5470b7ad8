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

#include "gaugesim/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "gaugesim/error.hpp"

namespace gaugesim {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::NormalizationViolation: return "NormalizationViolation";
    case ErrorCode::InconsistentMarginal: return "InconsistentMarginal";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::SupportTooSmall: return "SupportTooSmall";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::InfeasibleBranch: return "InfeasibleBranch";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

InconsistentMarginalError::InconsistentMarginalError(int region, double deviation)
    : Error(ErrorCode::InconsistentMarginal,
            "region " + std::to_string(region) + " deviates by " + std::to_string(deviation)),
      region_(region),
      deviation_(deviation) {}

std::string_view backend_name(Backend backend) { return backend == Backend::Exact ? "rational" : "float"; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a number: '" + std::string(text) + "'");
}

mpz_class parse_integer(std::string_view text) {
  std::string digits(trim(text));
  mpz_class z;
  if (digits.empty() || z.set_str(digits.front() == '+' ? digits.substr(1) : digits, 10) != 0) bad_number(text);
  return z;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto tail = s.substr(e + 1);
    if (!tail.empty() && tail.front() == '+') tail.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), exponent);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) bad_number(text);
    s = s.substr(0, e);
  }
  std::string digits;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      bad_number(text);
    }
  }
  if (!seen_digit) bad_number(text);
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

// Smallest-denominator rational in [lo, hi], 0 <= lo <= hi.
Rational simplest_between(Rational lo, Rational hi) {
  mpz_class floor_lo;
  mpz_fdiv_q(floor_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(floor_lo) == lo) return lo;
  if (Rational(floor_lo + 1) <= hi) return Rational(floor_lo + 1);
  Rational inner = simplest_between(1 / (hi - floor_lo), 1 / (lo - floor_lo));
  Rational result = floor_lo + 1 / inner;
  result.canonicalize();
  return result;
}

}  // namespace

double rational_to_double(const Rational& value) {
  // Both parts exact in a double: one correctly rounded division.
  if (mpz_sizeinbase(value.get_num_mpz_t(), 2) <= 53 && mpz_sizeinbase(value.get_den_mpz_t(), 2) <= 53) {
    return value.get_num().get_d() / value.get_den().get_d();
  }
  return value.get_d();
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad_number(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational snap_to_rational(double value, double tolerance) {
  if (!std::isfinite(value)) throw Error(ErrorCode::RangeError, "cannot snap a non-finite value");
  const bool negative = value < 0;
  const double magnitude = std::fabs(value);
  Rational lo(std::max(0.0, magnitude - tolerance));
  Rational hi(magnitude + tolerance);
  Rational q = simplest_between(lo, hi);
  return negative ? Rational(-q) : q;
}

const Rational& Scalar::exact() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw Error(ErrorCode::RangeError, "float scalar has no exact value");
}

double Scalar::to_double() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return rational_to_double(*q);
  return std::get<double>(value_);
}

Rational Scalar::to_rational() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  return snap_to_rational(std::get<double>(value_));
}

Scalar Scalar::as(Backend target) const {
  if (backend() == target) return *this;
  return target == Backend::Float ? Scalar(to_double()) : Scalar(to_rational());
}

bool Scalar::is_zero(double tolerance) const {
  if (const auto* q = std::get_if<Rational>(&value_)) return sgn(*q) == 0;
  return std::fabs(std::get<double>(value_)) <= tolerance;
}

bool Scalar::is_negative(double tolerance) const {
  if (const auto* q = std::get_if<Rational>(&value_)) return sgn(*q) < 0;
  return std::get<double>(value_) < -tolerance;
}

std::string Scalar::to_string() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return format_rational(*q);
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  return std::string(buf, ptr);
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return Scalar(Rational(-*q));
  return Scalar(-std::get<double>(value_));
}

namespace {

template <typename ExactOp, typename FloatOp>
void combine(std::variant<Rational, double>& lhs, const Scalar& rhs, ExactOp exact_op, FloatOp float_op) {
  if (auto* q = std::get_if<Rational>(&lhs); q != nullptr && rhs.is_exact()) {
    exact_op(*q, rhs.exact());
    return;
  }
  double a = std::holds_alternative<Rational>(lhs) ? rational_to_double(std::get<Rational>(lhs)) : std::get<double>(lhs);
  lhs = float_op(a, rhs.to_double());
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& other) {
  combine(value_, other, [](Rational& a, const Rational& b) { a += b; }, [](double a, double b) { return a + b; });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& other) {
  combine(value_, other, [](Rational& a, const Rational& b) { a -= b; }, [](double a, double b) { return a - b; });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& other) {
  combine(value_, other, [](Rational& a, const Rational& b) { a *= b; }, [](double a, double b) { return a * b; });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& other) {
  if (other.is_exact() && sgn(other.exact()) == 0) throw Error(ErrorCode::RangeError, "division by zero");
  combine(value_, other, [](Rational& a, const Rational& b) { a /= b; }, [](double a, double b) { return a / b; });
  return *this;
}

bool approx_equal(const Scalar& a, const Scalar& b, double tolerance) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return std::fabs(a.to_double() - b.to_double()) <= tolerance;
}

double abs_difference(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return rational_to_double(Rational(abs(a.exact() - b.exact())));
  return std::fabs(a.to_double() - b.to_double());
}

}  // namespace gaugesim
