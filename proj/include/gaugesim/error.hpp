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

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaugesim {

enum class ErrorCode {
  MissingTarget,
  NegativeProbability,
  NormalizationViolation,
  InconsistentMarginal,
  WrongArity,
  ZeroProbabilityBranch,
  SupportTooSmall,
  NegativeEntry,
  RangeError,
  ConstraintViolation,
  InfeasibleBranch,
  UnknownEntry,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Carries the offending region and the size of the disagreement.
class InconsistentMarginalError : public Error {
 public:
  InconsistentMarginalError(int region, double deviation);

  int region() const { return region_; }
  double deviation() const { return deviation_; }

 private:
  int region_;
  double deviation_;
};

}  // namespace gaugesim
