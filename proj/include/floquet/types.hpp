// SPDX-License-Identifier: Apache-2.0
//
// floquet-ris: time-Floquet RIS channel modelling and ambiguity-aligned estimation
// Copyright (C) 2026 The floquet-ris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace floquet
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kJ{0.0, 1.0};

// Exit codes of the command-line tool, one per error family.
enum class ExitCode : int
{
    ok = 0,
    validation = 2,
    numerical = 3,
    io = 4,
};

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept = 0;
};

// Malformed input, dimension mismatch, inadmissible gauge, schema violation.
class ValidationError : public Error
{
  public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::validation; }
};

class GridMismatchError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

class DimensionError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

// Raised by the gauge transformations when a precondition does not hold.
class InadmissibleGaugeError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

// Affine shift requested on MC-aware parameters or Moebius on MC-unaware ones.
class VariantMismatchError : public ValidationError
{
  public:
    using ValidationError::ValidationError;
};

// JSON schema violation; `pointer` is an RFC 6901 path to the offending node.
class ParseError : public ValidationError
{
  public:
    ParseError(std::string pointer, const std::string &message)
        : ValidationError(message + " (at " + (pointer.empty() ? std::string("/") : pointer) + ")"),
          pointer_(std::move(pointer))
    {
    }
    const std::string &pointer() const noexcept { return pointer_; }

  private:
    std::string pointer_;
};

class NumericalError : public Error
{
  public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

// Resolvent (or any other dense solve) whose condition estimate exceeds the limit.
class IllConditionedError : public NumericalError
{
  public:
    IllConditionedError(const std::string &what, double condition)
        : NumericalError(what + " (condition estimate " + std::to_string(condition) + ")"), condition_(condition)
    {
    }
    double condition() const noexcept { return condition_; }

  private:
    double condition_;
};

class IoError : public Error
{
  public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

} // namespace floquet
