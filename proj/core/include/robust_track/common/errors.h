// Copyright 2026 The robust_track Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBUST_TRACK_COMMON_ERRORS_H_
#define ROBUST_TRACK_COMMON_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robust_track {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state derivative evaluated to a non-finite value.
class IntegrationError : public Error {
 public:
  IntegrationError(std::size_t component, double value)
      : Error("non-finite derivative in component " +
              std::to_string(component) + " (value " + std::to_string(value) +
              ")"),
        component_(component) {}

  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

// Riccati / LQR synthesis could not produce a stabilizing solution.
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// Reference input makes the tracking error model uncontrollable.
class ControllabilityError : public Error {
 public:
  using Error::Error;
};

// Slip quantities are undefined below the low-speed guard.
class LowSpeedError : public Error {
 public:
  using Error::Error;
};

// Sliding-mode nominal input gain fell below its lower bound.
class BypassError : public Error {
 public:
  using Error::Error;
};

// LMI gain has not been re-verified for too many controller periods.
class StaleGainError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

}  // namespace robust_track

#endif  // ROBUST_TRACK_COMMON_ERRORS_H_
