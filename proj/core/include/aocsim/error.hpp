// SPDX-License-Identifier: Apache-2.0
//
// aocsim: sub-THz antenna-on-chip design and simulation toolkit
// Copyright (C) 2026 The aocsim authors
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

#include <stdexcept>
#include <string>

namespace aocsim {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  success = 0,
  config_error = 2,
  numerical_instability = 3,
  validation_failure = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::config_error; }
};

// Invalid user input: config files, parameters, out-of-domain arguments.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// A rectangle or parameter set that cannot be laid out inside its footprint.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Grid would exceed the configured memory budget.
class SizingError : public Error {
 public:
  using Error::Error;
};

// Division by a vanishing longitudinal wavenumber in a TE impedance.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// Non-finite intermediate in a closed-form evaluation.
class PropagationError : public Error {
 public:
  using Error::Error;
};

class NumericalInstability : public Error {
 public:
  NumericalInstability(const std::string& what, long step)
      : Error(what), step_(step) {}
  ExitCode exit_code() const noexcept override { return ExitCode::numerical_instability; }
  long step() const noexcept { return step_; }

 private:
  long step_;
};

// Requested S11 extraction without the incident-wave information it needs.
class MissingReferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace aocsim
