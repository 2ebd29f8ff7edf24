// Copyright 2026 The doggo-lab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace doggo {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A commanded foot position lies outside the leg workspace. Usually a
// gait or script bug, not a numerical issue.
class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

// The leg Jacobian is rank deficient (or close enough that a force
// estimate would be meaningless).
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

// Structural problem with a control-loop configuration (e.g. rates that
// do not divide evenly).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Config file is not parseable JSON.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Config parsed but violates a module invariant; message names the field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A metric was asked to divide by a nonpositive quantity.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptySeries : public Error {
 public:
  using Error::Error;
};

// Jump experiment timed out without the robot leaving the ground.
class NoTakeoff : public Error {
 public:
  using Error::Error;
};

// Running experiment ended with the trunk below the minimum height or
// pitched past the sanity limit.
class FallDetected : public Error {
 public:
  using Error::Error;
};

// Integrator state escaped sanity bounds.
class NumericalDivergence : public Error {
 public:
  using Error::Error;
};

class NoJumpDetected : public Error {
 public:
  using Error::Error;
};

class InsufficientTravel : public Error {
 public:
  using Error::Error;
};

}  // namespace doggo
