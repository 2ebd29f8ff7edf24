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

#include <optional>

#include "doggo/errors.hpp"

namespace doggo {

// Brushless motor constants. Torques are motor-side (before reduction).
struct MotorParams {
  double k_t = 0.0;                // torque constant (Nm/A)
  double mass = 0.0;               // kg
  double rotor_inertia = 0.0;      // kg m^2
  double continuous_torque = 0.0;  // Nm, thermally sustainable
  double peak_torque = 0.0;        // Nm, short-burst limit
  double winding_resistance = 0.0; // Ohm, for electrical power estimates
  double max_speed = 0.0;          // rad/s, motor side

  void validate() const;
};

// One quasi-direct-drive actuator: motor plus a single-stage reduction.
struct QddActuator {
  MotorParams motor;
  double ratio = 1.0;              // reduction N >= 1, QDD requires N <= 10
  double transmission_mass = 0.0;  // kg
  double efficiency = 1.0;         // (0, 1]

  void validate() const;

  // Output torque for a motor current, N * eta * K_t * i (signed).
  double output_torque_from_current(double current) const;
  double current_from_output_torque(double torque) const;

  // Rotor inertia seen at the output shaft: rotor_inertia * N^2.
  double reflected_inertia() const;

  double peak_output_torque() const;
  double continuous_output_torque() const;
  double total_mass() const;

  // Peak output torque per kilogram of motor plus transmission.
  double torque_density() const;
};

struct ClampedTorque {
  double torque = 0.0;
  bool saturated = false;
};

// Two-level thermal torque limit. Torque magnitude is always capped at the
// peak output torque; once the command has stayed above the continuous
// output level for a full burst window, the cap drops to the continuous
// level until the command falls back to or below it.
class TorqueBudget {
 public:
  explicit TorqueBudget(double window_s = 1.0);

  // Clamps tau_cmd (output-side Nm) at time t. t must not decrease
  // across calls on the same budget.
  ClampedTorque clamp(const QddActuator& act, double tau_cmd, double t);

  double window() const { return window_s_; }

 private:
  double window_s_;
  double last_t_;
  std::optional<double> above_since_;
};

// Zeroes torque that would drive the motor past max_speed; braking torque
// passes through. shaft_speed is output-side (rad/s).
double speed_limited_torque(const QddActuator& act, double tau,
                            double shaft_speed);

}  // namespace doggo
