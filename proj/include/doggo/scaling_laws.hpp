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

#include "doggo/actuator.hpp"

namespace doggo {

// Electromagnetic motor scaling with gap radius, for mass concentrated
// near the air gap: mass ~ r, torque ~ r^2, reflected inertia ~ r^3.
// These laws drive the trade between a bigger direct-drive motor and a
// smaller motor behind a single-stage reduction.

struct ReferenceMotor {
  double mass = 0.0;     // kg
  double torque = 0.0;   // Nm
  double inertia = 0.0;  // kg m^2

  void validate() const;
};

struct ScalingReport {
  double radius_factor = 1.0;
  double mass_factor = 1.0;     // = radius_factor
  double torque_factor = 1.0;   // = radius_factor^2
  double inertia_factor = 1.0;  // = radius_factor^3
  ReferenceMotor scaled;
};

ScalingReport scale_with_radius(const ReferenceMotor& ref, double k);

// Mass multiplier of a direct-drive motor matching the output torque of a
// QDD with reduction N: the gap radius must grow by sqrt(N), and so does
// the mass.
double dd_equivalent_mass_factor(double ratio);

// Mass allowance for a QDD transmission to beat the bigger-motor
// alternative: (sqrt(N) - 1) * m.
double qdd_mass_budget(double motor_mass, double ratio);

struct BudgetVerdict {
  double budget_kg = 0.0;
  double transmission_kg = 0.0;
  bool pass = false;  // transmission_kg <= budget_kg (boundary passes)
};

BudgetVerdict check_transmission_budget(double motor_mass, double ratio,
                                        double transmission_mass);

// Reflected-inertia growth of a DD motor resized for a torque ratio
// k_tau: radius scales by sqrt(k_tau), inertia by its cube.
double inertia_ratio_for_torque(double torque_ratio);

// Robot-level mass saved by `count` QDD actuators versus equally strong
// direct-drive motors. Negative when the transmission costs more mass
// than the reduction saves.
double fleet_mass_saving(const QddActuator& act, int count);

}  // namespace doggo
