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
#include <string>
#include <vector>

#include "doggo/actuator.hpp"
#include "doggo/trace.hpp"

namespace doggo {

// Performance metrics for legged machines: steady running velocity over
// ground, electrical cost of transport, vertical jump height, and the
// jump-height-per-time measure of vertical agility.

struct RunResult {
  double v_ss = 0.0;           // m/s
  double mean_voltage = 0.0;   // V
  double mean_current = 0.0;   // A
  double cost_of_transport = 0.0;
};

struct JumpResult {
  double h = 0.0;         // m, apex CoG minus crouched CoG
  double t_stance = 0.0;  // s, actuation onset to liftoff
  double t_apogee = 0.0;  // s, liftoff to apex
  double agility = 0.0;   // m/s, h / (t_stance + t_apogee)
};

// One comparison-table row; absent entries render as N/A.
struct RobotFixture {
  std::string name;
  std::optional<int> legs;
  std::optional<int> dof;
  std::optional<double> leg_length_m;
  std::optional<double> mass_kg;
  std::optional<double> motor_mass_pct;
  std::optional<double> gear_ratio;
  std::optional<double> v_ss;
  std::optional<double> cot;
  std::optional<double> jump_h;
  std::optional<double> agility;
};

// Electrical cost of transport V i / (m g v_ss) from the mean bus
// voltage and current during steady running.
double cost_of_transport(double mean_voltage, double mean_current,
                         double mass_kg, double v_ss, double g = 9.81);

// Velocity over the first post-transient window in which the body
// advances by `distance` meters (boundaries interpolated). The first
// quarter of the trace is discarded as start-up transient. Throws
// InsufficientTravel when the remaining trace never covers the distance.
double steady_velocity(const Trace& trace, double distance = 0.7);

// Apex CoG height minus the crouched CoG height, where the crouch is the
// minimum height seen before liftoff. Throws NoJumpDetected when the
// trace never leaves the ground or never reaches an apex.
double jump_height(const Trace& trace);

double vertical_jumping_agility(double h, double t_stance, double t_apogee);

struct ElectricalSample {
  double power_w = 0.0;
  double volts = 0.0;
  double amps = 0.0;
};

// Per-motor electrical draw: i = |tau|/K_t, P = tau w + i^2 R with
// negative (regenerating) totals floored at zero, V = P/i.
ElectricalSample electrical_power(double tau_motor, double omega_motor,
                                  const MotorParams& motor);

// Steady velocity, mean bus voltage/current, and cost of transport over
// the post-transient window of a running trace. Currents come from the
// recorded shaft torques through the actuator model.
RunResult run_metrics(const Trace& trace, const QddActuator& act,
                      double robot_mass_kg, double distance = 0.7,
                      double g = 9.81);

// Fixed-width text table of the fixture rows plus any locally computed
// rows appended at the bottom.
std::string comparison_table(const std::vector<RobotFixture>& fixtures,
                             const std::vector<RobotFixture>& computed = {});

}  // namespace doggo
