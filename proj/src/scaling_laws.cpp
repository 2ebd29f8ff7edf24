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

#include "doggo/scaling_laws.hpp"

#include <cmath>

namespace doggo {

void ReferenceMotor::validate() const {
  if (!(mass > 0.0) || !(torque > 0.0) || !(inertia > 0.0)) {
    throw ValidationError("reference motor mass, torque, inertia must be > 0");
  }
}

ScalingReport scale_with_radius(const ReferenceMotor& ref, double k) {
  if (!(k > 0.0)) {
    throw ValidationError("radius factor must be > 0");
  }
  ScalingReport report;
  report.radius_factor = k;
  report.mass_factor = k;
  report.torque_factor = k * k;
  report.inertia_factor = k * k * k;
  report.scaled.mass = ref.mass * report.mass_factor;
  report.scaled.torque = ref.torque * report.torque_factor;
  report.scaled.inertia = ref.inertia * report.inertia_factor;
  return report;
}

double dd_equivalent_mass_factor(double ratio) {
  if (!(ratio >= 1.0)) {
    throw ValidationError("reduction ratio must be >= 1");
  }
  return std::sqrt(ratio);
}

double qdd_mass_budget(double motor_mass, double ratio) {
  if (!(motor_mass > 0.0)) {
    throw ValidationError("motor mass must be > 0");
  }
  return (dd_equivalent_mass_factor(ratio) - 1.0) * motor_mass;
}

BudgetVerdict check_transmission_budget(double motor_mass, double ratio,
                                        double transmission_mass) {
  BudgetVerdict verdict;
  verdict.budget_kg = qdd_mass_budget(motor_mass, ratio);
  verdict.transmission_kg = transmission_mass;
  verdict.pass = transmission_mass <= verdict.budget_kg;
  return verdict;
}

double inertia_ratio_for_torque(double torque_ratio) {
  if (!(torque_ratio > 0.0)) {
    throw ValidationError("torque ratio must be > 0");
  }
  return std::pow(torque_ratio, 1.5);
}

double fleet_mass_saving(const QddActuator& act, int count) {
  if (count < 1) {
    throw ValidationError("actuator count must be >= 1");
  }
  const double dd_mass =
      dd_equivalent_mass_factor(act.ratio) * act.motor.mass;
  return static_cast<double>(count) * (dd_mass - act.total_mass());
}

}  // namespace doggo
