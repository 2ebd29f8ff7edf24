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

#include "doggo/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace doggo {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void MotorParams::validate() const {
  require_positive(k_t, "motor.k_t");
  require_positive(mass, "motor.mass");
  require_positive(rotor_inertia, "motor.rotor_inertia");
  require_positive(continuous_torque, "motor.continuous_torque");
  require_positive(peak_torque, "motor.peak_torque");
  require_positive(winding_resistance, "motor.winding_resistance");
  require_positive(max_speed, "motor.max_speed");
  if (peak_torque < continuous_torque) {
    throw ValidationError(
        "motor.peak_torque must be >= motor.continuous_torque");
  }
}

void QddActuator::validate() const {
  motor.validate();
  if (!(ratio >= 1.0) || !(ratio <= 10.0)) {
    throw ValidationError(
        "actuator.ratio must lie in [1, 10] for a quasi-direct drive");
  }
  if (!(transmission_mass >= 0.0) || !std::isfinite(transmission_mass)) {
    throw ValidationError("actuator.transmission_mass must be >= 0");
  }
  if (!(efficiency > 0.0) || !(efficiency <= 1.0)) {
    throw ValidationError("actuator.efficiency must lie in (0, 1]");
  }
}

double QddActuator::output_torque_from_current(double current) const {
  return ratio * efficiency * motor.k_t * current;
}

double QddActuator::current_from_output_torque(double torque) const {
  return torque / (ratio * efficiency * motor.k_t);
}

double QddActuator::reflected_inertia() const {
  return motor.rotor_inertia * ratio * ratio;
}

double QddActuator::peak_output_torque() const {
  return motor.peak_torque * ratio * efficiency;
}

double QddActuator::continuous_output_torque() const {
  return motor.continuous_torque * ratio * efficiency;
}

double QddActuator::total_mass() const {
  return motor.mass + transmission_mass;
}

double QddActuator::torque_density() const {
  return peak_output_torque() / total_mass();
}

TorqueBudget::TorqueBudget(double window_s)
    : window_s_(window_s),
      last_t_(-std::numeric_limits<double>::infinity()) {}

ClampedTorque TorqueBudget::clamp(const QddActuator& act, double tau_cmd,
                                  double t) {
  if (t < last_t_) {
    throw ValidationError("TorqueBudget time must not decrease");
  }
  last_t_ = t;

  const double peak = act.peak_output_torque();
  const double cont = act.continuous_output_torque();
  double tau = std::clamp(tau_cmd, -peak, peak);

  if (std::abs(tau) > cont) {
    if (!above_since_) {
      above_since_ = t;
    }
    if (t - *above_since_ >= window_s_) {
      tau = std::copysign(cont, tau);
    }
  } else {
    above_since_.reset();
  }
  return ClampedTorque{tau, tau != tau_cmd};
}

double speed_limited_torque(const QddActuator& act, double tau,
                            double shaft_speed) {
  const double motor_speed = shaft_speed * act.ratio;
  if (tau > 0.0 && motor_speed >= act.motor.max_speed) {
    return 0.0;
  }
  if (tau < 0.0 && motor_speed <= -act.motor.max_speed) {
    return 0.0;
  }
  return tau;
}

}  // namespace doggo
