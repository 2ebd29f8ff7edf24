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

#include <cmath>
#include <random>

#include <doctest.h>

#include "doggo/fixtures.hpp"

namespace doggo {
namespace {

QddActuator simple_actuator() {
  QddActuator act;
  act.motor = MotorParams{0.1, 0.2, 1e-5, 0.5, 1.6, 0.1, 800.0};
  act.ratio = 3.0;
  act.transmission_mass = 0.05;
  act.efficiency = 1.0;
  return act;
}

TEST_CASE("torque-current relation is linear and invertible") {
  const QddActuator act = simple_actuator();
  CHECK(act.output_torque_from_current(0.0) == 0.0);
  CHECK(act.output_torque_from_current(5.0) == doctest::Approx(1.5));
  CHECK(act.current_from_output_torque(1.5) == doctest::Approx(5.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (int k = 0; k < 100; ++k) {
    const double a = dist(rng);
    const double b = dist(rng);
    CHECK(act.output_torque_from_current(a + b) ==
          doctest::Approx(act.output_torque_from_current(a) +
                          act.output_torque_from_current(b))
              .epsilon(1e-12));
    CHECK(act.current_from_output_torque(act.output_torque_from_current(a)) ==
          doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("reflected inertia scales with the square of the ratio") {
  QddActuator act = simple_actuator();
  act.motor.rotor_inertia = 2.889e-5;
  act.ratio = 3.0;
  CHECK(act.reflected_inertia() ==
        doctest::Approx(2.6e-4).epsilon(1e-3));  // table value, back-solved

  act.ratio = 1.0;
  CHECK(act.reflected_inertia() == act.motor.rotor_inertia);

  act.ratio = 2.0;
  const double at2 = act.reflected_inertia();
  act.ratio = 4.0;
  CHECK(act.reflected_inertia() == doctest::Approx(4.0 * at2).epsilon(1e-12));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> idist(1e-6, 1e-3);
  std::uniform_real_distribution<double> ndist(1.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    act.motor.rotor_inertia = idist(rng);
    act.ratio = ndist(rng);
    CHECK(act.reflected_inertia() ==
          act.motor.rotor_inertia * act.ratio * act.ratio);
  }
}

TEST_CASE("torque density of the benchmark actuators") {
  const QddActuator doggo = load_actuator_fixture("doggo");
  CHECK(doggo.peak_output_torque() == doctest::Approx(4.8).epsilon(1e-9));
  CHECK(doggo.total_mass() == doctest::Approx(0.27).epsilon(1e-9));
  CHECK(doggo.torque_density() == doctest::Approx(17.78).epsilon(0.01));

  const QddActuator minitaur = load_actuator_fixture("minitaur");
  CHECK(minitaur.torque_density() == doctest::Approx(14.0).epsilon(1e-9));

  QddActuator bare = simple_actuator();
  bare.ratio = 1.0;
  bare.transmission_mass = 0.0;
  CHECK(bare.torque_density() ==
        doctest::Approx(bare.motor.peak_torque / bare.motor.mass));
}

TEST_CASE("doggo fixture round-trips motor and output torques") {
  const QddActuator act = load_actuator_fixture("doggo");
  // Output values quoted for the actuator are ratio times the motor-side
  // fixture entries (up to double rounding).
  CHECK(act.motor.peak_torque * act.ratio ==
        doctest::Approx(4.8).epsilon(1e-15));
  CHECK(act.motor.continuous_torque * act.ratio ==
        doctest::Approx(1.51).epsilon(1e-15));
  CHECK(act.peak_output_torque() / act.ratio ==
        doctest::Approx(act.motor.peak_torque).epsilon(1e-15));
}

TEST_CASE("validation rejects non-QDD ratios and bad parameters") {
  QddActuator act = simple_actuator();
  act.validate();
  act.ratio = 12.0;
  CHECK_THROWS_AS(act.validate(), ValidationError);
  act.ratio = 0.5;
  CHECK_THROWS_AS(act.validate(), ValidationError);
  act = simple_actuator();
  act.motor.peak_torque = 0.1;  // below continuous
  CHECK_THROWS_AS(act.validate(), ValidationError);
  act = simple_actuator();
  act.efficiency = 0.0;
  CHECK_THROWS_AS(act.validate(), ValidationError);
}

TEST_CASE("torque budget: peak allowed briefly, continuous after a second") {
  const QddActuator act = load_actuator_fixture("doggo");
  const double peak = act.peak_output_torque();
  const double cont = act.continuous_output_torque();
  CHECK(peak == doctest::Approx(4.8).epsilon(1e-12));
  CHECK(cont == doctest::Approx(1.51).epsilon(1e-12));

  TorqueBudget budget;
  // Below the continuous level commands pass through untouched.
  CHECK(budget.clamp(act, 0.5 * cont, 0.0).torque == 0.5 * cont);
  CHECK_FALSE(budget.clamp(act, 0.5 * cont, 0.001).saturated);

  // Way over peak clamps to peak, sign preserved.
  TorqueBudget b2;
  const ClampedTorque hard = b2.clamp(act, 10.0 * peak, 0.0);
  CHECK(hard.torque == doctest::Approx(peak));
  CHECK(hard.saturated);
  CHECK(b2.clamp(act, -10.0 * peak, 0.1).torque == doctest::Approx(-peak));

  // Constant peak command: peak for the first second, continuous after.
  TorqueBudget b3;
  double t = 0.0;
  const double dt = 1e-3;
  while (t < 2.0) {
    const double tau = b3.clamp(act, peak, t).torque;
    if (t < 1.0 - 1e-9) {
      CHECK(tau == doctest::Approx(peak));
    } else if (t > 1.0 + 1e-9) {
      CHECK(tau == doctest::Approx(cont));
    }
    t += dt;
  }

  // Dropping back to the continuous level re-arms the burst window.
  CHECK(b3.clamp(act, cont, t).torque == doctest::Approx(cont));
  t += dt;
  CHECK(b3.clamp(act, peak, t).torque == doctest::Approx(peak));
}

TEST_CASE("budget never exceeds peak for any command sequence") {
  const QddActuator act = load_actuator_fixture("doggo");
  const double peak = act.peak_output_torque();
  TorqueBudget budget;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> cmd(-60.0, 60.0);
  std::uniform_real_distribution<double> step(1e-5, 0.3);
  double t = 0.0;
  for (int k = 0; k < 5000; ++k) {
    t += step(rng);
    CHECK(std::abs(budget.clamp(act, cmd(rng), t).torque) <= peak + 1e-12);
  }
}

TEST_CASE("budget time must be monotone") {
  const QddActuator act = simple_actuator();
  TorqueBudget budget;
  budget.clamp(act, 0.1, 1.0);
  CHECK_THROWS_AS(budget.clamp(act, 0.1, 0.5), ValidationError);
}

TEST_CASE("speed gate zeroes driving torque past max speed") {
  const QddActuator act = simple_actuator();  // max motor speed 800 rad/s
  const double shaft_limit = act.motor.max_speed / act.ratio;
  CHECK(speed_limited_torque(act, 1.0, 0.5 * shaft_limit) == 1.0);
  CHECK(speed_limited_torque(act, 1.0, shaft_limit) == 0.0);
  CHECK(speed_limited_torque(act, -1.0, shaft_limit) == -1.0);  // braking
  CHECK(speed_limited_torque(act, -1.0, -shaft_limit) == 0.0);
  CHECK(speed_limited_torque(act, 1.0, -shaft_limit) == 1.0);
}

}  // namespace
}  // namespace doggo
