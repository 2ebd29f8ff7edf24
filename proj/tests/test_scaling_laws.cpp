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
#include <random>

#include <doctest.h>

#include "doggo/fixtures.hpp"

namespace doggo {
namespace {

TEST_CASE("radius scaling exponents") {
  const ReferenceMotor ref{0.2, 1.0, 1e-5};

  const ScalingReport identity = scale_with_radius(ref, 1.0);
  CHECK(identity.mass_factor == 1.0);
  CHECK(identity.torque_factor == 1.0);
  CHECK(identity.inertia_factor == 1.0);

  const ScalingReport sqrt3 = scale_with_radius(ref, std::sqrt(3.0));
  CHECK(sqrt3.torque_factor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sqrt3.mass_factor == doctest::Approx(1.7320508).epsilon(1e-6));
  CHECK(sqrt3.inertia_factor == doctest::Approx(5.1961524).epsilon(1e-6));

  const ScalingReport gap13 = scale_with_radius(ref, 1.3);
  CHECK(gap13.mass_factor == doctest::Approx(1.3));
  CHECK(gap13.scaled.mass == doctest::Approx(0.26));

  CHECK_THROWS_AS(scale_with_radius(ref, 0.0), ValidationError);
}

TEST_CASE("exponent consistency holds for any factor") {
  const ReferenceMotor ref{0.3, 2.0, 3e-5};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  for (int i = 0; i < 500; ++i) {
    const ScalingReport r = scale_with_radius(ref, dist(rng));
    CHECK(r.torque_factor ==
          doctest::Approx(r.mass_factor * r.mass_factor).epsilon(1e-12));
    CHECK(r.inertia_factor ==
          doctest::Approx(r.mass_factor * r.mass_factor * r.mass_factor)
              .epsilon(1e-12));
  }
}

TEST_CASE("direct-drive equivalent mass factor") {
  CHECK(dd_equivalent_mass_factor(1.0) == 1.0);
  CHECK(dd_equivalent_mass_factor(3.0) ==
        doctest::Approx(1.7320508).epsilon(1e-6));
  CHECK(dd_equivalent_mass_factor(4.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(dd_equivalent_mass_factor(0.5), ValidationError);

  // Torque parity: the sqrt(N) radius bump recovers exactly the factor N.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(1.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double n = dist(rng);
    const double k = dd_equivalent_mass_factor(n);
    CHECK(k * k == doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("transmission mass budget") {
  CHECK(qdd_mass_budget(0.5, 1.0) == 0.0);

  // Benchmark numbers: the belt comes in well under the allowance.
  const BudgetVerdict verdict = check_transmission_budget(0.2126, 3.0, 0.0574);
  CHECK(verdict.budget_kg == doctest::Approx(0.1556).epsilon(1e-3));
  CHECK(verdict.pass);

  // Boundary convention: exactly on budget still passes.
  const double budget = qdd_mass_budget(0.2126, 3.0);
  CHECK(check_transmission_budget(0.2126, 3.0, budget).pass);
  CHECK_FALSE(check_transmission_budget(0.2126, 3.0, budget + 1e-9).pass);

  // Monotone in both motor mass and ratio.
  double prev = 0.0;
  for (double m = 0.1; m <= 1.0; m += 0.1) {
    const double b = qdd_mass_budget(m, 3.0);
    CHECK(b > prev);
    prev = b;
  }
  prev = -1.0;
  for (double n = 1.0; n <= 10.0; n += 0.5) {
    const double b = qdd_mass_budget(0.2, n);
    CHECK(b > prev);
    prev = b;
  }
}

TEST_CASE("inertia growth for a torque-matched direct drive") {
  CHECK(inertia_ratio_for_torque(1.0) == 1.0);
  CHECK(inertia_ratio_for_torque(1.8) == doctest::Approx(2.415).epsilon(1e-3));
  CHECK(inertia_ratio_for_torque(4.0) == doctest::Approx(8.0).epsilon(1e-12));

  // Chain from the benchmark continuous torques: 1.51/0.86 -> ~2.33
  // (rounding the ratio to 1.8 gives the commonly quoted ~2.4).
  const double ratio = 1.51 / 0.86;
  CHECK(ratio == doctest::Approx(1.7558).epsilon(1e-3));
  CHECK(std::sqrt(ratio) == doctest::Approx(1.3251).epsilon(1e-3));
  CHECK(inertia_ratio_for_torque(ratio) == doctest::Approx(2.3266).epsilon(1e-3));
}

TEST_CASE("fleet mass saving for the benchmark robot") {
  const QddActuator act = load_actuator_fixture("doggo");
  const double saving = fleet_mass_saving(act, 8);
  CHECK(saving == doctest::Approx(0.786).epsilon(2e-3));
  CHECK(saving / 4.8 == doctest::Approx(0.164).epsilon(5e-3));

  // A ratio-1 "transmission" can only cost mass.
  QddActuator dd = act;
  dd.ratio = 1.0;
  CHECK(fleet_mass_saving(dd, 8) ==
        doctest::Approx(-8.0 * act.transmission_mass).epsilon(1e-12));

  CHECK_THROWS_AS(fleet_mass_saving(act, 0), ValidationError);
}

}  // namespace
}  // namespace doggo
