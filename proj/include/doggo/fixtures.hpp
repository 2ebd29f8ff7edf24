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

#include <filesystem>
#include <string>
#include <vector>

#include "doggo/actuator.hpp"
#include "doggo/metrics.hpp"

namespace doggo {

// Published actuator comparison row (QDD vs DD benchmark data).
struct ActuatorTableRow {
  std::string robot;
  std::string actuator;
  double cost_usd = 0.0;
  double speed_reduction = 1.0;
  double mass_kg = 0.0;
  double continuous_torque_nm = 0.0;
  double peak_torque_nm = 0.0;
  double max_continuous_power_w = 0.0;
  double reflected_inertia_kgm2 = 0.0;
};

struct FixtureLibrary {
  std::vector<ActuatorTableRow> actuator_table;
  std::vector<RobotFixture> robots;
};

// Resolves the data directory: $DOGGO_LAB_DATA if set, otherwise the
// compiled-in source location, otherwise ./data.
std::filesystem::path default_data_dir();

// Loads the benchmark fixture file (robots.json).
FixtureLibrary load_fixture_library(const std::filesystem::path& path);
FixtureLibrary load_fixture_library();  // from default_data_dir()

// Loads an actuator parameter file. `name_or_path` may be a fixture name
// (resolved under <data>/actuators/<name>.json) or an explicit path.
// Unknown names raise ValidationError listing the available fixtures.
QddActuator load_actuator_fixture(const std::string& name_or_path);
QddActuator load_actuator_fixture(const std::string& name_or_path,
                                  const std::filesystem::path& data_dir);

std::string actuator_table_text(const std::vector<ActuatorTableRow>& rows);

}  // namespace doggo
