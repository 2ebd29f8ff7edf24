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

#include "doggo/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace doggo {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<T>();
}

std::vector<std::string> available_actuators(
    const std::filesystem::path& dir) {
  std::vector<std::string> names;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.path().extension() == ".json") {
        names.push_back(entry.path().stem().string());
      }
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DOGGO_LAB_DATA")) {
    return env;
  }
#ifdef DOGGO_LAB_DATA_DIR
  if (std::filesystem::is_directory(DOGGO_LAB_DATA_DIR)) {
    return DOGGO_LAB_DATA_DIR;
  }
#endif
  return "data";
}

FixtureLibrary load_fixture_library(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  FixtureLibrary lib;
  try {
    for (const json& row : doc.at("actuators")) {
      ActuatorTableRow r;
      r.robot = row.at("robot").get<std::string>();
      r.actuator = row.at("actuator").get<std::string>();
      r.cost_usd = row.at("cost_usd").get<double>();
      r.speed_reduction = row.at("speed_reduction").get<double>();
      r.mass_kg = row.at("mass_kg").get<double>();
      r.continuous_torque_nm = row.at("continuous_torque_nm").get<double>();
      r.peak_torque_nm = row.at("peak_torque_nm").get<double>();
      r.max_continuous_power_w =
          row.at("max_continuous_power_w").get<double>();
      r.reflected_inertia_kgm2 =
          row.at("reflected_inertia_kgm2").get<double>();
      lib.actuator_table.push_back(r);
    }
    for (const json& row : doc.at("robots")) {
      RobotFixture f;
      f.name = row.at("name").get<std::string>();
      f.legs = opt_field<int>(row, "legs");
      f.dof = opt_field<int>(row, "dof");
      f.leg_length_m = opt_field<double>(row, "leg_length_m");
      f.mass_kg = opt_field<double>(row, "mass_kg");
      f.motor_mass_pct = opt_field<double>(row, "motor_mass_pct");
      f.gear_ratio = opt_field<double>(row, "gear_ratio");
      f.v_ss = opt_field<double>(row, "v_ss");
      f.cot = opt_field<double>(row, "cot");
      f.jump_h = opt_field<double>(row, "jump_h");
      f.agility = opt_field<double>(row, "agility");
      for (const auto& value :
           {f.leg_length_m, f.mass_kg, f.motor_mass_pct, f.gear_ratio, f.v_ss,
            f.cot, f.jump_h, f.agility}) {
        if (value && !(*value > 0.0)) {
          throw ValidationError("fixture '" + f.name +
                                "' has a nonpositive value");
        }
      }
      lib.robots.push_back(f);
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return lib;
}

FixtureLibrary load_fixture_library() {
  return load_fixture_library(default_data_dir() / "robots.json");
}

QddActuator load_actuator_fixture(const std::string& name_or_path,
                                  const std::filesystem::path& data_dir) {
  std::filesystem::path path = name_or_path;
  if (!std::filesystem::exists(path)) {
    path = data_dir / "actuators" / (name_or_path + ".json");
    if (!std::filesystem::exists(path)) {
      std::string msg = "unknown actuator fixture '" + name_or_path +
                        "'; available:";
      for (const std::string& name :
           available_actuators(data_dir / "actuators")) {
        msg += " " + name;
      }
      throw ValidationError(msg);
    }
  }

  const json doc = parse_file(path);
  QddActuator act;
  try {
    act.motor.k_t = doc.at("k_t").get<double>();
    act.motor.mass = doc.at("mass").get<double>();
    act.motor.rotor_inertia = doc.at("rotor_inertia").get<double>();
    act.motor.continuous_torque = doc.at("continuous_torque").get<double>();
    act.motor.peak_torque = doc.at("peak_torque").get<double>();
    act.motor.winding_resistance =
        doc.at("winding_resistance").get<double>();
    act.motor.max_speed = doc.at("max_speed").get<double>();
    act.ratio = doc.at("ratio").get<double>();
    act.transmission_mass = doc.at("transmission_mass").get<double>();
    act.efficiency = doc.at("efficiency").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  act.validate();
  return act;
}

QddActuator load_actuator_fixture(const std::string& name_or_path) {
  return load_actuator_fixture(name_or_path, default_data_dir());
}

std::string actuator_table_text(const std::vector<ActuatorTableRow>& rows) {
  auto format = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  auto ratio = [&format](double v) { return format(v) + ":1"; };

  std::vector<std::pair<std::string, std::vector<std::string>>> lines = {
      {"Robot", {}},
      {"Actuator", {}},
      {"Cost ($)", {}},
      {"Speed Reduction", {}},
      {"Mass (kg)", {}},
      {"Continuous Torque (Nm)", {}},
      {"Peak Torque (Nm)", {}},
      {"Max Continuous Power (W)", {}},
      {"Reflected Inertia (kg m^2)", {}},
  };
  for (const ActuatorTableRow& r : rows) {
    lines[0].second.push_back(r.robot);
    lines[1].second.push_back(r.actuator);
    lines[2].second.push_back(format(r.cost_usd));
    lines[3].second.push_back(ratio(r.speed_reduction));
    lines[4].second.push_back(format(r.mass_kg));
    lines[5].second.push_back(format(r.continuous_torque_nm));
    lines[6].second.push_back(format(r.peak_torque_nm));
    lines[7].second.push_back(format(r.max_continuous_power_w));
    lines[8].second.push_back(format(r.reflected_inertia_kgm2));
  }

  std::size_t label_width = 0;
  for (const auto& [label, cells] : lines) {
    label_width = std::max(label_width, label.size());
  }
  std::vector<std::size_t> widths(rows.size(), 0);
  for (const auto& [label, cells] : lines) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      widths[c] = std::max(widths[c], cells[c].size());
    }
  }

  std::ostringstream out;
  for (const auto& [label, cells] : lines) {
    out << label << std::string(label_width - label.size(), ' ');
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << "  " << cells[c]
          << std::string(widths[c] - cells[c].size(), ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace doggo
