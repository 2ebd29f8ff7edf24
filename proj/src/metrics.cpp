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

#include "doggo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace doggo {

namespace {

bool all_airborne(const TraceSample& s) {
  return !s.legs[0].contact && !s.legs[1].contact && !s.legs[2].contact &&
         !s.legs[3].contact;
}

bool any_contact(const TraceSample& s) { return !all_airborne(s); }

std::size_t post_transient_start(const Trace& trace) {
  return trace.size() / 4;
}

std::string format_value(const std::optional<double>& v) {
  if (!v) {
    return "N/A";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", *v);
  return buf;
}

std::string format_value(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "N/A";
}

}  // namespace

double cost_of_transport(double mean_voltage, double mean_current,
                         double mass_kg, double v_ss, double g) {
  if (!(mass_kg > 0.0) || !(v_ss > 0.0) || !(g > 0.0)) {
    throw DomainError("cost_of_transport needs mass, v_ss, g > 0");
  }
  return mean_voltage * mean_current / (mass_kg * g * v_ss);
}

double steady_velocity(const Trace& trace, double distance) {
  if (!(distance > 0.0)) {
    throw DomainError("distance must be > 0");
  }
  const std::size_t start = post_transient_start(trace);
  if (trace.size() < 2 || start + 1 >= trace.size()) {
    throw InsufficientTravel("trace too short for a velocity window");
  }
  const double x0 = trace[start].body.x;
  const double t0 = trace[start].t;
  const double target = x0 + distance;
  for (std::size_t k = start + 1; k < trace.size(); ++k) {
    if (trace[k].body.x >= target) {
      const double x_prev = trace[k - 1].body.x;
      const double span = trace[k].body.x - x_prev;
      const double frac = span > 0.0 ? (target - x_prev) / span : 1.0;
      const double t1 =
          trace[k - 1].t + frac * (trace[k].t - trace[k - 1].t);
      return distance / (t1 - t0);
    }
  }
  throw InsufficientTravel(
      "post-transient travel is shorter than " + std::to_string(distance) +
      " m");
}

double jump_height(const Trace& trace) {
  if (trace.empty()) {
    throw NoJumpDetected("empty trace");
  }
  // Liftoff: first fully airborne sample preceded by ground contact.
  std::size_t lift = 0;
  bool grounded_seen = false;
  bool found = false;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (all_airborne(trace[k]) && grounded_seen) {
      lift = k;
      found = true;
      break;
    }
    if (any_contact(trace[k])) {
      grounded_seen = true;
    }
  }
  if (!found) {
    throw NoJumpDetected("trace never leaves the ground");
  }

  double crouch_z = trace[0].body.z;
  for (std::size_t k = 0; k < lift; ++k) {
    crouch_z = std::min(crouch_z, trace[k].body.z);
  }

  // Apex: vertical velocity crossing zero from above during flight; when
  // the flight starts already descending the first airborne sample is
  // the apex.
  if (trace[lift].body.vz <= 0.0) {
    return trace[lift].body.z - crouch_z;
  }
  for (std::size_t k = lift + 1; k < trace.size() && all_airborne(trace[k]);
       ++k) {
    const double v_prev = trace[k - 1].body.vz;
    const double v_now = trace[k].body.vz;
    if (v_prev > 0.0 && v_now <= 0.0) {
      const double frac = v_prev / (v_prev - v_now);
      const double apex_z =
          trace[k - 1].body.z +
          frac * (trace[k].body.z - trace[k - 1].body.z);
      return apex_z - crouch_z;
    }
  }
  throw NoJumpDetected("trace ends before the jump apex");
}

double vertical_jumping_agility(double h, double t_stance, double t_apogee) {
  const double total = t_stance + t_apogee;
  if (!(total > 0.0)) {
    throw DomainError("stance plus apogee time must be > 0");
  }
  return h / total;
}

ElectricalSample electrical_power(double tau_motor, double omega_motor,
                                  const MotorParams& motor) {
  if (!(motor.k_t > 0.0) || !(motor.winding_resistance > 0.0)) {
    throw DomainError("electrical_power needs k_t and winding resistance > 0");
  }
  ElectricalSample s;
  s.amps = std::abs(tau_motor) / motor.k_t;
  const double mechanical = tau_motor * omega_motor;
  const double copper = s.amps * s.amps * motor.winding_resistance;
  s.power_w = std::max(mechanical + copper, 0.0);
  s.volts = s.amps > 0.0 ? s.power_w / s.amps : 0.0;
  return s;
}

RunResult run_metrics(const Trace& trace, const QddActuator& act,
                      double robot_mass_kg, double distance, double g) {
  RunResult result;
  result.v_ss = steady_velocity(trace, distance);

  const std::size_t start = post_transient_start(trace);
  double sum_v = 0.0;
  double sum_i = 0.0;
  std::size_t n = 0;
  for (std::size_t k = start; k < trace.size(); ++k) {
    double bus_current = 0.0;
    for (const LegSample& leg : trace[k].legs) {
      bus_current += std::abs(act.current_from_output_torque(leg.tau1));
      bus_current += std::abs(act.current_from_output_torque(leg.tau2));
    }
    sum_i += bus_current;
    sum_v += bus_current > 0.0 ? trace[k].power_w / bus_current : 0.0;
    ++n;
  }
  if (n == 0) {
    throw EmptySeries("no post-transient samples");
  }
  result.mean_voltage = sum_v / static_cast<double>(n);
  result.mean_current = sum_i / static_cast<double>(n);
  result.cost_of_transport = cost_of_transport(
      result.mean_voltage, result.mean_current, robot_mass_kg, result.v_ss, g);
  return result;
}

std::string comparison_table(const std::vector<RobotFixture>& fixtures,
                             const std::vector<RobotFixture>& computed) {
  static constexpr const char* kColumns[] = {
      "Robot",          "Legs",       "DOF",           "Leg Length (m)",
      "Mass (kg)",      "Motors (%)", "Gear Ratio",    "v_ss (m/s)",
      "CoT",            "Jump (m)",   "Agility (m/s)",
  };
  constexpr int kNumCols = 11;

  std::vector<std::array<std::string, kNumCols>> rows;
  auto add_row = [&rows](const RobotFixture& f) {
    rows.push_back({f.name, format_value(f.legs), format_value(f.dof),
                    format_value(f.leg_length_m), format_value(f.mass_kg),
                    format_value(f.motor_mass_pct), format_value(f.gear_ratio),
                    format_value(f.v_ss), format_value(f.cot),
                    format_value(f.jump_h), format_value(f.agility)});
  };
  for (const RobotFixture& f : fixtures) {
    add_row(f);
  }
  for (const RobotFixture& f : computed) {
    add_row(f);
  }

  std::array<std::size_t, kNumCols> widths;
  for (int c = 0; c < kNumCols; ++c) {
    widths[static_cast<std::size_t>(c)] =
        std::string(kColumns[c]).size();
    for (const auto& row : rows) {
      widths[static_cast<std::size_t>(c)] = std::max(
          widths[static_cast<std::size_t>(c)],
          row[static_cast<std::size_t>(c)].size());
    }
  }

  std::ostringstream out;
  auto emit = [&out, &widths](const std::array<std::string, kNumCols>& row) {
    for (int c = 0; c < kNumCols; ++c) {
      if (c) {
        out << "  ";
      }
      out << row[static_cast<std::size_t>(c)];
      out << std::string(
          widths[static_cast<std::size_t>(c)] -
              row[static_cast<std::size_t>(c)].size(),
          ' ');
    }
    out << "\n";
  };

  std::array<std::string, kNumCols> header;
  for (int c = 0; c < kNumCols; ++c) {
    header[static_cast<std::size_t>(c)] = kColumns[c];
  }
  emit(header);
  std::size_t total = 0;
  for (std::size_t w : widths) {
    total += w;
  }
  out << std::string(total + 2 * (kNumCols - 1), '-') << "\n";
  for (const auto& row : rows) {
    emit(row);
  }
  return out.str();
}

}  // namespace doggo
