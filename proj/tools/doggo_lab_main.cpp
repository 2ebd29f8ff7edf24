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

// doggo-lab: experiment runner for the quadruped leg laboratory.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "doggo/config.hpp"
#include "doggo/fixtures.hpp"
#include "doggo/scaling_laws.hpp"

namespace {

using nlohmann::json;

constexpr int kUsageError = 64;

struct SimOptions {
  std::string config_path;
  std::string output;
  std::optional<std::uint64_t> seed;
};

doggo::ExperimentConfig resolve_sim_config(const SimOptions& opts,
                                           doggo::ExperimentConfig::Kind kind) {
  doggo::ExperimentConfig cfg =
      opts.config_path.empty()
          ? (kind == doggo::ExperimentConfig::Kind::jump
                 ? doggo::default_jump_config()
                 : doggo::default_run_config())
          : doggo::load_config(opts.config_path);
  if (!opts.config_path.empty() && cfg.kind != kind) {
    throw doggo::ValidationError(
        "config experiment.type does not match the subcommand");
  }
  if (!opts.output.empty()) {
    cfg.output_prefix = opts.output;
  }
  if (opts.seed) {
    cfg.seed = *opts.seed;
  }
  return cfg;
}

// Independent experiments in parallel workers; prefixes must not
// collide so the artifact files cannot race.
int cmd_sweep(const std::vector<std::string>& config_paths) {
  std::vector<doggo::ExperimentConfig> configs;
  for (const std::string& path : config_paths) {
    configs.push_back(doggo::load_config(path));
  }
  for (std::size_t i = 0; i < configs.size(); ++i) {
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      if (configs[i].output_prefix == configs[j].output_prefix) {
        throw doggo::ValidationError("sweep configs share the output prefix '" +
                                     configs[i].output_prefix + "'");
      }
    }
  }

  std::vector<int> codes(configs.size(), 0);
  std::vector<std::thread> workers;
  workers.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    workers.emplace_back([&configs, &codes, i] {
      codes[i] = doggo::run_experiment(configs[i]);
    });
  }
  for (std::thread& w : workers) {
    w.join();
  }

  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::printf("%s: exit %d\n", config_paths[i].c_str(), codes[i]);
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_gait_preview(const std::string& gait_name, double cycles, double dt,
                     bool csv) {
  const doggo::LegGeometry geom;
  const doggo::GaitParams gait = doggo::preset(
      doggo::gait_from_string(gait_name), doggo::default_gait_fixture());
  gait.validate(geom);

  std::cout << "t,leg,phase,x,z,theta_d,gamma_d\n";
  const double period = gait.period();
  for (double t = 0.0; t < cycles * period + 1e-12; t += dt) {
    for (int leg = 0; leg < 4; ++leg) {
      const double phase =
          t / period + gait.phase_offsets[static_cast<std::size_t>(leg)];
      const double wrapped = phase - std::floor(phase);
      const doggo::FootPosition target = doggo::foot_target(gait, wrapped);
      const doggo::LegCommand cmd = doggo::leg_command(gait, geom, t, leg);
      std::printf(csv ? "%.6f,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n"
                      : "%8.4f %3d %8.4f %9.4f %9.4f %9.4f %9.4f\n",
                  t, leg, wrapped, target.x, target.z, cmd.theta_d,
                  cmd.gamma_d);
    }
  }
  return 0;
}

int cmd_scaling(const std::string& fixture, std::optional<double> ratio,
                int count, double robot_mass, bool as_json) {
  const doggo::QddActuator act = doggo::load_actuator_fixture(fixture);
  const double n = ratio.value_or(act.ratio);

  const double dd_factor = doggo::dd_equivalent_mass_factor(n);
  const doggo::BudgetVerdict verdict = doggo::check_transmission_budget(
      act.motor.mass, n, act.transmission_mass);
  doggo::QddActuator fleet_act = act;
  fleet_act.ratio = n;
  const double saving = doggo::fleet_mass_saving(fleet_act, count);
  const doggo::ReferenceMotor ref{act.motor.mass, act.motor.peak_torque,
                                  act.motor.rotor_inertia};
  const doggo::ScalingReport radius = doggo::scale_with_radius(ref, dd_factor);

  // Torque-parity chain between the two benchmark actuators, exact and
  // with the inputs rounded the way they are usually quoted.
  std::optional<double> torque_ratio;
  try {
    const auto table = doggo::load_fixture_library().actuator_table;
    if (table.size() >= 2 && table[1].continuous_torque_nm > 0.0) {
      torque_ratio =
          table[0].continuous_torque_nm / table[1].continuous_torque_nm;
    }
  } catch (const doggo::Error&) {
  }

  if (as_json) {
    json out;
    out["fixture"] = fixture;
    out["ratio"] = n;
    out["motor_mass_kg"] = act.motor.mass;
    out["transmission_mass_kg"] = act.transmission_mass;
    out["dd_equivalent_mass_factor"] = dd_factor;
    out["transmission_budget_kg"] = verdict.budget_kg;
    out["budget_pass"] = verdict.pass;
    out["fleet_count"] = count;
    out["fleet_mass_saving_kg"] = saving;
    out["fleet_saving_fraction_of_robot"] = saving / robot_mass;
    out["radius_scaling"] = {{"radius_factor", radius.radius_factor},
                             {"mass_factor", radius.mass_factor},
                             {"torque_factor", radius.torque_factor},
                             {"inertia_factor", radius.inertia_factor}};
    if (torque_ratio) {
      out["inertia_chain"] = {
          {"torque_ratio", *torque_ratio},
          {"inertia_factor", doggo::inertia_ratio_for_torque(*torque_ratio)},
          {"torque_ratio_rounded", 1.8},
          {"inertia_factor_rounded", doggo::inertia_ratio_for_torque(1.8)}};
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::printf("actuator fixture          %s\n", fixture.c_str());
  std::printf("reduction ratio N         %g\n", n);
  std::printf("motor mass                %.4f kg\n", act.motor.mass);
  std::printf("transmission mass         %.4f kg\n", act.transmission_mass);
  std::printf("dd equivalent mass        x%.4f (same-torque direct drive)\n",
              dd_factor);
  std::printf("transmission budget       %.4f kg\n", verdict.budget_kg);
  std::printf("budget verdict            %s (%.4f kg <= %.4f kg)\n",
              verdict.pass ? "PASS" : "FAIL", act.transmission_mass,
              verdict.budget_kg);
  std::printf("fleet saving (x%-2d)        %.4f kg (%.1f%% of %.1f kg robot)\n",
              count, saving, 100.0 * saving / robot_mass, robot_mass);
  std::printf(
      "radius scaling at k=%.4f: mass x%.4f, torque x%.4f, inertia x%.4f\n",
      radius.radius_factor, radius.mass_factor, radius.torque_factor,
      radius.inertia_factor);
  if (torque_ratio) {
    std::printf(
        "inertia chain: torque ratio %.4f -> inertia x%.4f "
        "(rounded 1.8 -> x%.4f)\n",
        *torque_ratio, doggo::inertia_ratio_for_torque(*torque_ratio),
        doggo::inertia_ratio_for_torque(1.8));
  }
  return 0;
}

std::vector<doggo::FrequencySample> synthetic_first_order_sweep(
    double pole_hz, int points, double f_lo, double f_hi) {
  std::vector<doggo::FrequencySample> sweep;
  sweep.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double f =
        f_lo * std::pow(f_hi / f_lo,
                        static_cast<double>(k) / (points - 1));
    const double ratio = f / pole_hz;
    sweep.push_back({f, 1.0 / std::sqrt(1.0 + ratio * ratio),
                     -std::atan(ratio)});
  }
  return sweep;
}

std::vector<doggo::FrequencySample> read_response_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw doggo::Error("cannot open " + path);
  }
  std::vector<doggo::FrequencySample> sweep;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    if (first && line.find("freq_hz") != std::string::npos) {
      first = false;
      continue;
    }
    first = false;
    doggo::FrequencySample s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.freq_hz, &s.gain,
                    &s.phase_rad) != 3) {
      throw doggo::ParseError("bad response row: " + line);
    }
    sweep.push_back(s);
  }
  return sweep;
}

int cmd_bandwidth(std::optional<double> pole, const std::string& input,
                  int points, bool as_json) {
  std::vector<doggo::FrequencySample> sweep;
  if (pole) {
    sweep = synthetic_first_order_sweep(*pole, points, 5.0, 400.0);
  } else {
    sweep = read_response_csv(input);
  }
  const doggo::CrossoverEstimate est = doggo::bandwidth_crossover(sweep);

  if (as_json) {
    json out;
    out["crossover_hz"] = est.freq_hz;
    out["lower_bound_only"] = est.lower_bound_only;
    if (pole) {
      out["true_pole_hz"] = *pole;
      out["relative_error"] = std::abs(est.freq_hz - *pole) / *pole;
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("crossover %.4f Hz%s\n", est.freq_hz,
                est.lower_bound_only ? " (lower bound; gain never fell to -3 dB)"
                                     : "");
    if (pole) {
      std::printf("true pole %.4f Hz, relative error %.3f%%\n", *pole,
                  100.0 * std::abs(est.freq_hz - *pole) / *pole);
    }
  }
  return 0;
}

int cmd_metrics(const std::string& trace_path, const std::string& actuator,
                double mass, double distance, bool as_json) {
  const doggo::Trace trace = doggo::Trace::read_csv(trace_path);
  json out;

  try {
    out["v_ss_m_per_s"] = doggo::steady_velocity(trace, distance);
  } catch (const doggo::InsufficientTravel&) {
    out["v_ss_m_per_s"] = nullptr;
  }
  try {
    out["jump_height_m"] = doggo::jump_height(trace);
  } catch (const doggo::NoJumpDetected&) {
    out["jump_height_m"] = nullptr;
  }
  if (!actuator.empty() && !out["v_ss_m_per_s"].is_null()) {
    const doggo::QddActuator act = doggo::load_actuator_fixture(actuator);
    const doggo::RunResult run =
        doggo::run_metrics(trace, act, mass, distance);
    out["mean_voltage_v"] = run.mean_voltage;
    out["mean_current_a"] = run.mean_current;
    out["cost_of_transport"] = run.cost_of_transport;
  }
  double mean_power = 0.0;
  for (const doggo::TraceSample& s : trace.samples()) {
    mean_power += s.power_w;
  }
  if (!trace.empty()) {
    mean_power /= static_cast<double>(trace.size());
  }
  out["mean_power_w"] = mean_power;

  json events = json::array();
  for (const doggo::SimEvent& e : doggo::detect_events(trace)) {
    const char* kind = e.kind == doggo::EventKind::takeoff    ? "takeoff"
                       : e.kind == doggo::EventKind::touchdown ? "touchdown"
                                                               : "apex";
    events.push_back({{"t", e.t}, {"kind", kind}});
  }
  out["events"] = events;

  if (as_json) {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : out.items()) {
      if (key == "events") {
        continue;
      }
      std::cout << key << ": " << value.dump() << "\n";
    }
    std::cout << "events: " << events.size() << "\n";
  }
  return 0;
}

int cmd_compare(const std::string& report_path) {
  const doggo::FixtureLibrary lib = doggo::load_fixture_library();
  std::vector<doggo::RobotFixture> computed;
  if (!report_path.empty()) {
    std::ifstream in(report_path);
    if (!in) {
      throw doggo::Error("cannot open " + report_path);
    }
    const json report = json::parse(in);
    doggo::RobotFixture row;
    row.name = "doggo-lab (sim)";
    if (report.contains("config")) {
      const json& cfg = report["config"];
      if (cfg.contains("body") && cfg["body"].contains("mass")) {
        row.mass_kg = cfg["body"]["mass"].get<double>();
      }
    }
    if (report.contains("metrics")) {
      const json& m = report["metrics"];
      if (m.contains("run")) {
        row.v_ss = m["run"]["v_ss_m_per_s"].get<double>();
        row.cot = m["run"]["cost_of_transport"].get<double>();
      }
      if (m.contains("jump")) {
        row.jump_h = m["jump"]["height_m"].get<double>();
        row.agility = m["jump"]["agility_m_per_s"].get<double>();
      }
    }
    computed.push_back(row);
  }

  std::cout << "Actuators\n"
            << doggo::actuator_table_text(lib.actuator_table) << "\n";
  std::cout << doggo::comparison_table(lib.robots, computed);
  return 0;
}

int cmd_kin_check() {
  const doggo::LegGeometry geom;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> theta_dist(-std::numbers::pi,
                                                    std::numbers::pi);
  std::uniform_real_distribution<double> r_dist(geom.r_min() + 1e-12,
                                                geom.r_max() - 1e-12);

  bool ok = true;
  double worst_roundtrip = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double theta = theta_dist(rng);
    const double r = r_dist(rng);
    const doggo::FootPosition p{r * std::sin(theta), -r * std::cos(theta)};
    const doggo::FootPosition q =
        doggo::forward_kinematics(geom, doggo::inverse_kinematics(geom, p));
    worst_roundtrip = std::max(
        worst_roundtrip, std::hypot(q.x - p.x, q.z - p.z));
  }
  ok = ok && worst_roundtrip < 1e-9;
  std::printf("fk/ik roundtrip (1e5 samples)  worst %.3e m  %s\n",
              worst_roundtrip, worst_roundtrip < 1e-9 ? "ok" : "FAIL");

  double worst_jac = 0.0;
  for (double gamma = 0.05; gamma <= std::numbers::pi - 0.05; gamma += 0.05) {
    for (double theta = -1.2; theta <= 1.2; theta += 0.4) {
      const doggo::MotorAngles a =
          doggo::to_motor(doggo::VirtualLegState{theta, gamma});
      const Eigen::Matrix2d jac = doggo::leg_jacobian(geom, a);
      constexpr double h = 1e-6;
      Eigen::Matrix2d fd;
      for (int col = 0; col < 2; ++col) {
        doggo::MotorAngles hi = a;
        doggo::MotorAngles lo = a;
        (col == 0 ? hi.phi1 : hi.phi2) += h;
        (col == 0 ? lo.phi1 : lo.phi2) -= h;
        const doggo::FootPosition ph =
            doggo::forward_kinematics(geom, doggo::to_virtual(hi));
        const doggo::FootPosition pl =
            doggo::forward_kinematics(geom, doggo::to_virtual(lo));
        fd(0, col) = (ph.x - pl.x) / (2.0 * h);
        fd(1, col) = (ph.z - pl.z) / (2.0 * h);
      }
      worst_jac =
          std::max(worst_jac, ((jac - fd).norm() / fd.norm()));
    }
  }
  ok = ok && worst_jac < 1e-6;
  std::printf("analytic vs fd jacobian        worst %.3e    %s\n", worst_jac,
              worst_jac < 1e-6 ? "ok" : "FAIL");

  const double det0 = doggo::leg_jacobian(geom, doggo::to_motor({0.3, 0.0}))
                          .determinant();
  const double detpi =
      doggo::leg_jacobian(geom, doggo::to_motor({0.3, std::numbers::pi}))
          .determinant();
  const bool singular_ok = std::abs(det0) < 1e-12 && std::abs(detpi) < 1e-12;
  ok = ok && singular_ok;
  std::printf("det J at gamma in {0, pi}      %.1e / %.1e   %s\n",
              std::abs(det0), std::abs(detpi), singular_ok ? "ok" : "FAIL");

  std::printf("workspace r_min = %.3f m, r_max = %.3f m\n", geom.r_min(),
              geom.r_max());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doggo-lab: quadruped leg laboratory"};
  app.require_subcommand(1);

  std::string data_dir;
  app.add_option("--data-dir", data_dir,
                 "fixture directory (overrides $DOGGO_LAB_DATA)");

  // sim jump | sim run
  CLI::App* sim = app.add_subcommand("sim", "run a simulation experiment");
  sim->require_subcommand(1);
  SimOptions jump_opts;
  CLI::App* sim_jump = sim->add_subcommand("jump", "crouch-and-extend jump");
  sim_jump->add_option("--config", jump_opts.config_path, "experiment config");
  sim_jump->add_option("--output", jump_opts.output, "output prefix");
  sim_jump->add_option("--seed", jump_opts.seed, "dither seed");
  SimOptions run_opts;
  CLI::App* sim_run = sim->add_subcommand("run", "gait running experiment");
  sim_run->add_option("--config", run_opts.config_path, "experiment config");
  sim_run->add_option("--output", run_opts.output, "output prefix");
  sim_run->add_option("--seed", run_opts.seed, "dither seed");
  CLI::App* sim_sweep =
      sim->add_subcommand("sweep", "run several configs in parallel");
  std::vector<std::string> sweep_configs;
  sim_sweep->add_option("--config", sweep_configs, "experiment config (repeat)")
      ->required();

  // gait preview
  CLI::App* gait = app.add_subcommand("gait", "gait tools");
  gait->require_subcommand(1);
  CLI::App* preview = gait->add_subcommand("preview", "print foot targets");
  std::string gait_name = "trot";
  double cycles = 1.0;
  double preview_dt = 0.01;
  bool preview_csv = false;
  preview->add_option("--gait", gait_name, "walk|trot|bound|pronk");
  preview->add_option("--cycles", cycles, "gait cycles to emit");
  preview->add_option("--dt", preview_dt, "sample period (s)");
  preview->add_flag("--csv", preview_csv, "plain CSV output");

  // scaling
  CLI::App* scaling = app.add_subcommand("scaling", "transmission trade study");
  std::string scaling_fixture = "doggo";
  std::optional<double> scaling_ratio;
  int scaling_count = 8;
  double scaling_robot_mass = 4.8;
  bool scaling_json = false;
  scaling->add_option("--fixture", scaling_fixture, "actuator fixture");
  scaling->add_option("--ratio", scaling_ratio, "override reduction ratio");
  scaling->add_option("--count", scaling_count, "actuators on the robot");
  scaling->add_option("--robot-mass", scaling_robot_mass, "robot mass (kg)");
  scaling->add_flag("--json", scaling_json, "JSON output");

  // bandwidth
  CLI::App* bandwidth =
      app.add_subcommand("bandwidth", "crossover frequency estimation");
  std::optional<double> bw_pole;
  std::string bw_input;
  int bw_points = 30;
  bool bw_json = false;
  bandwidth->add_option("--pole", bw_pole,
                        "synthetic first-order plant pole (Hz)");
  bandwidth->add_option("--input", bw_input,
                        "response CSV (freq_hz,gain,phase_rad)");
  bandwidth->add_option("--points", bw_points, "synthetic sweep points");
  bandwidth->add_flag("--json", bw_json, "JSON output");

  // metrics
  CLI::App* metrics = app.add_subcommand("metrics", "metrics from a trace");
  std::string metrics_trace;
  std::string metrics_actuator;
  double metrics_mass = 4.8;
  double metrics_distance = 0.7;
  bool metrics_json = false;
  metrics->add_option("--trace", metrics_trace, "trace CSV")->required();
  metrics->add_option("--actuator", metrics_actuator,
                      "actuator fixture for electrical metrics");
  metrics->add_option("--mass", metrics_mass, "robot mass (kg)");
  metrics->add_option("--distance", metrics_distance,
                      "velocity window distance (m)");
  metrics->add_flag("--json", metrics_json, "JSON output");

  // compare
  CLI::App* compare = app.add_subcommand("compare", "benchmark tables");
  std::string compare_report;
  compare->add_option("--report", compare_report,
                      "append a computed row from a report.json");

  // kin check
  CLI::App* kin = app.add_subcommand("kin", "kinematics tools");
  kin->require_subcommand(1);
  kin->add_subcommand("check", "run the kinematics property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (!data_dir.empty()) {
    setenv("DOGGO_LAB_DATA", data_dir.c_str(), 1);
  }

  try {
    if (sim_jump->parsed()) {
      return doggo::run_experiment(
          resolve_sim_config(jump_opts, doggo::ExperimentConfig::Kind::jump));
    }
    if (sim_run->parsed()) {
      return doggo::run_experiment(
          resolve_sim_config(run_opts, doggo::ExperimentConfig::Kind::run));
    }
    if (sim_sweep->parsed()) {
      return cmd_sweep(sweep_configs);
    }
    if (preview->parsed()) {
      return cmd_gait_preview(gait_name, cycles, preview_dt, preview_csv);
    }
    if (scaling->parsed()) {
      return cmd_scaling(scaling_fixture, scaling_ratio, scaling_count,
                         scaling_robot_mass, scaling_json);
    }
    if (bandwidth->parsed()) {
      if (!bw_pole && bw_input.empty()) {
        std::cerr << "bandwidth needs --pole or --input\n";
        return kUsageError;
      }
      return cmd_bandwidth(bw_pole, bw_input, bw_points, bw_json);
    }
    if (metrics->parsed()) {
      return cmd_metrics(metrics_trace, metrics_actuator, metrics_mass,
                         metrics_distance, metrics_json);
    }
    if (compare->parsed()) {
      return cmd_compare(compare_report);
    }
    if (kin->parsed()) {
      return cmd_kin_check();
    }
  } catch (const doggo::NoTakeoff& e) {
    std::cerr << "NoTakeoff: " << e.what() << "\n";
    return 2;
  } catch (const doggo::FallDetected& e) {
    std::cerr << "FallDetected: " << e.what() << "\n";
    return 2;
  } catch (const doggo::NumericalDivergence& e) {
    std::cerr << "NumericalDivergence: " << e.what() << "\n";
    return 2;
  } catch (const doggo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
