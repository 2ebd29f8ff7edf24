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

#include "doggo/config.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "doggo/fixtures.hpp"

namespace doggo {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void reject_unknown_keys(const json& j, const char* section,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(std::string(section) + "." + key +
                            " is not a recognized field");
    }
  }
}

double num_or(const json& j, const char* section, const char* key,
              double fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_number()) {
    throw ValidationError(std::string(section) + "." + key +
                          " must be a number");
  }
  return j.at(key).get<double>();
}

bool bool_or(const json& j, const char* section, const char* key,
             bool fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  if (!j.at(key).is_boolean()) {
    throw ValidationError(std::string(section) + "." + key +
                          " must be a boolean");
  }
  return j.at(key).get<bool>();
}

CompliancePdGains parse_gains(const json& j, const char* section,
                              const CompliancePdGains& fallback) {
  if (j.is_null()) {
    return fallback;
  }
  if (!j.is_object()) {
    throw ValidationError(std::string(section) + " must be an object");
  }
  reject_unknown_keys(j, section,
                      {"kp_theta", "kd_theta", "kp_gamma", "kd_gamma"});
  CompliancePdGains g;
  g.kp_theta = num_or(j, section, "kp_theta", fallback.kp_theta);
  g.kd_theta = num_or(j, section, "kd_theta", fallback.kd_theta);
  g.kp_gamma = num_or(j, section, "kp_gamma", fallback.kp_gamma);
  g.kd_gamma = num_or(j, section, "kd_gamma", fallback.kd_gamma);
  return g;
}

QddActuator parse_inline_actuator(const json& j) {
  reject_unknown_keys(
      j, "actuator",
      {"k_t", "mass", "rotor_inertia", "continuous_torque", "peak_torque",
       "winding_resistance", "max_speed", "ratio", "transmission_mass",
       "efficiency", "_notes"});
  QddActuator act;
  act.motor.k_t = num_or(j, "actuator", "k_t", 0.0);
  act.motor.mass = num_or(j, "actuator", "mass", 0.0);
  act.motor.rotor_inertia = num_or(j, "actuator", "rotor_inertia", 0.0);
  act.motor.continuous_torque =
      num_or(j, "actuator", "continuous_torque", 0.0);
  act.motor.peak_torque = num_or(j, "actuator", "peak_torque", 0.0);
  act.motor.winding_resistance =
      num_or(j, "actuator", "winding_resistance", 0.0);
  act.motor.max_speed = num_or(j, "actuator", "max_speed", 0.0);
  act.ratio = num_or(j, "actuator", "ratio", 1.0);
  act.transmission_mass = num_or(j, "actuator", "transmission_mass", 0.0);
  act.efficiency = num_or(j, "actuator", "efficiency", 1.0);
  act.validate();
  return act;
}

GaitParams parse_gait(const json& j) {
  GaitParams gait = default_gait_fixture();
  if (j.is_null()) {
    return gait;
  }
  reject_unknown_keys(j, "gait",
                      {"name", "t_stance", "t_flight", "stride_length",
                       "step_height", "stance_dip", "neutral_extension",
                       "phase_offsets", "stance_gains", "flight_gains"});
  gait.t_stance = num_or(j, "gait", "t_stance", gait.t_stance);
  gait.t_flight = num_or(j, "gait", "t_flight", gait.t_flight);
  gait.stride_length = num_or(j, "gait", "stride_length", gait.stride_length);
  gait.step_height = num_or(j, "gait", "step_height", gait.step_height);
  gait.stance_dip = num_or(j, "gait", "stance_dip", gait.stance_dip);
  gait.neutral_extension =
      num_or(j, "gait", "neutral_extension", gait.neutral_extension);
  if (j.contains("name")) {
    gait.phase_offsets =
        preset_offsets(gait_from_string(j.at("name").get<std::string>()));
  }
  if (j.contains("phase_offsets")) {
    const json& offs = j.at("phase_offsets");
    if (!offs.is_array() || offs.size() != 4) {
      throw ValidationError("gait.phase_offsets must be an array of 4 values");
    }
    for (int i = 0; i < 4; ++i) {
      gait.phase_offsets[static_cast<std::size_t>(i)] =
          offs[static_cast<std::size_t>(i)].get<double>();
    }
  }
  gait.stance_gains = parse_gains(j.value("stance_gains", json()),
                                  "gait.stance_gains", gait.stance_gains);
  gait.flight_gains = parse_gains(j.value("flight_gains", json()),
                                  "gait.flight_gains", gait.flight_gains);
  return gait;
}

JumpScript parse_jump(const json& j) {
  JumpScript script = default_jump_script();
  if (j.is_null()) {
    return script;
  }
  script.crouch_gamma = num_or(j, "jump", "crouch_gamma", script.crouch_gamma);
  script.hold = num_or(j, "jump", "hold", script.hold);
  script.timeout = num_or(j, "jump", "timeout", script.timeout);
  script.crouch_gains = parse_gains(j.value("crouch_gains", json()),
                                    "jump.crouch_gains", script.crouch_gains);
  if (j.contains("extend")) {
    const json& e = j.at("extend");
    reject_unknown_keys(e, "jump.extend",
                        {"theta", "gamma", "theta_dot", "gamma_dot", "gains"});
    script.extend_command.theta_d =
        num_or(e, "jump.extend", "theta", script.extend_command.theta_d);
    script.extend_command.gamma_d =
        num_or(e, "jump.extend", "gamma", script.extend_command.gamma_d);
    script.extend_command.theta_dot_d = num_or(
        e, "jump.extend", "theta_dot", script.extend_command.theta_dot_d);
    script.extend_command.gamma_dot_d = num_or(
        e, "jump.extend", "gamma_dot", script.extend_command.gamma_dot_d);
    script.extend_command.gains =
        parse_gains(e.value("gains", json()), "jump.extend.gains",
                    script.extend_command.gains);
  }
  return script;
}

json gains_to_json(const CompliancePdGains& g) {
  return json{{"kp_theta", g.kp_theta},
              {"kd_theta", g.kd_theta},
              {"kp_gamma", g.kp_gamma},
              {"kd_gamma", g.kd_gamma}};
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["body"] = {{"mass", cfg.body.mass},
               {"pitch_inertia", cfg.body.pitch_inertia},
               {"hip_x", cfg.body.hip_x},
               {"gravity", cfg.body.gravity}};
  j["geometry"] = {{"l1", cfg.geometry.l1}, {"l2", cfg.geometry.l2}};
  j["actuator"] = {{"name", cfg.actuator_name},
                   {"k_t", cfg.actuator.motor.k_t},
                   {"mass", cfg.actuator.motor.mass},
                   {"rotor_inertia", cfg.actuator.motor.rotor_inertia},
                   {"continuous_torque", cfg.actuator.motor.continuous_torque},
                   {"peak_torque", cfg.actuator.motor.peak_torque},
                   {"winding_resistance",
                    cfg.actuator.motor.winding_resistance},
                   {"max_speed", cfg.actuator.motor.max_speed},
                   {"ratio", cfg.actuator.ratio},
                   {"transmission_mass", cfg.actuator.transmission_mass},
                   {"efficiency", cfg.actuator.efficiency}};
  j["control"] = {{"outer_rate", cfg.control.outer_rate},
                  {"inner_rate", cfg.control.inner_rate},
                  {"encoder_cpr", cfg.control.encoder_cpr},
                  {"quantize_encoders", cfg.control.quantize_encoders},
                  {"encoder_dither", cfg.control.encoder_dither}};
  if (cfg.kind == ExperimentConfig::Kind::jump) {
    j["experiment"] = {
        {"type", "jump"},
        {"crouch_gamma", cfg.jump.crouch_gamma},
        {"hold", cfg.jump.hold},
        {"timeout", cfg.jump.timeout},
        {"crouch_gains", gains_to_json(cfg.jump.crouch_gains)},
        {"extend",
         {{"theta", cfg.jump.extend_command.theta_d},
          {"gamma", cfg.jump.extend_command.gamma_d},
          {"theta_dot", cfg.jump.extend_command.theta_dot_d},
          {"gamma_dot", cfg.jump.extend_command.gamma_dot_d},
          {"gains", gains_to_json(cfg.jump.extend_command.gains)}}}};
  } else {
    j["experiment"] = {
        {"type", "run"},
        {"duration", cfg.run_duration},
        {"gait",
         {{"t_stance", cfg.gait.t_stance},
          {"t_flight", cfg.gait.t_flight},
          {"stride_length", cfg.gait.stride_length},
          {"step_height", cfg.gait.step_height},
          {"stance_dip", cfg.gait.stance_dip},
          {"neutral_extension", cfg.gait.neutral_extension},
          {"phase_offsets", cfg.gait.phase_offsets},
          {"stance_gains", gains_to_json(cfg.gait.stance_gains)},
          {"flight_gains", gains_to_json(cfg.gait.flight_gains)}}}};
  }
  j["seed"] = cfg.seed;
  j["output"] = cfg.output_prefix;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  body.validate();
  geometry.validate();
  actuator.validate();
  control.validate();
  if (kind == Kind::jump) {
    jump.validate(geometry);
  } else {
    gait.validate(geometry);
    if (!(run_duration >= 10.0 * gait.period())) {
      throw ValidationError(
          "experiment.duration must cover at least 10 strides");
    }
  }
  if (output_prefix.empty()) {
    throw ValidationError("output prefix must not be empty");
  }
}

ExperimentConfig default_jump_config() {
  ExperimentConfig cfg;
  cfg.actuator = load_actuator_fixture("doggo");
  cfg.kind = ExperimentConfig::Kind::jump;
  cfg.jump = default_jump_script();
  return cfg;
}

ExperimentConfig default_run_config() {
  ExperimentConfig cfg;
  cfg.actuator = load_actuator_fixture("doggo");
  cfg.kind = ExperimentConfig::Kind::run;
  cfg.gait = default_gait_fixture();
  cfg.run_duration = 5.0;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::filesystem::path& data_dir) {
  const json doc = parse_json_file(path);
  if (!doc.is_object()) {
    throw ValidationError(path.string() + ": config root must be an object");
  }
  reject_unknown_keys(doc, "config",
                      {"body", "geometry", "actuator", "control",
                       "experiment", "seed", "output"});

  ExperimentConfig cfg;

  if (doc.contains("body")) {
    const json& b = doc.at("body");
    reject_unknown_keys(b, "body",
                        {"mass", "pitch_inertia", "hip_x", "gravity"});
    cfg.body.mass = num_or(b, "body", "mass", cfg.body.mass);
    cfg.body.pitch_inertia =
        num_or(b, "body", "pitch_inertia", cfg.body.pitch_inertia);
    cfg.body.hip_x = num_or(b, "body", "hip_x", cfg.body.hip_x);
    cfg.body.gravity = num_or(b, "body", "gravity", cfg.body.gravity);
  }

  if (doc.contains("geometry")) {
    const json& g = doc.at("geometry");
    reject_unknown_keys(g, "geometry", {"l1", "l2"});
    cfg.geometry.l1 = num_or(g, "geometry", "l1", cfg.geometry.l1);
    cfg.geometry.l2 = num_or(g, "geometry", "l2", cfg.geometry.l2);
  }

  if (doc.contains("actuator")) {
    const json& a = doc.at("actuator");
    if (a.is_string()) {
      cfg.actuator_name = a.get<std::string>();
      cfg.actuator = load_actuator_fixture(cfg.actuator_name, data_dir);
    } else if (a.is_object()) {
      cfg.actuator_name = "inline";
      cfg.actuator = parse_inline_actuator(a);
    } else {
      throw ValidationError("actuator must be a fixture name or an object");
    }
  } else {
    cfg.actuator = load_actuator_fixture(cfg.actuator_name, data_dir);
  }

  if (doc.contains("control")) {
    const json& c = doc.at("control");
    reject_unknown_keys(c, "control",
                        {"outer_rate", "inner_rate", "encoder_cpr",
                         "quantize_encoders", "encoder_dither"});
    cfg.control.outer_rate =
        num_or(c, "control", "outer_rate", cfg.control.outer_rate);
    cfg.control.inner_rate =
        num_or(c, "control", "inner_rate", cfg.control.inner_rate);
    cfg.control.encoder_cpr = static_cast<int>(num_or(
        c, "control", "encoder_cpr", cfg.control.encoder_cpr));
    cfg.control.quantize_encoders = bool_or(
        c, "control", "quantize_encoders", cfg.control.quantize_encoders);
    cfg.control.encoder_dither =
        bool_or(c, "control", "encoder_dither", cfg.control.encoder_dither);
  }

  if (!doc.contains("experiment")) {
    throw ValidationError("config needs an experiment section");
  }
  const json& exp = doc.at("experiment");
  if (!exp.contains("type") || !exp.at("type").is_string()) {
    throw ValidationError("experiment.type must be \"jump\" or \"run\"");
  }
  const std::string type = exp.at("type").get<std::string>();
  if (type == "jump") {
    reject_unknown_keys(exp, "experiment",
                        {"type", "crouch_gamma", "hold", "timeout",
                         "crouch_gains", "extend"});
    cfg.kind = ExperimentConfig::Kind::jump;
    cfg.jump = parse_jump(exp);
  } else if (type == "run") {
    reject_unknown_keys(exp, "experiment", {"type", "gait", "duration"});
    cfg.kind = ExperimentConfig::Kind::run;
    cfg.gait = parse_gait(exp.value("gait", json()));
    cfg.run_duration = num_or(exp, "experiment", "duration", 5.0);
  } else {
    throw ValidationError("experiment.type must be \"jump\" or \"run\", got '" +
                          type + "'");
  }

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw ValidationError("seed must be a nonnegative integer");
    }
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    cfg.output_prefix = doc.at("output").get<std::string>();
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return load_config(path, default_data_dir());
}

nlohmann::json build_report(const ExperimentConfig& cfg, const Trace& trace,
                            const JumpResult* jump, const RunResult* run) {
  json report;
  report["version"] = kVersion;
  report["experiment"] =
      cfg.kind == ExperimentConfig::Kind::jump ? "jump" : "run";
  report["config"] = config_to_json(cfg);

  json metrics;
  if (jump != nullptr) {
    metrics["jump"] = {{"height_m", jump->h},
                       {"t_stance_s", jump->t_stance},
                       {"t_apogee_s", jump->t_apogee},
                       {"agility_m_per_s", jump->agility}};
  }
  if (run != nullptr) {
    metrics["run"] = {{"v_ss_m_per_s", run->v_ss},
                      {"mean_voltage_v", run->mean_voltage},
                      {"mean_current_a", run->mean_current},
                      {"cost_of_transport", run->cost_of_transport}};
  }
  report["metrics"] = metrics;

  json events = json::array();
  for (const SimEvent& e : detect_events(trace)) {
    const char* kind = e.kind == EventKind::takeoff    ? "takeoff"
                       : e.kind == EventKind::touchdown ? "touchdown"
                                                        : "apex";
    events.push_back({{"t", e.t}, {"kind", kind}});
  }
  report["events"] = events;

  // Hardware benchmark values for the same platform, for side-by-side
  // reading; never asserted against simulation output.
  try {
    for (const RobotFixture& f : load_fixture_library().robots) {
      if (f.name == "Stanford Doggo") {
        json ref;
        if (f.jump_h) ref["jump_height_m"] = *f.jump_h;
        if (f.agility) ref["agility_m_per_s"] = *f.agility;
        if (f.v_ss) ref["v_ss_m_per_s"] = *f.v_ss;
        if (f.cot) ref["cost_of_transport"] = *f.cot;
        report["hardware_reference"] = ref;
        break;
      }
    }
  } catch (const Error&) {
    // Fixture file unavailable; the report simply omits the reference.
  }
  return report;
}

int run_experiment(const ExperimentConfig& cfg) {
  try {
    cfg.validate();
    Trace trace;
    std::optional<JumpResult> jump;
    std::optional<RunResult> run;
    if (cfg.kind == ExperimentConfig::Kind::jump) {
      auto [t, r] = simulate_jump(cfg.body, cfg.geometry, cfg.actuator,
                                  cfg.jump, cfg.control, cfg.seed);
      trace = std::move(t);
      jump = r;
    } else {
      auto [t, r] = simulate_run(cfg.body, cfg.geometry, cfg.actuator,
                                 cfg.gait, cfg.run_duration, cfg.control,
                                 cfg.seed);
      trace = std::move(t);
      run = r;
    }

    const std::filesystem::path prefix(cfg.output_prefix);
    if (prefix.has_parent_path()) {
      std::filesystem::create_directories(prefix.parent_path());
    }
    trace.write_csv(cfg.output_prefix + ".trace.csv");

    const json report = build_report(cfg, trace, jump ? &*jump : nullptr,
                                     run ? &*run : nullptr);
    std::ofstream out(cfg.output_prefix + ".report.json");
    if (!out) {
      throw Error("cannot write report: " + cfg.output_prefix +
                  ".report.json");
    }
    out << report.dump(2) << "\n";
    return 0;
  } catch (const NoTakeoff& e) {
    std::cerr << "NoTakeoff: " << e.what() << "\n";
    return 2;
  } catch (const FallDetected& e) {
    std::cerr << "FallDetected: " << e.what() << "\n";
    return 2;
  } catch (const NumericalDivergence& e) {
    std::cerr << "NumericalDivergence: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<std::string> schema_violations(const nlohmann::json& doc,
                                           const nlohmann::json& schema) {
  std::vector<std::string> out;

  struct Checker {
    std::vector<std::string>& out;

    void check(const json& d, const json& s, const std::string& path) {
      if (s.contains("type")) {
        const std::string type = s.at("type").get<std::string>();
        const bool ok =
            (type == "object" && d.is_object()) ||
            (type == "array" && d.is_array()) ||
            (type == "string" && d.is_string()) ||
            (type == "number" && d.is_number()) ||
            (type == "integer" && d.is_number_integer()) ||
            (type == "boolean" && d.is_boolean()) ||
            (type == "null" && d.is_null());
        if (!ok) {
          out.push_back(path + ": expected " + type);
          return;
        }
      }
      if (s.contains("enum")) {
        bool hit = false;
        for (const json& candidate : s.at("enum")) {
          if (candidate == d) {
            hit = true;
            break;
          }
        }
        if (!hit) {
          out.push_back(path + ": value not in enum");
        }
      }
      if (d.is_object()) {
        if (s.contains("required")) {
          for (const json& key : s.at("required")) {
            if (!d.contains(key.get<std::string>())) {
              out.push_back(path + ": missing required '" +
                            key.get<std::string>() + "'");
            }
          }
        }
        if (s.contains("properties")) {
          for (const auto& [key, sub] : s.at("properties").items()) {
            if (d.contains(key)) {
              check(d.at(key), sub, path + "/" + key);
            }
          }
        }
      }
      if (d.is_array() && s.contains("items")) {
        for (std::size_t i = 0; i < d.size(); ++i) {
          check(d[i], s.at("items"), path + "/" + std::to_string(i));
        }
      }
    }
  };

  Checker{out}.check(doc, schema, "");
  return out;
}

nlohmann::json load_report_schema(const std::filesystem::path& data_dir) {
  return parse_json_file(data_dir / "report.schema.json");
}

nlohmann::json load_report_schema() {
  return load_report_schema(default_data_dir());
}

}  // namespace doggo
