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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "doggo/sim.hpp"

namespace doggo {

// A fully resolved experiment: every referenced fixture loaded, every
// module invariant checked.
struct ExperimentConfig {
  enum class Kind { jump, run };

  BodyParams body;
  LegGeometry geometry;
  QddActuator actuator;
  std::string actuator_name = "doggo";
  TwoRateConfig control;
  Kind kind = Kind::jump;
  JumpScript jump;
  GaitParams gait;
  double run_duration = 5.0;
  std::uint64_t seed = 0;
  std::string output_prefix = "doggo-lab-out";

  void validate() const;
};

ExperimentConfig default_jump_config();
ExperimentConfig default_run_config();

// Parses and validates a config file. Absent optional fields take the
// documented defaults. Throws ParseError (malformed JSON, with byte
// position) or ValidationError (invariant violation, naming the field).
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::filesystem::path& data_dir);

// Runs the experiment, writing <prefix>.trace.csv and
// <prefix>.report.json. Returns 0 on success, 2 on simulation errors
// (NoTakeoff, FallDetected, NumericalDivergence), 1 otherwise;
// diagnostics go to stderr.
int run_experiment(const ExperimentConfig& cfg);

// The report document for an already computed experiment; exposed so
// tests can check schema conformance without touching the filesystem.
nlohmann::json build_report(const ExperimentConfig& cfg, const Trace& trace,
                            const JumpResult* jump, const RunResult* run);

// Validates a document against the subset of JSON Schema used by the
// shipped schemas: type, properties, required, items, and enum. Returns
// human-readable violations; empty means conforming.
std::vector<std::string> schema_violations(const nlohmann::json& doc,
                                           const nlohmann::json& schema);

nlohmann::json load_report_schema();
nlohmann::json load_report_schema(const std::filesystem::path& data_dir);

}  // namespace doggo
