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

#include "doggo/gait.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doggo {

namespace {

constexpr int kValidationGridPoints = 10000;
constexpr double kTargetRateDt = 1e-3;

double frac(double x) { return x - std::floor(x); }

}  // namespace

GaitName gait_from_string(const std::string& name) {
  if (name == "walk") return GaitName::walk;
  if (name == "trot") return GaitName::trot;
  if (name == "bound") return GaitName::bound;
  if (name == "pronk") return GaitName::pronk;
  throw ValidationError("unknown gait '" + name +
                        "' (expected walk, trot, bound, or pronk)");
}

std::string to_string(GaitName name) {
  switch (name) {
    case GaitName::walk: return "walk";
    case GaitName::trot: return "trot";
    case GaitName::bound: return "bound";
    case GaitName::pronk: return "pronk";
  }
  throw std::logic_error("unhandled gait name");
}

std::array<double, 4> preset_offsets(GaitName name) {
  switch (name) {
    case GaitName::walk: return {0.0, 0.5, 0.25, 0.75};
    case GaitName::trot: return {0.0, 0.5, 0.5, 0.0};   // diagonal pairs
    case GaitName::bound: return {0.0, 0.0, 0.5, 0.5};  // front/rear pairs
    case GaitName::pronk: return {0.0, 0.0, 0.0, 0.0};
  }
  throw std::logic_error("unhandled gait name");
}

void GaitParams::validate(const LegGeometry& geom) const {
  geom.validate();
  if (!(t_stance > 0.0) || !(t_flight > 0.0)) {
    throw ValidationError("gait.t_stance and gait.t_flight must be > 0");
  }
  if (stride_length < 0.0) {
    throw ValidationError("gait.stride_length must be >= 0");
  }
  if (step_height < 0.0 || stance_dip < 0.0) {
    throw ValidationError("gait.step_height and gait.stance_dip must be >= 0");
  }
  if (!(neutral_extension > 0.0)) {
    throw ValidationError("gait.neutral_extension must be > 0");
  }
  for (double offset : phase_offsets) {
    if (!(offset >= 0.0 && offset < 1.0)) {
      throw ValidationError("gait.phase_offsets must lie in [0, 1)");
    }
  }
  stance_gains.validate();
  flight_gains.validate();

  for (int i = 0; i < kValidationGridPoints; ++i) {
    const double phase = static_cast<double>(i) / kValidationGridPoints;
    const double r = foot_target(*this, phase).norm();
    if (r < geom.r_min() || r > geom.r_max()) {
      throw ValidationError(
          "gait foot target leaves the leg workspace at phase " +
          std::to_string(phase) + " (r = " + std::to_string(r) + " m)");
    }
  }
}

FootPosition foot_target(const GaitParams& params, double phase) {
  const double period = params.period();
  const double s_frac = frac(phase) * period;
  if (s_frac < params.t_stance) {
    const double u = s_frac / params.t_stance;
    return FootPosition{
        params.stride_length * (0.5 - u),
        -params.neutral_extension -
            params.stance_dip * std::sin(std::numbers::pi * u)};
  }
  const double u = (s_frac - params.t_stance) / params.t_flight;
  return FootPosition{
      params.stride_length * (u - 0.5),
      -params.neutral_extension +
          params.step_height * std::sin(std::numbers::pi * u)};
}

LegCommand leg_command(const GaitParams& params, const LegGeometry& geom,
                       double t, int leg) {
  if (leg < 0 || leg > 3) {
    throw ValidationError("leg index must be 0..3");
  }
  const double period = params.period();
  const double phase =
      frac(t / period + params.phase_offsets[static_cast<std::size_t>(leg)]);

  const VirtualLegState now =
      inverse_kinematics(geom, foot_target(params, phase));
  const VirtualLegState next = inverse_kinematics(
      geom, foot_target(params, phase + kTargetRateDt / period));

  const bool in_stance = phase * period < params.t_stance;
  LegCommand cmd;
  cmd.theta_d = now.theta;
  cmd.gamma_d = now.gamma;
  cmd.theta_dot_d = (next.theta - now.theta) / kTargetRateDt;
  cmd.gamma_dot_d = (next.gamma - now.gamma) / kTargetRateDt;
  cmd.gains = in_stance ? params.stance_gains : params.flight_gains;
  return cmd;
}

GaitParams preset(GaitName name, GaitParams base) {
  base.phase_offsets = preset_offsets(name);
  return base;
}

GaitParams default_gait_fixture() {
  GaitParams params;
  params.t_stance = 0.12;
  params.t_flight = 0.08;
  params.stride_length = 0.10;
  params.step_height = 0.04;
  params.stance_dip = 0.01;
  params.neutral_extension = 0.18;
  params.phase_offsets = preset_offsets(GaitName::trot);
  params.stance_gains = CompliancePdGains{40.0, 0.8, 30.0, 0.5};
  params.flight_gains = CompliancePdGains{6.0, 0.08, 6.0, 0.08};
  return params;
}

}  // namespace doggo
