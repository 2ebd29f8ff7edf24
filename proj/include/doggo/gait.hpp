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

#include <array>
#include <string>

#include "doggo/control.hpp"
#include "doggo/leg_kinematics.hpp"

namespace doggo {

// Open-loop foot trajectories built from two half-sine arcs per cycle: a
// shallow dip during stance while the foot sweeps backward, and a taller
// arc during flight while it swings forward. Gaits differ only in the
// per-leg phase offsets and the shape parameters.

enum class GaitName { walk, trot, bound, pronk };

GaitName gait_from_string(const std::string& name);
std::string to_string(GaitName name);

// Legs are indexed front-left, front-right, rear-left, rear-right.
std::array<double, 4> preset_offsets(GaitName name);

struct GaitParams {
  double t_stance = 0.12;          // s
  double t_flight = 0.08;          // s
  double stride_length = 0.10;     // m
  double step_height = 0.04;       // m, flight arc amplitude
  double stance_dip = 0.01;        // m, stance arc amplitude
  double neutral_extension = 0.18; // m, nominal hip-to-foot distance
  std::array<double, 4> phase_offsets{0.0, 0.0, 0.0, 0.0};
  CompliancePdGains stance_gains;
  CompliancePdGains flight_gains;

  double period() const { return t_stance + t_flight; }

  // Checks positivity and that every point of the cycle stays inside the
  // leg workspace (sampled on a dense phase grid). Throws ValidationError.
  void validate(const LegGeometry& geom) const;
};

// Foot target in the hip frame at a cycle phase in [0, 1). Stance:
//   x = stride_length (1/2 - u),  z = -neutral - stance_dip sin(pi u)
// Flight:
//   x = stride_length (u - 1/2),  z = -neutral + step_height sin(pi u)
// with u the within-piece progress. Continuous at both seams.
FootPosition foot_target(const GaitParams& params, double phase);

// Full per-leg command at time t: IK of the phased foot target plus
// finite-difference target rates (dt = 1 ms) and the gain set for the
// current piece (stance or flight).
LegCommand leg_command(const GaitParams& params, const LegGeometry& geom,
                       double t, int leg);

// Copies base with the phase offsets replaced by the named preset.
GaitParams preset(GaitName name, GaitParams base);

// Operating point used by the bundled simulations. The shape numbers and
// gains are tuned for simulator stability only.
GaitParams default_gait_fixture();

}  // namespace doggo
