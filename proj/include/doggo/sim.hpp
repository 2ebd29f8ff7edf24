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
#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "doggo/actuator.hpp"
#include "doggo/control.hpp"
#include "doggo/gait.hpp"
#include "doggo/leg_kinematics.hpp"
#include "doggo/metrics.hpp"
#include "doggo/trace.hpp"

namespace doggo {

// Planar (sagittal) rigid-trunk simulator. The trunk translates in (x, z)
// and pitches; the four legs are massless linkages whose only swing
// dynamics come from the reflected rotor inertia. Ground contact is a
// kinematic pin: an anchored foot has exactly zero world velocity and the
// leg releases the instant its vertical ground reaction would pull.

struct BodyParams {
  double mass = 4.8;           // kg
  double pitch_inertia = 0.08; // kg m^2, slender-box estimate for the trunk
  double hip_x = 0.17;         // m, fore/aft hip offset from the CoG
  double gravity = 9.81;       // m/s^2

  void validate() const;
};

struct LegState {
  MotorAngles angles;
  MotorRates rates;
  bool contact = false;
  double anchor_x = 0.0;    // world x of the pinned foot (z is 0)
  FootPosition foot_world;  // world foot position at the last step
};

struct SimState {
  double t = 0.0;
  BodyState body;
  std::array<LegState, 4> legs;  // front-left, front-right, rear-left,
                                 // rear-right; pairs share a hip
};

struct MotorTorquePair {
  double tau1 = 0.0;
  double tau2 = 0.0;
};

class PlanarSimulator {
 public:
  PlanarSimulator(const BodyParams& body, const LegGeometry& geom,
                  const QddActuator& act);

  SimState& state() { return state_; }
  const SimState& state() const { return state_; }
  const BodyParams& body() const { return body_; }
  const LegGeometry& geometry() const { return geom_; }

  // Advances one semi-implicit Euler step under the given (already
  // clamped) shaft torques. Contact legs turn torque into ground
  // reaction; flight legs integrate reflected-inertia shaft dynamics.
  // Touchdown and takeoff events are handled inside the step. Throws
  // NumericalDivergence when the state escapes sanity bounds.
  void step(const std::array<MotorTorquePair, 4>& torques, double dt);

  // World-frame ground reaction each contact leg would apply at the
  // current state for the given torques (zero for flight legs and for
  // near-singular configurations).
  std::array<Eigen::Vector2d, 4> ground_reactions(
      const std::array<MotorTorquePair, 4>& torques) const;

  Eigen::Vector2d hip_world(int leg) const;
  Eigen::Vector2d foot_world(int leg) const;

  // Places the trunk level at height z with every leg at the given pose;
  // feet at or below ground are pinned where they stand.
  void reset_standing(double body_z, const VirtualLegState& pose);

 private:
  void project_contact_leg(int leg, double dt);

  BodyParams body_;
  LegGeometry geom_;
  QddActuator act_;
  SimState state_;
};

// Symmetric all-legs jump: settle in a crouch, then switch every leg to
// the extend command at full torque authority.
struct JumpScript {
  double crouch_gamma = 2.8;  // rad
  double hold = 0.5;          // s of settling before extension
  LegCommand extend_command;  // stiff extension target
  double timeout = 2.0;       // s, NoTakeoff beyond this
  CompliancePdGains crouch_gains{40.0, 1.0, 40.0, 1.0};

  void validate(const LegGeometry& geom) const;
};

// Default script used by the bundled jump experiment; gains are tuned
// for simulator stability only.
JumpScript default_jump_script();

// Runs the full crouch/extend/flight sequence through the two-rate loop
// with actuator torque and speed limits. The trace ends at the apex.
// Throws NoTakeoff when the timeout elapses grounded.
std::pair<Trace, JumpResult> simulate_jump(const BodyParams& body,
                                           const LegGeometry& geom,
                                           const QddActuator& act,
                                           const JumpScript& script,
                                           const TwoRateConfig& cfg,
                                           std::uint64_t seed = 0);

// Runs the gait stack (trajectory -> two-rate PD -> clamps -> physics)
// for `duration` seconds and returns the raw trace. Throws FallDetected
// when the trunk drops below 5 cm or pitches past 1 rad.
Trace simulate_gait_trace(const BodyParams& body, const LegGeometry& geom,
                          const QddActuator& act, const GaitParams& gait,
                          double duration, const TwoRateConfig& cfg,
                          std::uint64_t seed = 0);

// simulate_gait_trace plus the run metrics over the post-transient
// window; propagates InsufficientTravel when the run never covers the
// metric distance.
std::pair<Trace, RunResult> simulate_run(const BodyParams& body,
                                         const LegGeometry& geom,
                                         const QddActuator& act,
                                         const GaitParams& gait,
                                         double duration,
                                         const TwoRateConfig& cfg,
                                         std::uint64_t seed = 0);

// Holds one fixed leg command on all legs from a standing start; handy
// for statics checks and force-estimate validation.
Trace simulate_stand(const BodyParams& body, const LegGeometry& geom,
                     const QddActuator& act, const LegCommand& hold,
                     double duration, const TwoRateConfig& cfg,
                     std::uint64_t seed = 0);

enum class EventKind { takeoff, touchdown, apex };

struct SimEvent {
  double t = 0.0;
  EventKind kind = EventKind::takeoff;
};

// Contact-transition and apex events from a trace. Takeoff/touchdown are
// placed between the bracketing samples; the apex interpolates the
// vertical-velocity zero crossing (full flight only).
std::vector<SimEvent> detect_events(const Trace& trace);

}  // namespace doggo
