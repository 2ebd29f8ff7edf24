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

#include "doggo/sim.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

namespace doggo {

namespace {

constexpr double kMaxBodyZ = 10.0;   // m, divergence bound
constexpr double kMaxSpeed = 50.0;   // m/s
constexpr double kFallHeightM = 0.05;
constexpr double kFallPitchRad = 1.0;
constexpr double kReachMargin = 1e-9;
constexpr double kGroundEps = 1e-12;

// (x, z) plane; positive pitch rotates +x toward +z (nose up).
Eigen::Matrix2d rotation(double pitch) {
  const double c = std::cos(pitch);
  const double s = std::sin(pitch);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Foot force on the environment in the hip frame, zeroed near rank loss
// so torque at a singular pose produces a bounded (absent) reaction.
Eigen::Vector2d guarded_foot_force(const Eigen::Matrix2d& jacobian,
                                   const Eigen::Vector2d& tau) {
  if (!(condition_number(jacobian) < kSingularConditionLimit)) {
    return Eigen::Vector2d::Zero();
  }
  return jacobian.transpose().inverse() * tau;
}

bool any_contact(const SimState& s) {
  return s.legs[0].contact || s.legs[1].contact || s.legs[2].contact ||
         s.legs[3].contact;
}

}  // namespace

void BodyParams::validate() const {
  if (!(mass > 0.0) || !(pitch_inertia > 0.0)) {
    throw ValidationError("body.mass and body.pitch_inertia must be > 0");
  }
  if (!(gravity > 0.0)) {
    throw ValidationError("body.gravity must be > 0");
  }
  if (!(hip_x >= 0.0)) {
    throw ValidationError("body.hip_x must be >= 0");
  }
}

PlanarSimulator::PlanarSimulator(const BodyParams& body,
                                 const LegGeometry& geom,
                                 const QddActuator& act)
    : body_(body), geom_(geom), act_(act) {
  body_.validate();
  geom_.validate();
  act_.validate();
}

Eigen::Vector2d PlanarSimulator::hip_world(int leg) const {
  const double sign = leg < 2 ? 1.0 : -1.0;
  const Eigen::Vector2d cog(state_.body.x, state_.body.z);
  return cog + rotation(state_.body.pitch) *
                   Eigen::Vector2d(sign * body_.hip_x, 0.0);
}

Eigen::Vector2d PlanarSimulator::foot_world(int leg) const {
  const LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
  const FootPosition fb = forward_kinematics(geom_, to_virtual(ls.angles));
  return hip_world(leg) +
         rotation(state_.body.pitch) * Eigen::Vector2d(fb.x, fb.z);
}

std::array<Eigen::Vector2d, 4> PlanarSimulator::ground_reactions(
    const std::array<MotorTorquePair, 4>& torques) const {
  std::array<Eigen::Vector2d, 4> reactions;
  const Eigen::Matrix2d rot = rotation(state_.body.pitch);
  for (int leg = 0; leg < 4; ++leg) {
    const LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    if (!ls.contact) {
      reactions[static_cast<std::size_t>(leg)].setZero();
      continue;
    }
    const Eigen::Matrix2d jac = leg_jacobian(geom_, ls.angles);
    const Eigen::Vector2d tau(
        torques[static_cast<std::size_t>(leg)].tau1,
        torques[static_cast<std::size_t>(leg)].tau2);
    // Reaction on the robot is minus the force the foot exerts on the
    // ground, rotated into the world frame.
    reactions[static_cast<std::size_t>(leg)] =
        -(rot * guarded_foot_force(jac, tau));
  }
  return reactions;
}

void PlanarSimulator::project_contact_leg(int leg, double dt) {
  LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
  const Eigen::Vector2d anchor(ls.anchor_x, 0.0);
  const Eigen::Vector2d d_body =
      rotation(state_.body.pitch).transpose() * (anchor - hip_world(leg));
  const double r = d_body.norm();
  if (r >= geom_.r_max() - kReachMargin || r <= geom_.r_min() + kReachMargin) {
    // Anchor left the workspace; a pin the leg cannot span must release.
    ls.contact = false;
    const Eigen::Vector2d fw = foot_world(leg);
    ls.foot_world = FootPosition{fw.x(), fw.y()};
    return;
  }
  const VirtualLegState pose =
      inverse_kinematics(geom_, FootPosition{d_body.x(), d_body.y()});
  const MotorAngles next = to_motor(pose);
  ls.rates.phi1_dot = (next.phi1 - ls.angles.phi1) / dt;
  ls.rates.phi2_dot = (next.phi2 - ls.angles.phi2) / dt;
  ls.angles = next;
  ls.foot_world = FootPosition{anchor.x(), 0.0};
}

void PlanarSimulator::step(const std::array<MotorTorquePair, 4>& torques,
                           double dt) {
  // A pinned foot cannot pull: legs whose vertical reaction would point
  // into the ground release before any force is applied.
  const std::array<Eigen::Vector2d, 4> reactions = ground_reactions(torques);
  for (int leg = 0; leg < 4; ++leg) {
    LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    if (ls.contact && reactions[static_cast<std::size_t>(leg)].y() < 0.0) {
      ls.contact = false;
    }
  }

  Eigen::Vector2d force(0.0, -body_.mass * body_.gravity);
  double moment = 0.0;
  const Eigen::Vector2d cog(state_.body.x, state_.body.z);
  for (int leg = 0; leg < 4; ++leg) {
    const LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    if (!ls.contact) {
      continue;
    }
    const Eigen::Vector2d& g = reactions[static_cast<std::size_t>(leg)];
    force += g;
    // The massless-leg wrench reduces to the ground reaction acting at
    // the anchored foot (motor reaction couples included).
    moment += cross2(Eigen::Vector2d(ls.anchor_x, 0.0) - cog, g);
  }

  // Flight legs: the reflected rotor inertia is the only swing dynamics.
  const double inertia = act_.reflected_inertia();
  for (int leg = 0; leg < 4; ++leg) {
    LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    if (ls.contact) {
      continue;
    }
    const MotorTorquePair& tau = torques[static_cast<std::size_t>(leg)];
    ls.rates.phi1_dot += tau.tau1 / inertia * dt;
    ls.rates.phi2_dot += tau.tau2 / inertia * dt;
    ls.angles.phi1 += ls.rates.phi1_dot * dt;
    ls.angles.phi2 += ls.rates.phi2_dot * dt;

    // Plastic mechanical stops at the fold limits gamma in [0, pi].
    VirtualLegState v = to_virtual(ls.angles);
    VirtualLegRates vr = to_virtual(ls.rates);
    bool stopped = false;
    if (v.gamma < 0.0) {
      v.gamma = 0.0;
      vr.gamma_dot = 0.0;
      stopped = true;
    } else if (v.gamma > std::numbers::pi) {
      v.gamma = std::numbers::pi;
      vr.gamma_dot = 0.0;
      stopped = true;
    }
    if (stopped) {
      ls.angles = to_motor(v);
      ls.rates.phi1_dot = vr.theta_dot + vr.gamma_dot;
      ls.rates.phi2_dot = vr.theta_dot - vr.gamma_dot;
    }
  }

  // Trunk: semi-implicit Euler.
  state_.body.vx += force.x() / body_.mass * dt;
  state_.body.vz += force.y() / body_.mass * dt;
  state_.body.pitch_rate += moment / body_.pitch_inertia * dt;
  state_.body.x += state_.body.vx * dt;
  state_.body.z += state_.body.vz * dt;
  state_.body.pitch += state_.body.pitch_rate * dt;

  // Contact legs follow the trunk kinematically; their shaft rates are
  // the projected finite difference (what an encoder would report).
  for (int leg = 0; leg < 4; ++leg) {
    if (state_.legs[static_cast<std::size_t>(leg)].contact) {
      project_contact_leg(leg, dt);
    }
  }

  // Touchdown: a swing foot crossing the ground while descending gets
  // pinned at the interpolated crossing point.
  for (int leg = 0; leg < 4; ++leg) {
    LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    if (ls.contact) {
      continue;
    }
    const Eigen::Vector2d fw = foot_world(leg);
    const double z_prev = ls.foot_world.z;
    if (fw.y() <= 0.0 && fw.y() < z_prev) {
      const double frac =
          z_prev > 0.0 ? z_prev / (z_prev - fw.y()) : 1.0;
      ls.anchor_x = ls.foot_world.x + frac * (fw.x() - ls.foot_world.x);
      ls.contact = true;
      project_contact_leg(leg, dt);
    } else {
      ls.foot_world = FootPosition{fw.x(), fw.y()};
    }
  }

  state_.t += dt;

  if (std::abs(state_.body.z) > kMaxBodyZ ||
      std::hypot(state_.body.vx, state_.body.vz) > kMaxSpeed) {
    throw NumericalDivergence(
        "simulation state out of bounds at t = " +
        std::to_string(state_.t) + " s (z = " +
        std::to_string(state_.body.z) + " m)");
  }
}

void PlanarSimulator::reset_standing(double body_z,
                                     const VirtualLegState& pose) {
  state_ = SimState{};
  state_.body.z = body_z;
  for (int leg = 0; leg < 4; ++leg) {
    LegState& ls = state_.legs[static_cast<std::size_t>(leg)];
    ls.angles = to_motor(pose);
    ls.rates = MotorRates{};
    const Eigen::Vector2d fw = foot_world(leg);
    ls.foot_world = FootPosition{fw.x(), fw.y()};
    if (fw.y() <= kGroundEps) {
      ls.contact = true;
      ls.anchor_x = fw.x();
      ls.foot_world = FootPosition{fw.x(), 0.0};
    }
  }
}

void JumpScript::validate(const LegGeometry& geom) const {
  geom.validate();
  if (!(crouch_gamma > 0.0 && crouch_gamma < std::numbers::pi)) {
    throw ValidationError("jump.crouch_gamma must lie in (0, pi)");
  }
  if (!(hold > 0.0)) {
    throw ValidationError("jump.hold must be > 0");
  }
  if (!(timeout > hold)) {
    throw ValidationError("jump.timeout must exceed jump.hold");
  }
  extend_command.validate();
  crouch_gains.validate();
}

JumpScript default_jump_script() {
  JumpScript script;
  script.crouch_gamma = 2.8;
  script.hold = 0.5;
  script.timeout = 2.0;
  script.extend_command.theta_d = 0.0;
  script.extend_command.gamma_d = 0.3;
  script.extend_command.theta_dot_d = 0.0;
  script.extend_command.gamma_dot_d = 0.0;
  script.extend_command.gains = CompliancePdGains{80.0, 0.5, 120.0, 1.0};
  return script;
}

namespace {

// One control-plus-physics tick shared by every experiment driver:
// measure, run the two-rate loop, apply speed and thermal clamps, record
// a trace sample, and step the plant. The recorded contact flags are the
// ones in force during the step.
class ExperimentDriver {
 public:
  ExperimentDriver(PlanarSimulator& sim, const QddActuator& act,
                   const TwoRateConfig& cfg, TwoRateLoop& loop, Trace& trace)
      : sim_(sim), act_(act), cfg_(cfg), loop_(loop), trace_(trace) {}

  void tick() {
    const SimState& st = sim_.state();
    std::array<MotorAngles, 4> angles;
    std::array<MotorRates, 4> rates;
    for (int leg = 0; leg < 4; ++leg) {
      angles[static_cast<std::size_t>(leg)] =
          st.legs[static_cast<std::size_t>(leg)].angles;
      rates[static_cast<std::size_t>(leg)] =
          st.legs[static_cast<std::size_t>(leg)].rates;
    }
    const auto commands = loop_.step(angles, rates);

    std::array<MotorTorquePair, 4> applied;
    for (int leg = 0; leg < 4; ++leg) {
      const auto& cmd = commands[static_cast<std::size_t>(leg)];
      const MotorRates& rate = rates[static_cast<std::size_t>(leg)];
      applied[static_cast<std::size_t>(leg)].tau1 =
          clamp_motor(2 * leg, cmd.tau1, rate.phi1_dot, st.t);
      applied[static_cast<std::size_t>(leg)].tau2 =
          clamp_motor(2 * leg + 1, cmd.tau2, rate.phi2_dot, st.t);
    }

    TraceSample sample;
    sample.t = st.t;
    sample.body = st.body;
    double power = 0.0;
    for (int leg = 0; leg < 4; ++leg) {
      LegSample& out = sample.legs[static_cast<std::size_t>(leg)];
      const LegState& ls = st.legs[static_cast<std::size_t>(leg)];
      const MotorTorquePair& tau = applied[static_cast<std::size_t>(leg)];
      out.phi1 = ls.angles.phi1;
      out.phi2 = ls.angles.phi2;
      out.tau1 = tau.tau1;
      out.tau2 = tau.tau2;
      out.i1 = act_.current_from_output_torque(tau.tau1);
      out.i2 = act_.current_from_output_torque(tau.tau2);
      const Eigen::Vector2d est = guarded_foot_force(
          leg_jacobian(sim_.geometry(), ls.angles),
          Eigen::Vector2d(tau.tau1, tau.tau2));
      out.fx = est.x();
      out.fz = est.y();
      power += motor_power(tau.tau1, ls.rates.phi1_dot);
      power += motor_power(tau.tau2, ls.rates.phi2_dot);
    }
    sample.power_w = power;

    sim_.step(applied, cfg_.inner_dt());

    for (int leg = 0; leg < 4; ++leg) {
      sample.legs[static_cast<std::size_t>(leg)].contact =
          sim_.state().legs[static_cast<std::size_t>(leg)].contact;
    }
    trace_.append(sample);
  }

 private:
  double clamp_motor(int motor, double tau, double shaft_speed, double t) {
    tau = speed_limited_torque(act_, tau, shaft_speed);
    return budgets_[static_cast<std::size_t>(motor)]
        .clamp(act_, tau, t)
        .torque;
  }

  double motor_power(double shaft_torque, double shaft_speed) {
    const double motor_torque =
        shaft_torque / (act_.ratio * act_.efficiency);
    const double motor_speed = shaft_speed * act_.ratio;
    return electrical_power(motor_torque, motor_speed, act_.motor).power_w;
  }

  PlanarSimulator& sim_;
  const QddActuator& act_;
  const TwoRateConfig& cfg_;
  TwoRateLoop& loop_;
  Trace& trace_;
  std::array<TorqueBudget, 8> budgets_;
};

}  // namespace

std::pair<Trace, JumpResult> simulate_jump(const BodyParams& body,
                                           const LegGeometry& geom,
                                           const QddActuator& act,
                                           const JumpScript& script,
                                           const TwoRateConfig& cfg,
                                           std::uint64_t seed) {
  cfg.validate();
  script.validate(geom);
  PlanarSimulator sim(body, geom, act);
  sim.reset_standing(leg_extension(geom, script.crouch_gamma),
                     VirtualLegState{0.0, script.crouch_gamma});

  LegCommand crouch;
  crouch.theta_d = 0.0;
  crouch.gamma_d = script.crouch_gamma;
  crouch.gains = script.crouch_gains;
  TwoRateLoop loop(
      cfg,
      [&](double t) {
        const LegCommand& cmd =
            t >= script.hold ? script.extend_command : crouch;
        return std::vector<LegCommand>(4, cmd);
      },
      4, seed);

  Trace trace(cfg.inner_dt());
  ExperimentDriver driver(sim, act, cfg, loop, trace);

  // The extension begins at the first outer update at or after `hold`.
  const double onset =
      std::ceil(script.hold * cfg.outer_rate - 1e-9) / cfg.outer_rate;

  std::optional<double> t_takeoff;
  std::optional<double> t_apex;
  while (true) {
    const double t = sim.state().t;
    if (!t_takeoff && t >= script.timeout) {
      throw NoTakeoff("no takeoff before timeout (" +
                      std::to_string(script.timeout) + " s)");
    }
    const bool was_grounded = any_contact(sim.state());
    const double vz_before = sim.state().body.vz;
    driver.tick();
    // Takeoff means leaving the ground upward; legs released because a
    // sinking trunk dragged their anchors out of reach do not count.
    if (!t_takeoff && was_grounded && !any_contact(sim.state()) &&
        vz_before > 0.0) {
      t_takeoff = t;
    }
    if (t_takeoff) {
      const double vz_after = sim.state().body.vz;
      if (vz_before > 0.0 && vz_after <= 0.0) {
        const double frac = vz_before / (vz_before - vz_after);
        t_apex = t + frac * cfg.inner_dt();
        driver.tick();  // land the post-apex sample in the trace
        break;
      }
    }
  }

  JumpResult result;
  result.h = jump_height(trace);
  result.t_stance = *t_takeoff - onset;
  result.t_apogee = *t_apex - *t_takeoff;
  result.agility =
      vertical_jumping_agility(result.h, result.t_stance, result.t_apogee);
  return {std::move(trace), result};
}

Trace simulate_gait_trace(const BodyParams& body, const LegGeometry& geom,
                          const QddActuator& act, const GaitParams& gait,
                          double duration, const TwoRateConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  gait.validate(geom);
  if (!(duration >= 10.0 * gait.period())) {
    throw ValidationError("run duration must cover at least 10 strides");
  }

  PlanarSimulator sim(body, geom, act);
  sim.state().body.z = gait.neutral_extension;
  for (int leg = 0; leg < 4; ++leg) {
    LegState& ls = sim.state().legs[static_cast<std::size_t>(leg)];
    const LegCommand cmd = leg_command(gait, geom, 0.0, leg);
    ls.angles = to_motor(VirtualLegState{cmd.theta_d, cmd.gamma_d});
    ls.rates = MotorRates{};
    const Eigen::Vector2d fw = sim.foot_world(leg);
    ls.foot_world = FootPosition{fw.x(), fw.y()};
    if (fw.y() <= kGroundEps) {
      ls.contact = true;
      ls.anchor_x = fw.x();
      ls.foot_world = FootPosition{fw.x(), 0.0};
    }
  }

  TwoRateLoop loop(
      cfg,
      [&](double t) {
        std::vector<LegCommand> cmds;
        cmds.reserve(4);
        for (int leg = 0; leg < 4; ++leg) {
          cmds.push_back(leg_command(gait, geom, t, leg));
        }
        return cmds;
      },
      4, seed);

  Trace trace(cfg.inner_dt());
  ExperimentDriver driver(sim, act, cfg, loop, trace);
  const long ticks = std::lround(duration * cfg.inner_rate);
  for (long k = 0; k < ticks; ++k) {
    driver.tick();
    const BodyState& b = sim.state().body;
    if (b.z < kFallHeightM || std::abs(b.pitch) > kFallPitchRad) {
      throw FallDetected("fall at t = " + std::to_string(sim.state().t) +
                         " s (z = " + std::to_string(b.z) + " m, pitch = " +
                         std::to_string(b.pitch) + " rad)");
    }
  }
  return trace;
}

std::pair<Trace, RunResult> simulate_run(const BodyParams& body,
                                         const LegGeometry& geom,
                                         const QddActuator& act,
                                         const GaitParams& gait,
                                         double duration,
                                         const TwoRateConfig& cfg,
                                         std::uint64_t seed) {
  Trace trace =
      simulate_gait_trace(body, geom, act, gait, duration, cfg, seed);
  RunResult result = run_metrics(trace, act, body.mass);
  return {std::move(trace), result};
}

Trace simulate_stand(const BodyParams& body, const LegGeometry& geom,
                     const QddActuator& act, const LegCommand& hold,
                     double duration, const TwoRateConfig& cfg,
                     std::uint64_t seed) {
  cfg.validate();
  hold.validate();
  PlanarSimulator sim(body, geom, act);
  // Hip height that puts the commanded foot pose on the ground.
  const double stand_z =
      leg_extension(geom, hold.gamma_d) * std::cos(hold.theta_d);
  sim.reset_standing(stand_z, VirtualLegState{hold.theta_d, hold.gamma_d});

  TwoRateLoop loop(
      cfg, [&](double) { return std::vector<LegCommand>(4, hold); }, 4, seed);
  Trace trace(cfg.inner_dt());
  ExperimentDriver driver(sim, act, cfg, loop, trace);
  const long ticks = std::lround(duration * cfg.inner_rate);
  for (long k = 0; k < ticks; ++k) {
    driver.tick();
  }
  return trace;
}

std::vector<SimEvent> detect_events(const Trace& trace) {
  std::vector<SimEvent> events;
  auto grounded = [](const TraceSample& s) {
    return s.legs[0].contact || s.legs[1].contact || s.legs[2].contact ||
           s.legs[3].contact;
  };
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const TraceSample& prev = trace[k - 1];
    const TraceSample& now = trace[k];
    const double dt = now.t - prev.t;
    if (grounded(prev) && !grounded(now)) {
      events.push_back({now.t, EventKind::takeoff});
    } else if (!grounded(prev) && grounded(now)) {
      events.push_back({now.t - 0.5 * dt, EventKind::touchdown});
    }
    if (!grounded(prev) && !grounded(now) && prev.body.vz > 0.0 &&
        now.body.vz <= 0.0) {
      const double frac = prev.body.vz / (prev.body.vz - now.body.vz);
      events.push_back({prev.t + frac * dt, EventKind::apex});
    }
  }
  return events;
}

}  // namespace doggo
