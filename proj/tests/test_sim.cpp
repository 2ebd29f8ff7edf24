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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "doggo/fixtures.hpp"

namespace doggo {
namespace {

constexpr double kPi = std::numbers::pi;

LegCommand stand_command(const LegGeometry& geom, double extension) {
  const VirtualLegState pose =
      inverse_kinematics(geom, FootPosition{0.0, -extension});
  LegCommand cmd;
  cmd.theta_d = pose.theta;
  cmd.gamma_d = pose.gamma;
  cmd.gains = CompliancePdGains{40.0, 1.0, 40.0, 1.0};
  return cmd;
}

TEST_CASE("ballistic flight: exact velocity law, conserved momentum") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  PlanarSimulator sim(body, geom, act);

  sim.state().body.z = 1.0;
  sim.state().body.vz = 2.0;
  sim.state().body.vx = 0.5;
  for (LegState& leg : sim.state().legs) {
    leg.angles = to_motor(VirtualLegState{0.0, 1.5});
    const Eigen::Vector2d fw(0.0, 1.0);
    leg.foot_world = FootPosition{fw.x(), fw.y()};
  }

  const std::array<MotorTorquePair, 4> zero{};
  const double dt = 1e-4;
  const int steps = 1000;
  for (int k = 0; k < steps; ++k) {
    sim.step(zero, dt);
  }
  CHECK(sim.state().body.vx == 0.5);  // no horizontal force at all
  CHECK(std::abs(sim.state().body.vz -
                 (2.0 - body.gravity * steps * dt)) < 1e-12);
  CHECK(sim.state().body.pitch_rate == 0.0);
  for (const LegState& leg : sim.state().legs) {
    CHECK_FALSE(leg.contact);
  }
}

TEST_CASE("quiescent stand carries exactly the body weight") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  const Trace trace =
      simulate_stand(body, geom, act, stand_command(geom, 0.18), 2.0, cfg);

  // Average the total vertical ground reaction over the settled tail.
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = trace.size() * 3 / 4; k < trace.size(); ++k) {
    const TraceSample& s = trace[k];
    const double c = std::cos(s.body.pitch);
    const double sn = std::sin(s.body.pitch);
    double rz = 0.0;
    for (const LegSample& leg : s.legs) {
      REQUIRE(leg.contact);
      rz += -(sn * leg.fx + c * leg.fz);
    }
    sum += rz;
    ++n;
  }
  const double mean_reaction = sum / static_cast<double>(n);
  const double weight = body.mass * body.gravity;
  CHECK(std::abs(mean_reaction - weight) / weight < 1e-3);
  CHECK(weight == doctest::Approx(47.088).epsilon(1e-6));
}

TEST_CASE("a tilted-leg stand still settles and carries the weight") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  LegCommand hold = stand_command(geom, 0.18);
  hold.theta_d = 0.2;  // feet planted ahead of the hips
  const Trace trace = simulate_stand(body, geom, act, hold, 2.0, cfg);

  const TraceSample& s = trace.back();
  double rz = 0.0;
  for (const LegSample& leg : s.legs) {
    REQUIRE(leg.contact);
    rz += -(std::sin(s.body.pitch) * leg.fx + std::cos(s.body.pitch) * leg.fz);
  }
  const double weight = body.mass * body.gravity;
  CHECK(std::abs(rz - weight) / weight < 5e-3);
}

TEST_CASE("force estimate matches the statics oracle within 1%") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  const Trace trace =
      simulate_stand(body, geom, act, stand_command(geom, 0.18), 2.0, cfg);

  // Reconstruct the proprioceptive estimate from recorded currents, the
  // way the hardware would, and compare the total against Newton.
  const TraceSample& s = trace.back();
  double estimated_support = 0.0;
  for (const LegSample& leg : s.legs) {
    const Eigen::Vector2d est = estimate_foot_force(
        geom, MotorAngles{leg.phi1, leg.phi2},
        Eigen::Vector2d{leg.i1, leg.i2}, act);
    const double c = std::cos(s.body.pitch);
    const double sn = std::sin(s.body.pitch);
    estimated_support += -(sn * est.x() + c * est.y());
  }
  const double weight = body.mass * body.gravity;
  CHECK(std::abs(estimated_support - weight) / weight < 0.01);
}

TEST_CASE("anchored feet do not move while in contact") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  const Trace trace =
      simulate_stand(body, geom, act, stand_command(geom, 0.18), 0.5, cfg);

  for (int leg = 0; leg < 4; ++leg) {
    std::optional<Eigen::Vector2d> anchor;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const TraceSample& s = trace[k];
      const LegSample& ls = s.legs[static_cast<std::size_t>(leg)];
      if (!ls.contact) {
        anchor.reset();
        continue;
      }
      // Recompute the world foot position from the recorded state.
      const FootPosition fb =
          forward_kinematics(geom, to_virtual(MotorAngles{ls.phi1, ls.phi2}));
      const double c = std::cos(s.body.pitch);
      const double sn = std::sin(s.body.pitch);
      const double hx = (leg < 2 ? 1.0 : -1.0) * body.hip_x;
      const Eigen::Vector2d foot(
          s.body.x + c * hx + (c * fb.x - sn * fb.z),
          s.body.z + sn * hx + (sn * fb.x + c * fb.z));
      if (!anchor) {
        anchor = foot;
        CHECK(std::abs(foot.y()) < 1e-9);
      } else {
        CHECK((foot - *anchor).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("torque at a fold singularity stays bounded") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  PlanarSimulator sim(body, geom, act);

  // Pin one leg fully extended under its hip: the Jacobian is rank
  // deficient there, so the condition-number guard must zero the force.
  sim.state().body.z = geom.r_max();
  LegState& leg = sim.state().legs[0];
  leg.angles = to_motor(VirtualLegState{0.0, 0.0});
  leg.contact = true;
  leg.anchor_x = body.hip_x;
  leg.foot_world = FootPosition{body.hip_x, 0.0};

  std::array<MotorTorquePair, 4> torques{};
  torques[0] = MotorTorquePair{4.8, -4.8};
  const auto reactions = sim.ground_reactions(torques);
  CHECK(reactions[0].norm() == 0.0);

  for (int k = 0; k < 100; ++k) {
    sim.step(torques, 1e-4);
  }
  CHECK(std::isfinite(sim.state().body.z));
  CHECK(std::isfinite(sim.state().body.vz));
  CHECK(std::isfinite(sim.state().legs[0].angles.phi1));
}

TEST_CASE("default jump: height, identity, ballistics, energy") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  const JumpScript script = default_jump_script();

  const auto [trace, result] = simulate_jump(body, geom, act, script, cfg);

  CHECK(result.h >= 0.6);
  CHECK(result.t_stance > 0.0);
  CHECK(result.t_apogee > 0.0);
  CHECK(result.agility ==
        vertical_jumping_agility(result.h, result.t_stance, result.t_apogee));

  // Locate extension onset and liftoff in the trace.
  std::size_t onset = 0;
  while (onset < trace.size() && trace[onset].t < script.hold) {
    ++onset;
  }
  std::size_t lift = onset;
  auto airborne = [](const TraceSample& s) {
    return !s.legs[0].contact && !s.legs[1].contact && !s.legs[2].contact &&
           !s.legs[3].contact;
  };
  while (lift < trace.size() && !airborne(trace[lift])) {
    ++lift;
  }
  REQUIRE(lift < trace.size());

  // Flight gain agrees with ballistics from the liftoff velocity.
  const double vz_takeoff = trace[lift].body.vz;
  const double h_flight_expected =
      vz_takeoff * vz_takeoff / (2.0 * body.gravity);
  double apex_z = trace[lift].body.z;
  for (std::size_t k = lift; k < trace.size(); ++k) {
    apex_z = std::max(apex_z, trace[k].body.z);
  }
  const double h_flight = apex_z - trace[lift].body.z;
  CHECK(std::abs(h_flight - h_flight_expected) / h_flight_expected < 0.005);

  // Work done by the shafts during stance lands in trunk energy (the
  // contact model routes every joule of a lossless leg into the body).
  double work = 0.0;
  for (std::size_t k = onset; k + 1 <= lift; ++k) {
    for (int leg = 0; leg < 4; ++leg) {
      const LegSample& now = trace[k].legs[static_cast<std::size_t>(leg)];
      const LegSample& next =
          trace[k + 1].legs[static_cast<std::size_t>(leg)];
      work += now.tau1 * (next.phi1 - now.phi1);
      work += now.tau2 * (next.phi2 - now.phi2);
    }
  }
  auto energy = [&](const TraceSample& s) {
    const double ke =
        0.5 * body.mass * (s.body.vx * s.body.vx + s.body.vz * s.body.vz) +
        0.5 * body.pitch_inertia * s.body.pitch_rate * s.body.pitch_rate;
    return ke + body.mass * body.gravity * s.body.z;
  };
  const double gained = energy(trace[lift]) - energy(trace[onset]);
  CHECK(std::abs(work - gained) / work < 0.01);

  // Symmetric extension keeps the trunk level.
  CHECK(std::abs(trace.back().body.pitch) < 0.02);
}

TEST_CASE("jump events land where the driver says they do") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  const auto [trace, result] =
      simulate_jump(body, geom, act, default_jump_script(), cfg);
  const std::vector<SimEvent> events = detect_events(trace);

  std::optional<double> takeoff;
  std::optional<double> apex;
  for (const SimEvent& e : events) {
    if (e.kind == EventKind::takeoff && !takeoff) {
      takeoff = e.t;
    }
    if (e.kind == EventKind::apex && !apex) {
      apex = e.t;
    }
  }
  REQUIRE(takeoff.has_value());
  REQUIRE(apex.has_value());

  // t_stance + onset = takeoff, takeoff + t_apogee = apex.
  const double onset =
      std::ceil(default_jump_script().hold * cfg.outer_rate - 1e-9) /
      cfg.outer_rate;
  CHECK(*takeoff == doctest::Approx(onset + result.t_stance).epsilon(1e-9));
  CHECK(*apex ==
        doctest::Approx(*takeoff + result.t_apogee).epsilon(1e-6));

  // metrics::jump_height agrees with the driver's figure exactly.
  CHECK(jump_height(trace) == result.h);
}

TEST_CASE("weak actuator never takes off") {
  const BodyParams body;
  const LegGeometry geom;
  QddActuator act = load_actuator_fixture("doggo");
  act.motor.peak_torque = 1e-4;
  act.motor.continuous_torque = 1e-4;
  JumpScript script = default_jump_script();
  script.timeout = 1.0;
  const TwoRateConfig cfg;

  CHECK_THROWS_AS(simulate_jump(body, geom, act, script, cfg), NoTakeoff);
}

TEST_CASE("jump is deterministic down to the last bit") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  const auto [trace_a, result_a] =
      simulate_jump(body, geom, act, default_jump_script(), cfg);
  const auto [trace_b, result_b] =
      simulate_jump(body, geom, act, default_jump_script(), cfg);
  CHECK(trace_a.binary_equal(trace_b));
  CHECK(result_a.h == result_b.h);
  CHECK(result_a.agility == result_b.agility);
}

TEST_CASE("seed only matters when dither is enabled") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const JumpScript script = default_jump_script();

  // Core simulation ignores the seed entirely.
  TwoRateConfig cfg;
  const auto [a, ra] = simulate_jump(body, geom, act, script, cfg, 1);
  const auto [b, rb] = simulate_jump(body, geom, act, script, cfg, 2);
  CHECK(a.binary_equal(b));

  // Quantization without dither is still deterministic.
  cfg.quantize_encoders = true;
  const auto [qa, rqa] = simulate_jump(body, geom, act, script, cfg, 1);
  const auto [qb, rqb] = simulate_jump(body, geom, act, script, cfg, 2);
  CHECK(qa.binary_equal(qb));
  CHECK(rqa.h == doctest::Approx(ra.h).epsilon(0.05));

  // Dither consumes the seed: same seed same bits, new seed new bits.
  cfg.encoder_dither = true;
  const auto [da, rda] = simulate_jump(body, geom, act, script, cfg, 7);
  const auto [db, rdb] = simulate_jump(body, geom, act, script, cfg, 7);
  const auto [dc, rdc] = simulate_jump(body, geom, act, script, cfg, 8);
  CHECK(da.binary_equal(db));
  CHECK_FALSE(da.binary_equal(dc));
}

TEST_CASE("default trot covers ground without falling") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  const GaitParams gait = default_gait_fixture();

  const auto [trace, result] =
      simulate_run(body, geom, act, gait, 5.0, cfg);
  CHECK(trace.back().body.x - trace.front().body.x >= 0.7);
  // Regression band around the first validated build (v_ss 0.80 m/s,
  // CoT 2.42); wide enough to survive gain retuning, tight enough to
  // catch a broken contact or torque path.
  CHECK(result.v_ss > 0.5);
  CHECK(result.v_ss < 1.2);
  CHECK(result.cost_of_transport > 0.5);
  CHECK(result.cost_of_transport < 8.0);
  CHECK(result.cost_of_transport ==
        doctest::Approx(result.mean_voltage * result.mean_current /
                        (body.mass * body.gravity * result.v_ss)));
}

double post_transient_mean_velocity(const Trace& trace) {
  const std::size_t start = trace.size() / 4;
  return (trace.back().body.x - trace[start].body.x) /
         (trace.back().t - trace[start].t);
}

TEST_CASE("stepping in place stays in place") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  GaitParams gait = default_gait_fixture();
  gait.stride_length = 0.0;

  const Trace trace = simulate_gait_trace(body, geom, act, gait, 3.0, cfg);
  CHECK(std::abs(post_transient_mean_velocity(trace)) < 0.02);
}

TEST_CASE("longer strides run faster") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;

  auto mean_velocity = [&](double stride) {
    GaitParams gait = default_gait_fixture();
    gait.stride_length = stride;
    return post_transient_mean_velocity(
        simulate_gait_trace(body, geom, act, gait, 2.0, cfg));
  };

  const double slow = mean_velocity(0.06);
  const double fast = mean_velocity(0.12);
  CHECK(fast > slow);
  CHECK(fast > 0.3);
}

TEST_CASE("trot is deterministic") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  const GaitParams gait = default_gait_fixture();

  const auto [trace_a, ra] = simulate_run(body, geom, act, gait, 2.0, cfg);
  const auto [trace_b, rb] = simulate_run(body, geom, act, gait, 2.0, cfg);
  CHECK(trace_a.binary_equal(trace_b));
  CHECK(ra.v_ss == rb.v_ss);
}

TEST_CASE("state escaping sanity bounds raises NumericalDivergence") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  PlanarSimulator sim(body, geom, act);
  sim.state().body.z = 1.0;
  sim.state().body.vz = 60.0;  // beyond the 50 m/s speed bound
  for (LegState& leg : sim.state().legs) {
    leg.angles = to_motor(VirtualLegState{0.0, 1.5});
    leg.foot_world = FootPosition{0.0, 1.0};
  }
  const std::array<MotorTorquePair, 4> zero{};
  CHECK_THROWS_AS(sim.step(zero, 1e-4), NumericalDivergence);
}

TEST_CASE("a powerless gait falls and says so") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  GaitParams gait = default_gait_fixture();
  gait.stance_gains = CompliancePdGains{0.0, 0.0, 0.0, 0.0};
  gait.flight_gains = CompliancePdGains{0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(simulate_gait_trace(body, geom, act, gait, 3.0, cfg),
                  FallDetected);
}

TEST_CASE("run duration must cover ten strides") {
  const BodyParams body;
  const LegGeometry geom;
  const QddActuator act = load_actuator_fixture("doggo");
  const TwoRateConfig cfg;
  CHECK_THROWS_AS(
      simulate_run(body, geom, act, default_gait_fixture(), 0.5, cfg),
      ValidationError);
}

TEST_CASE("event detection on constructed traces") {
  // Pure ballistic entry: exactly one apex at t = vz0 / g.
  Trace ballistic(0.01);
  const double g = 9.81;
  const double vz0 = 2.0;
  for (int k = 0; k <= 60; ++k) {
    TraceSample s;
    s.t = 0.01 * k;
    s.body.z = 1.0 + vz0 * s.t - 0.5 * g * s.t * s.t;
    s.body.vz = vz0 - g * s.t;
    ballistic.append(s);
  }
  const auto events = detect_events(ballistic);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == EventKind::apex);
  CHECK(std::abs(events[0].t - vz0 / g) <= 0.01);
}

TEST_CASE("event detection: grounded trace and synthetic hop") {
  Trace grounded(0.01);
  for (int k = 0; k < 50; ++k) {
    TraceSample s;
    s.t = 0.01 * k;
    s.legs[0].contact = true;
    grounded.append(s);
  }
  CHECK(detect_events(grounded).empty());

  // Hop with a known takeoff at t = 0.25 and touchdown at t = 0.65.
  Trace hop(0.01);
  for (int k = 0; k <= 100; ++k) {
    TraceSample s;
    s.t = 0.01 * k;
    const bool flight = s.t >= 0.25 && s.t < 0.65;
    for (LegSample& leg : s.legs) {
      leg.contact = !flight;
    }
    s.body.vz = flight ? (0.45 - (s.t - 0.25)) : 0.0;
    hop.append(s);
  }
  const auto events = detect_events(hop);
  std::optional<double> takeoff, touchdown;
  for (const SimEvent& e : events) {
    if (e.kind == EventKind::takeoff) takeoff = e.t;
    if (e.kind == EventKind::touchdown) touchdown = e.t;
  }
  REQUIRE(takeoff.has_value());
  REQUIRE(touchdown.has_value());
  CHECK(std::abs(*takeoff - 0.25) <= 0.01);
  CHECK(std::abs(*touchdown - 0.65) <= 0.01);
}

}  // namespace
}  // namespace doggo
