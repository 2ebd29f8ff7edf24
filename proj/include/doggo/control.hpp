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
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "doggo/actuator.hpp"
#include "doggo/leg_kinematics.hpp"

namespace doggo {

// Virtual compliance: PD gains acting in (theta, gamma) space. The
// proportional terms emulate springs, the derivative terms dampers.
struct CompliancePdGains {
  double kp_theta = 0.0;  // Nm/rad
  double kd_theta = 0.0;  // Nm s/rad
  double kp_gamma = 0.0;
  double kd_gamma = 0.0;

  void validate() const;
};

// One leg's setpoint as sent from the trajectory level to the motor
// controllers: virtual-leg pose, feedforward rates, and the gain set to
// apply.
struct LegCommand {
  double theta_d = 0.0;
  double gamma_d = 0.0;  // must lie in [0, pi]
  double theta_dot_d = 0.0;
  double gamma_dot_d = 0.0;
  CompliancePdGains gains;

  void validate() const;
};

struct VirtualLegRates {
  double theta_dot = 0.0;
  double gamma_dot = 0.0;
};

struct MotorRates {
  double phi1_dot = 0.0;
  double phi2_dot = 0.0;
};

inline VirtualLegRates to_virtual(const MotorRates& r) {
  return VirtualLegRates{0.5 * (r.phi1_dot + r.phi2_dot),
                         0.5 * (r.phi1_dot - r.phi2_dot)};
}

// Trajectory level at outer_rate, torque level at inner_rate with a
// zero-order hold of the latest command in between.
struct TwoRateConfig {
  double outer_rate = 100.0;     // Hz
  double inner_rate = 10000.0;   // Hz
  int encoder_cpr = 2000;        // counts per revolution
  bool quantize_encoders = false;
  bool encoder_dither = false;   // sub-count dither, needs a seed

  // Throws ConfigError unless inner_rate is an integer multiple of
  // outer_rate and both are positive.
  void validate() const;

  int ticks_per_outer() const;
  double inner_dt() const { return 1.0 / inner_rate; }
  double encoder_resolution() const;
};

// PD law in virtual-leg coordinates. Returns (tau_theta, tau_gamma).
std::pair<double, double> pd_virtual_torques(const LegCommand& cmd,
                                             const VirtualLegState& meas,
                                             const VirtualLegRates& rates);

// Transpose of the (theta, gamma) <- (phi1, phi2) coordinate map:
// tau1 = (tau_theta + tau_gamma)/2, tau2 = (tau_theta - tau_gamma)/2.
std::pair<double, double> generalized_to_motor_torques(double tau_theta,
                                                       double tau_gamma);

// Proprioceptive force estimate: per-shaft torque from current, then
// F_est = J^-T tau. Throws SingularConfiguration near gamma in {0, pi}.
Eigen::Vector2d estimate_foot_force(const LegGeometry& geom,
                                    const MotorAngles& angles,
                                    const Eigen::Vector2d& currents,
                                    const QddActuator& act);

// Floors an angle to the encoder grid (2 pi / cpr).
double quantize_angle(double angle, int encoder_cpr);

// Mean absolute percent error between an estimated and a measured force
// series. Samples with |measured| <= 0.1 N are excluded to keep the
// denominator meaningful. Throws EmptySeries when nothing remains.
double transparency_mape(std::span<const double> estimated,
                         std::span<const double> measured);

struct FrequencySample {
  double freq_hz = 0.0;
  double gain = 0.0;
  double phase_rad = 0.0;
};

struct CrossoverEstimate {
  double freq_hz = 0.0;
  // True when the gain never fell below -3 dB inside the sweep; freq_hz
  // then holds the sweep's upper bound and the true bandwidth is at
  // least that.
  bool lower_bound_only = false;
};

// Smallest frequency where the gain first crosses 1/sqrt(2), located by
// log-log linear interpolation between the bracketing samples.
CrossoverEstimate bandwidth_crossover(std::span<const FrequencySample> sweep);

// Interleaved two-rate control loop for n_legs legs. The outer source is
// polled at outer_rate; between polls the held commands are bit-identical.
// Encoder quantization, when enabled, floors measured angles (not rates)
// to the encoder grid before the PD runs; dither adds a seeded sub-count
// offset before flooring.
class TwoRateLoop {
 public:
  using OuterSource = std::function<std::vector<LegCommand>(double t)>;

  struct MotorTorques {
    double tau1 = 0.0;
    double tau2 = 0.0;
  };

  TwoRateLoop(const TwoRateConfig& cfg, OuterSource source, int n_legs,
              std::uint64_t seed = 0);

  // Advances one inner tick: refreshes held commands on outer-tick
  // boundaries, then runs the PD against the measurements.
  std::vector<MotorTorques> step(std::span<const MotorAngles> angles,
                                 std::span<const MotorRates> rates);

  double time() const { return static_cast<double>(tick_) * cfg_.inner_dt(); }
  long tick() const { return tick_; }
  const std::vector<LegCommand>& held_commands() const { return held_; }

 private:
  TwoRateConfig cfg_;
  OuterSource source_;
  int n_legs_;
  long tick_ = 0;
  std::vector<LegCommand> held_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dither_{0.0, 1.0};
};

}  // namespace doggo
