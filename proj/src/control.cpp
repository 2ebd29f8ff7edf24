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

#include "doggo/control.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace doggo {

namespace {

constexpr double kMapeExclusionNewtons = 0.1;
constexpr double kCrossoverGain = 0.70710678118654752440;  // 1/sqrt(2)

}  // namespace

void CompliancePdGains::validate() const {
  if (kp_theta < 0.0 || kd_theta < 0.0 || kp_gamma < 0.0 || kd_gamma < 0.0) {
    throw ValidationError("compliance gains must be >= 0");
  }
}

void LegCommand::validate() const {
  gains.validate();
  if (!(gamma_d >= 0.0 && gamma_d <= std::numbers::pi)) {
    throw ValidationError("gamma_d = " + std::to_string(gamma_d) +
                          " outside [0, pi]");
  }
}

void TwoRateConfig::validate() const {
  if (!(outer_rate > 0.0) || !(inner_rate > 0.0)) {
    throw ConfigError("control rates must be positive");
  }
  const double ratio = inner_rate / outer_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    throw ConfigError("inner_rate must be an integer multiple of outer_rate");
  }
  if (encoder_cpr <= 0) {
    throw ConfigError("encoder_cpr must be positive");
  }
}

int TwoRateConfig::ticks_per_outer() const {
  return static_cast<int>(std::llround(inner_rate / outer_rate));
}

double TwoRateConfig::encoder_resolution() const {
  return 2.0 * std::numbers::pi / static_cast<double>(encoder_cpr);
}

std::pair<double, double> pd_virtual_torques(const LegCommand& cmd,
                                             const VirtualLegState& meas,
                                             const VirtualLegRates& rates) {
  const double tau_theta =
      cmd.gains.kp_theta * (cmd.theta_d - meas.theta) +
      cmd.gains.kd_theta * (cmd.theta_dot_d - rates.theta_dot);
  const double tau_gamma =
      cmd.gains.kp_gamma * (cmd.gamma_d - meas.gamma) +
      cmd.gains.kd_gamma * (cmd.gamma_dot_d - rates.gamma_dot);
  return {tau_theta, tau_gamma};
}

std::pair<double, double> generalized_to_motor_torques(double tau_theta,
                                                       double tau_gamma) {
  return {0.5 * (tau_theta + tau_gamma), 0.5 * (tau_theta - tau_gamma)};
}

Eigen::Vector2d estimate_foot_force(const LegGeometry& geom,
                                    const MotorAngles& angles,
                                    const Eigen::Vector2d& currents,
                                    const QddActuator& act) {
  const Eigen::Vector2d tau{act.output_torque_from_current(currents(0)),
                            act.output_torque_from_current(currents(1))};
  return foot_force_from_torques(leg_jacobian(geom, angles), tau);
}

double quantize_angle(double angle, int encoder_cpr) {
  const double res = 2.0 * std::numbers::pi / static_cast<double>(encoder_cpr);
  return std::floor(angle / res) * res;
}

double transparency_mape(std::span<const double> estimated,
                         std::span<const double> measured) {
  if (estimated.size() != measured.size()) {
    throw ValidationError("force series lengths differ");
  }
  if (estimated.empty()) {
    throw EmptySeries("transparency series is empty");
  }
  double sum = 0.0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (std::abs(measured[i]) <= kMapeExclusionNewtons) {
      continue;
    }
    sum += std::abs(estimated[i] - measured[i]) / std::abs(measured[i]);
    ++kept;
  }
  if (kept == 0) {
    throw EmptySeries("no samples with |measured| > 0.1 N");
  }
  return 100.0 * sum / static_cast<double>(kept);
}

CrossoverEstimate bandwidth_crossover(
    std::span<const FrequencySample> sweep) {
  if (sweep.size() < 2) {
    throw ValidationError("bandwidth sweep needs at least 2 samples");
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i].freq_hz > sweep[i - 1].freq_hz)) {
      throw ValidationError("sweep frequencies must be strictly increasing");
    }
  }
  if (sweep.front().gain <= kCrossoverGain) {
    return CrossoverEstimate{sweep.front().freq_hz, false};
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const FrequencySample& lo = sweep[i - 1];
    const FrequencySample& hi = sweep[i];
    if (hi.gain <= kCrossoverGain) {
      // Interpolate in log-gain over log-frequency between the bracket.
      const double t = (std::log(kCrossoverGain) - std::log(lo.gain)) /
                       (std::log(hi.gain) - std::log(lo.gain));
      const double logf =
          std::log(lo.freq_hz) + t * (std::log(hi.freq_hz) - std::log(lo.freq_hz));
      return CrossoverEstimate{std::exp(logf), false};
    }
  }
  return CrossoverEstimate{sweep.back().freq_hz, true};
}

TwoRateLoop::TwoRateLoop(const TwoRateConfig& cfg, OuterSource source,
                         int n_legs, std::uint64_t seed)
    : cfg_(cfg), source_(std::move(source)), n_legs_(n_legs), rng_(seed) {
  cfg_.validate();
  if (n_legs_ < 1) {
    throw ConfigError("two-rate loop needs at least one leg");
  }
  held_.resize(static_cast<std::size_t>(n_legs_));
}

std::vector<TwoRateLoop::MotorTorques> TwoRateLoop::step(
    std::span<const MotorAngles> angles, std::span<const MotorRates> rates) {
  if (angles.size() != static_cast<std::size_t>(n_legs_) ||
      rates.size() != static_cast<std::size_t>(n_legs_)) {
    throw ConfigError("measurement count does not match leg count");
  }

  const int hold = cfg_.ticks_per_outer();
  if (tick_ % hold == 0) {
    const double outer_t =
        static_cast<double>(tick_ / hold) / cfg_.outer_rate;
    held_ = source_(outer_t);
    if (held_.size() != static_cast<std::size_t>(n_legs_)) {
      throw ConfigError("trajectory source returned wrong command count");
    }
  }
  ++tick_;

  std::vector<MotorTorques> out(static_cast<std::size_t>(n_legs_));
  for (int leg = 0; leg < n_legs_; ++leg) {
    MotorAngles meas = angles[static_cast<std::size_t>(leg)];
    if (cfg_.quantize_encoders) {
      const double res = cfg_.encoder_resolution();
      double d1 = 0.0, d2 = 0.0;
      if (cfg_.encoder_dither) {
        d1 = dither_(rng_) * res;
        d2 = dither_(rng_) * res;
      }
      meas.phi1 = quantize_angle(meas.phi1 + d1, cfg_.encoder_cpr);
      meas.phi2 = quantize_angle(meas.phi2 + d2, cfg_.encoder_cpr);
    }
    const auto [tau_theta, tau_gamma] = pd_virtual_torques(
        held_[static_cast<std::size_t>(leg)], to_virtual(meas),
        to_virtual(rates[static_cast<std::size_t>(leg)]));
    const auto [tau1, tau2] = generalized_to_motor_torques(tau_theta,
                                                           tau_gamma);
    out[static_cast<std::size_t>(leg)] = MotorTorques{tau1, tau2};
  }
  return out;
}

}  // namespace doggo
