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

#include <Eigen/Core>
#include <Eigen/LU>

#include "doggo/errors.hpp"

namespace doggo {

// Symmetric five-bar parallel leg with both upper links driven from
// coaxial hip shafts. The leg is described either by the two motor shaft
// angles (phi1, phi2) or by virtual-leg coordinates: the leg angle theta
// of the hip->foot ray measured from straight down (positive toward the
// body's forward direction) and the half separation angle gamma between
// the upper links.
//
//   theta = (phi1 + phi2) / 2        gamma = (phi1 - phi2) / 2
//   r(gamma) = l1 cos(gamma) + sqrt(l2^2 - l1^2 sin^2(gamma))
//
// The leg is fully extended (r = l1 + l2) at gamma = 0 and fully folded
// (r = l2 - l1) at gamma = pi; both are kinematic singularities.

struct LegGeometry {
  double l1 = 0.085;  // upper link length (m)
  double l2 = 0.165;  // lower link length (m)

  double r_min() const { return l2 - l1; }
  double r_max() const { return l1 + l2; }

  // Throws ValidationError unless 0 < l1 < l2.
  void validate() const;
};

// Motor shaft angles (rad) from the straight-down ray, phi1 >= phi2.
struct MotorAngles {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

struct VirtualLegState {
  double theta = 0.0;  // leg angle (rad)
  double gamma = 0.0;  // half link-separation angle (rad), in [0, pi]
};

// Foot position in the hip frame: x forward, z up (negative below hip).
struct FootPosition {
  double x = 0.0;
  double z = 0.0;

  double norm() const;
};

// Condition numbers at or above this are treated as rank loss.
inline constexpr double kSingularConditionLimit = 1e8;

// Leg extension r(gamma), the hip-to-foot distance. gamma in [0, pi].
double leg_extension(const LegGeometry& geom, double gamma);

// dr/dgamma. Zero at gamma in {0, pi}, strictly negative in between for
// any geometry with l2^2 > 2 l1^2 (true for the default links).
double leg_extension_slope(const LegGeometry& geom, double gamma);

FootPosition forward_kinematics(const LegGeometry& geom,
                                const VirtualLegState& s);

// Law-of-cosines inverse: theta = atan2(x, -z), gamma from the
// hip-knee-foot triangle. Throws UnreachableTarget when |p| lies outside
// [r_min, r_max].
VirtualLegState inverse_kinematics(const LegGeometry& geom,
                                   const FootPosition& p);

VirtualLegState to_virtual(const MotorAngles& a);
MotorAngles to_motor(const VirtualLegState& s);

// d(x, z)/d(phi1, phi2), analytic.
Eigen::Matrix2d leg_jacobian(const LegGeometry& geom, const MotorAngles& a);

// 2-norm condition number; +inf when the smaller singular value is zero.
double condition_number(const Eigen::Matrix2d& m);

// Force the foot exerts on the environment for given shaft torques,
// F = J^-T tau. Throws SingularConfiguration when cond(J) >=
// kSingularConditionLimit (gamma near 0 or pi).
Eigen::Vector2d foot_force_from_torques(const Eigen::Matrix2d& jacobian,
                                        const Eigen::Vector2d& tau);

// Dual map tau = J^T F; always well defined.
Eigen::Vector2d torques_from_foot_force(const Eigen::Matrix2d& jacobian,
                                        const Eigen::Vector2d& force);

}  // namespace doggo
