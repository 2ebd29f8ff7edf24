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

#include "doggo/leg_kinematics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace doggo {

void LegGeometry::validate() const {
  if (!(l1 > 0.0) || !std::isfinite(l1)) {
    throw ValidationError("geometry.l1 must be positive and finite");
  }
  if (!(l2 > l1) || !std::isfinite(l2)) {
    throw ValidationError("geometry.l2 must exceed l1");
  }
}

double FootPosition::norm() const { return std::hypot(x, z); }

double leg_extension(const LegGeometry& geom, double gamma) {
  const double s = std::sin(gamma);
  return geom.l1 * std::cos(gamma) +
         std::sqrt(geom.l2 * geom.l2 - geom.l1 * geom.l1 * s * s);
}

double leg_extension_slope(const LegGeometry& geom, double gamma) {
  const double s = std::sin(gamma);
  const double c = std::cos(gamma);
  const double root = std::sqrt(geom.l2 * geom.l2 - geom.l1 * geom.l1 * s * s);
  return -geom.l1 * s - geom.l1 * geom.l1 * s * c / root;
}

FootPosition forward_kinematics(const LegGeometry& geom,
                                const VirtualLegState& s) {
  const double r = leg_extension(geom, s.gamma);
  return FootPosition{r * std::sin(s.theta), -r * std::cos(s.theta)};
}

VirtualLegState inverse_kinematics(const LegGeometry& geom,
                                   const FootPosition& p) {
  const double r = p.norm();
  if (r < geom.r_min() || r > geom.r_max()) {
    throw UnreachableTarget("foot target at distance " + std::to_string(r) +
                            " m outside workspace [" +
                            std::to_string(geom.r_min()) + ", " +
                            std::to_string(geom.r_max()) + "] m");
  }
  const double theta = std::atan2(p.x, -p.z);
  // Law of cosines on the hip-knee-foot triangle; clamp against round-off
  // at the workspace boundaries.
  const double cos_gamma =
      (geom.l1 * geom.l1 + r * r - geom.l2 * geom.l2) / (2.0 * geom.l1 * r);
  const double gamma = std::acos(std::clamp(cos_gamma, -1.0, 1.0));
  return VirtualLegState{theta, gamma};
}

VirtualLegState to_virtual(const MotorAngles& a) {
  return VirtualLegState{0.5 * (a.phi1 + a.phi2), 0.5 * (a.phi1 - a.phi2)};
}

MotorAngles to_motor(const VirtualLegState& s) {
  return MotorAngles{s.theta + s.gamma, s.theta - s.gamma};
}

Eigen::Matrix2d leg_jacobian(const LegGeometry& geom, const MotorAngles& a) {
  const VirtualLegState s = to_virtual(a);
  const double r = leg_extension(geom, s.gamma);
  const double dr = leg_extension_slope(geom, s.gamma);
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);

  // d(x, z)/d(theta, gamma) chained with the linear motor->virtual map
  // d(theta, gamma)/d(phi1, phi2) = [[1/2, 1/2], [1/2, -1/2]].
  Eigen::Matrix2d virt;
  virt << r * ct, dr * st,  //
      r * st, -dr * ct;
  Eigen::Matrix2d map;
  map << 0.5, 0.5,  //
      0.5, -0.5;
  return virt * map;
}

double condition_number(const Eigen::Matrix2d& m) {
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(1);
  if (smin <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return smax / smin;
}

Eigen::Vector2d foot_force_from_torques(const Eigen::Matrix2d& jacobian,
                                        const Eigen::Vector2d& tau) {
  if (!(condition_number(jacobian) < kSingularConditionLimit)) {
    throw SingularConfiguration(
        "leg Jacobian condition number exceeds 1e8; force estimate is "
        "meaningless near gamma = 0 or pi");
  }
  return jacobian.transpose().inverse() * tau;
}

Eigen::Vector2d torques_from_foot_force(const Eigen::Matrix2d& jacobian,
                                        const Eigen::Vector2d& force) {
  return jacobian.transpose() * force;
}

}  // namespace doggo
