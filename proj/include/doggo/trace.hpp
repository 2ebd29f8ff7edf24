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
#include <cstddef>
#include <filesystem>
#include <vector>

#include "doggo/errors.hpp"

namespace doggo {

struct BodyState {
  double x = 0.0;
  double z = 0.0;
  double pitch = 0.0;
  double vx = 0.0;
  double vz = 0.0;
  double pitch_rate = 0.0;
};

struct LegSample {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double tau1 = 0.0;  // applied shaft torques (Nm)
  double tau2 = 0.0;
  double i1 = 0.0;    // motor currents (A)
  double i2 = 0.0;
  bool contact = false;
  double fx = 0.0;  // estimated foot force on the environment (N)
  double fz = 0.0;
};

struct TraceSample {
  double t = 0.0;
  BodyState body;
  std::array<LegSample, 4> legs;
  double power_w = 0.0;  // total electrical power
};

// Uniformly sampled simulation record; dt is pinned to the inner control
// period so every metric sees the same clock the controller did.
class Trace {
 public:
  Trace() = default;
  explicit Trace(double dt) : dt_(dt) {}

  double dt() const { return dt_; }
  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  const TraceSample& operator[](std::size_t i) const { return samples_[i]; }
  const TraceSample& front() const { return samples_.front(); }
  const TraceSample& back() const { return samples_.back(); }
  const std::vector<TraceSample>& samples() const { return samples_; }

  void append(const TraceSample& sample);

  // CSV columns: t, body_x, body_z, pitch, body_vx, body_vz, pitch_rate,
  // then per leg (phi1, phi2, tau1, tau2, contact, fx, fz), power_w.
  // Currents are derived data and are not part of the file format.
  void write_csv(const std::filesystem::path& path) const;
  static Trace read_csv(const std::filesystem::path& path);

  bool binary_equal(const Trace& other) const;

 private:
  double dt_ = 1e-4;
  std::vector<TraceSample> samples_;
};

}  // namespace doggo
