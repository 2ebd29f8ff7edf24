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

#include "doggo/trace.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace doggo {

namespace {

constexpr const char* kHeaderPrefix = "t,body_x,body_z,pitch,body_vx";

std::string format_row(const TraceSample& s) {
  char buf[1400];
  int n = std::snprintf(buf, sizeof(buf),
                        "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", s.t,
                        s.body.x, s.body.z, s.body.pitch, s.body.vx, s.body.vz,
                        s.body.pitch_rate);
  for (const LegSample& leg : s.legs) {
    n += std::snprintf(buf + n, sizeof(buf) - static_cast<std::size_t>(n),
                       ",%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g", leg.phi1,
                       leg.phi2, leg.tau1, leg.tau2, leg.contact ? 1 : 0,
                       leg.fx, leg.fz);
  }
  n += std::snprintf(buf + n, sizeof(buf) - static_cast<std::size_t>(n),
                     ",%.17g\n", s.power_w);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

void Trace::append(const TraceSample& sample) {
  if (!samples_.empty() && !(sample.t > samples_.back().t)) {
    throw ValidationError("trace timestamps must be strictly increasing");
  }
  samples_.push_back(sample);
}

void Trace::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open trace file for writing: " + path.string());
  }
  out << "t,body_x,body_z,pitch,body_vx,body_vz,pitch_rate";
  for (int leg = 0; leg < 4; ++leg) {
    const std::string p = "leg" + std::to_string(leg) + "_";
    out << "," << p << "phi1," << p << "phi2," << p << "tau1," << p << "tau2,"
        << p << "contact," << p << "fx," << p << "fz";
  }
  out << ",power_w\n";
  for (const TraceSample& s : samples_) {
    out << format_row(s);
  }
}

Trace Trace::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open trace file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind(kHeaderPrefix, 0) != 0) {
    throw ParseError("not a trace CSV: " + path.string());
  }

  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("bad trace cell '" + cell + "' in " + path.string());
      }
    }
    if (values.size() != 36) {
      throw ParseError("trace row has " + std::to_string(values.size()) +
                       " columns, expected 36");
    }
    TraceSample s;
    s.t = values[0];
    s.body = BodyState{values[1], values[2], values[3],
                       values[4], values[5], values[6]};
    for (int leg = 0; leg < 4; ++leg) {
      const std::size_t base = 7 + 7 * static_cast<std::size_t>(leg);
      LegSample& ls = s.legs[static_cast<std::size_t>(leg)];
      ls.phi1 = values[base];
      ls.phi2 = values[base + 1];
      ls.tau1 = values[base + 2];
      ls.tau2 = values[base + 3];
      ls.contact = values[base + 4] != 0.0;
      ls.fx = values[base + 5];
      ls.fz = values[base + 6];
    }
    s.power_w = values[35];
    trace.samples_.push_back(s);
  }
  if (trace.samples_.size() >= 2) {
    trace.dt_ = trace.samples_[1].t - trace.samples_[0].t;
  }
  return trace;
}

namespace {

bool bits_equal(double a, double b) {
  std::uint64_t ua = 0, ub = 0;
  std::memcpy(&ua, &a, sizeof(a));
  std::memcpy(&ub, &b, sizeof(b));
  return ua == ub;
}

}  // namespace

bool Trace::binary_equal(const Trace& other) const {
  if (samples_.size() != other.samples_.size() || !bits_equal(dt_, other.dt_)) {
    return false;
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const TraceSample& a = samples_[i];
    const TraceSample& b = other.samples_[i];
    bool same = bits_equal(a.t, b.t) && bits_equal(a.body.x, b.body.x) &&
                bits_equal(a.body.z, b.body.z) &&
                bits_equal(a.body.pitch, b.body.pitch) &&
                bits_equal(a.body.vx, b.body.vx) &&
                bits_equal(a.body.vz, b.body.vz) &&
                bits_equal(a.body.pitch_rate, b.body.pitch_rate) &&
                bits_equal(a.power_w, b.power_w);
    for (int leg = 0; leg < 4 && same; ++leg) {
      const LegSample& la = a.legs[static_cast<std::size_t>(leg)];
      const LegSample& lb = b.legs[static_cast<std::size_t>(leg)];
      same = bits_equal(la.phi1, lb.phi1) && bits_equal(la.phi2, lb.phi2) &&
             bits_equal(la.tau1, lb.tau1) && bits_equal(la.tau2, lb.tau2) &&
             bits_equal(la.i1, lb.i1) && bits_equal(la.i2, lb.i2) &&
             la.contact == lb.contact && bits_equal(la.fx, lb.fx) &&
             bits_equal(la.fz, lb.fz);
    }
    if (!same) {
      return false;
    }
  }
  return true;
}

}  // namespace doggo
