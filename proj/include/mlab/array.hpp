// SPDX-License-Identifier: Apache-2.0
//
// monopulse-lab: software model of a planar monopulse receiver
// Copyright (C) 2026 The monopulse-lab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// 2x2 monopulse array: element signals, sum/difference channels through a
// comparator, pattern cuts and pattern metrics.
//
// Element layout, seen from behind the array looking out along +z:
//   A (top-left)     B (top-right)
//   C (bottom-left)  D (bottom-right)
// The A/C column sits at +x (azimuth) and the A/B row at +y (elevation).
// A direction is given by azimuth and elevation angles whose sines are the
// direction cosines along x and y.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "components.hpp"
#include "rng.hpp"

namespace mlab::array
{

enum class ElementModel
{
  isotropic,
  cosine_q
};

struct ArrayGeometry
{
  double f_op = 1.95e9;
  double d_az = 0.70 * wavelength(1.95e9);
  double d_el = 0.55 * wavelength(1.95e9);
  ElementModel element = ElementModel::cosine_q;
  double q = 1.2;

  double lambda() const { return wavelength(f_op); }

  void check() const
  {
    if (!(f_op > 0.0) || !(d_az > 0.0) || !(d_el > 0.0))
      throw invalid_argument("array geometry needs positive frequency and spacings");
    if (!(q >= 0.0))
      throw invalid_argument("element exponent q must be non-negative");
  }
};

using Quad = std::array<cplx, 4>; // A, B, C, D

/// Sum, azimuth, elevation and diagonal difference channels.
struct Channels
{
  cplx sum, az, el, del;

  cplx operator[](std::size_t i) const { return i == 0 ? sum : i == 1 ? az : i == 2 ? el : del; }
};

enum class Channel
{
  sum = 0,
  az = 1,
  el = 2,
  del = 3
};

/// Output-by-input transfer of a comparator (rows as Channels, columns A..D).
using Transfer = Eigen::Matrix4cd;

inline double element_gain(const ArrayGeometry &g, double u, double v)
{
  if (g.element == ElementModel::isotropic)
    return 1.0;
  const double c2 = 1.0 - u * u - v * v;
  return c2 <= 0.0 ? 0.0 : std::pow(std::sqrt(c2), g.q);
}

/// Plane-wave element signals for direction cosines (u, v).
inline Quad steering_from_cosines(const ArrayGeometry &g, double u, double v)
{
  const double k = 2.0 * pi / g.lambda();
  const double px = 0.5 * g.d_az, py = 0.5 * g.d_el;
  const double amp = element_gain(g, u, v);
  const std::array<double, 4> x{+px, -px, +px, -px};
  const std::array<double, 4> y{+py, +py, -py, -py};
  Quad out;
  for (std::size_t i = 0; i < 4; ++i)
    out[i] = amp * std::exp(j1 * (k * (x[i] * u + y[i] * v)));
  return out;
}

/// Element signals for a plane wave from (theta_az, theta_el) in degrees.
inline Quad steering_vector(const ArrayGeometry &g, double theta_az_deg, double theta_el_deg)
{
  if (std::abs(theta_az_deg) > 90.0 || std::abs(theta_el_deg) > 90.0)
    throw invalid_argument("steering angles must lie within +-90 degrees");
  return steering_from_cosines(g, std::sin(deg2rad(theta_az_deg)), std::sin(deg2rad(theta_el_deg)));
}

/// Exact sign-matrix combination of the element signals.
inline Channels ideal_channels(const Quad &x)
{
  const auto &[a, b, c, d] = x;
  return {a + b + c + d, (a + c) - (b + d), (a + b) - (c + d), (a + d) - (b + c)};
}

inline Transfer ideal_transfer()
{
  Transfer t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      t(r, c) = static_cast<double>(components::sign_matrix[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  return t;
}

/// Comparator transfer (outputs P5..P8 by inputs P1..P4) at frequency f.
inline Transfer comparator_transfer(const net::SweepSParams &s, double f)
{
  if (s.ports != 8)
    throw invalid_argument("comparator sweep must have 8 ports");
  return s.at(f).block(4, 0, 4, 4);
}

inline Channels apply_transfer(const Transfer &t, const Quad &x)
{
  const Eigen::Vector4cd in(x[0], x[1], x[2], x[3]);
  const Eigen::Vector4cd out = t * in;
  return {out(0), out(1), out(2), out(3)};
}

inline Channels network_channels(const net::SweepSParams &s, const ArrayGeometry &g, double theta_az_deg,
                                 double theta_el_deg, double f)
{
  return apply_transfer(comparator_transfer(s, f), steering_vector(g, theta_az_deg, theta_el_deg));
}

/// Multiplies each comparator transmission by an independent amplitude
/// error uniform in +-amp_db and phase error uniform in +-phase_deg.
inline Transfer perturb_transfer(const Transfer &t, double amp_db, double phase_deg, rng &r)
{
  Transfer out = t;
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
    {
      const double a = r.uniform(-amp_db, amp_db);
      const double p = r.uniform(-phase_deg, phase_deg);
      out(row, col) *= db_to_mag(a) * std::exp(j1 * deg2rad(p));
    }
  return out;
}

// ------------------------------------------------------------------------
// Pattern cuts

struct Cut
{
  double phi_deg = 0.0;
  Channel channel = Channel::sum;
  std::vector<double> theta_deg;
  std::vector<double> gain_db; // relative to the sum-channel peak of the cut
};

inline std::vector<double> theta_grid(double step_deg = 0.25, double limit_deg = 90.0)
{
  const auto n = static_cast<std::size_t>(std::llround(2.0 * limit_deg / step_deg)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i)
    t[i] = -limit_deg + step_deg * static_cast<double>(i);
  return t;
}

/// Pattern along the phi = 0 (azimuth) or phi = 90 (elevation) plane.
inline Cut cut_pattern(const Transfer &t, const ArrayGeometry &g, double phi_deg, Channel ch,
                       const std::vector<double> &theta_deg)
{
  g.check();
  if (phi_deg != 0.0 && phi_deg != 90.0)
    throw invalid_argument("pattern cuts are available for phi = 0 or 90 degrees");
  for (std::size_t i = 1; i < theta_deg.size(); ++i)
    if (!(theta_deg[i] > theta_deg[i - 1]))
      throw invalid_argument("theta grid must be strictly increasing");
  Cut c;
  c.phi_deg = phi_deg;
  c.channel = ch;
  c.theta_deg = theta_deg;
  std::vector<double> mag(theta_deg.size());
  double peak_sum = 0.0;
  for (std::size_t i = 0; i < theta_deg.size(); ++i)
  {
    const double s = std::sin(deg2rad(theta_deg[i]));
    const Channels out = apply_transfer(t, phi_deg == 0.0 ? steering_from_cosines(g, s, 0.0)
                                                          : steering_from_cosines(g, 0.0, s));
    peak_sum = std::max(peak_sum, std::abs(out.sum));
    mag[i] = std::abs(out[static_cast<std::size_t>(ch)]);
  }
  if (!(peak_sum > 0.0))
    throw no_main_lobe("sum channel is zero over the whole cut");
  c.gain_db.resize(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i)
    c.gain_db[i] = 20.0 * std::log10(std::max(mag[i] / peak_sum, 1e-15));
  return c;
}

inline Cut cut_pattern(const net::SweepSParams &s, const ArrayGeometry &g, double phi_deg, Channel ch, double f,
                       const std::vector<double> &theta_deg)
{
  return cut_pattern(comparator_transfer(s, f), g, phi_deg, ch, theta_deg);
}

struct PatternMetrics
{
  double hpbw_deg = 0.0;
  double sll_db = 0.0; // infinity when there is no secondary lobe
  double null_depth_db = 0.0;
  double peak_theta_deg = 0.0;
};

inline double level_at(const std::vector<double> &x, const std::vector<double> &y, double x0)
{
  if (x.empty() || x0 < x.front() || x0 > x.back())
    throw invalid_argument("interpolation point outside the grid");
  const auto it = std::lower_bound(x.begin(), x.end(), x0);
  const auto k = static_cast<std::size_t>(it - x.begin());
  if (x[k] == x0)
    return y[k];
  const double w = (x0 - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + w * (y[k] - y[k - 1]);
}

/// Half-power beamwidth (linear interpolation of the -3 dB crossings around
/// the highest point), side-lobe level (peak minus the highest local
/// maximum outside the main lobe) and null depth (peak minus the level at
/// theta = 0).
inline PatternMetrics pattern_metrics(const Cut &c)
{
  const auto &t = c.theta_deg;
  const auto &y = c.gain_db;
  if (t.size() < 3 || t.size() != y.size())
    throw invalid_argument("pattern cut needs at least three samples");
  const auto ip = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double peak = y[ip];
  const double half = peak - 10.0 * std::log10(2.0);

  std::size_t l = ip;
  while (l > 0 && y[l - 1] > half)
    --l;
  std::size_t r = ip;
  while (r + 1 < y.size() && y[r + 1] > half)
    ++r;
  if (l == 0 || r + 1 == y.size() || !(y[l - 1] <= half) || !(y[r + 1] <= half))
    throw no_main_lobe("no -3 dB crossing on both sides of the peak");
  auto cross = [&](std::size_t in, std::size_t out) {
    return t[in] + (half - y[in]) * (t[out] - t[in]) / (y[out] - y[in]);
  };
  PatternMetrics m;
  m.hpbw_deg = cross(r, r + 1) - cross(l, l - 1);
  m.peak_theta_deg = t[ip];

  // Main lobe extends down to the first local minimum on each side.
  std::size_t lo = ip, hi = ip;
  while (lo > 0 && y[lo - 1] <= y[lo])
    --lo;
  while (hi + 1 < y.size() && y[hi + 1] <= y[hi])
    ++hi;
  double side = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if ((i < lo || i > hi) && y[i] >= y[i - 1] && y[i] >= y[i + 1])
      side = std::max(side, y[i]);
  m.sll_db = peak - side;
  if (t.front() <= 0.0 && t.back() >= 0.0)
    m.null_depth_db = std::max(0.0, peak - level_at(t, y, 0.0));
  return m;
}

} // namespace mlab::array
