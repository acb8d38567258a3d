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

// Monopulse-ratio direction finding, receive-chain impairments and the
// synthetic target-scan dataset.

#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "array.hpp"
#include "components.hpp"
#include "config.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sweep.hpp"

namespace mlab::doa
{

using array::ArrayGeometry;
using array::Channels;
using array::Quad;

/// Real part of delta/sigma. The quadrature part carries no angle
/// information in an ideal receiver and is dropped.
inline double monopulse_ratio(cplx delta, cplx sigma)
{
  if (!(std::abs(sigma) > 0.0) || std::abs(sigma) < 1e-12 * std::abs(delta))
    throw sum_null("sum channel vanishes");
  return std::real(delta / sigma);
}

/// Ideal ratio of a two-element pair with spacing d: tan(pi d / lambda sin theta).
inline double ratio_from_angle(double theta_rad, double d, double lambda)
{
  return std::tan(pi * d / lambda * std::sin(theta_rad));
}

/// Inverse of ratio_from_angle on the principal branch.
inline double angle_from_ratio(double gamma, double d, double lambda)
{
  if (!(d > 0.0) || !(lambda > 0.0))
    throw invalid_argument("spacing and wavelength must be positive");
  const double s = std::atan(gamma) * lambda / (pi * d);
  if (!(std::abs(s) <= 1.0))
    throw out_of_unambiguous_range("ratio maps outside the unambiguous angle range");
  return std::asin(s);
}

/// Ground-bounce style multipath: an image wave from (theta_az, -theta_el)
/// with relative amplitude rel_amp and phase -k*excess_path + reflection phase.
struct Multipath
{
  double rel_amp = 0.0;
  double excess_path_m = 0.0;
  double reflection_phase_deg = 180.0;
};

struct ImpairmentConfig
{
  double sigma_amp_db = 0.0;
  double sigma_phase_deg = 0.0;
  double snr_db = std::numeric_limits<double>::infinity();
  std::optional<Multipath> multipath;
  std::optional<array::Transfer> comparator; // ideal sign matrix when empty
  // Channel gain errors are a property of the receiver: drawn once per
  // scenario when true, per sample otherwise.
  bool fixed_channel_errors = true;
  std::uint64_t seed = 0;

  void check() const
  {
    if (!(sigma_amp_db >= 0.0) || !(sigma_phase_deg >= 0.0))
      throw invalid_argument("impairment sigmas must be non-negative");
    if (std::isnan(snr_db))
      throw invalid_argument("snr must be a number");
    if (multipath && !(multipath->rel_amp >= 0.0 && multipath->rel_amp < 1.0))
      throw invalid_argument("multipath relative amplitude must lie in [0, 1)");
  }
};

/// Complex gain error per channel (sum, az, el, del).
struct ChannelErrors
{
  std::array<cplx, 4> gain{1.0, 1.0, 1.0, 1.0};
};

inline ChannelErrors draw_channel_errors(const ImpairmentConfig &cfg, rng &r)
{
  ChannelErrors e;
  for (auto &g : e.gain)
  {
    const double a = cfg.sigma_amp_db * r.normal();
    const double p = cfg.sigma_phase_deg * r.normal();
    g = db_to_mag(a) * std::exp(j1 * deg2rad(p));
  }
  return e;
}

inline Channels apply_channel_errors(const Channels &c, const ChannelErrors &e)
{
  return {c.sum * e.gain[0], c.az * e.gain[1], c.el * e.gain[2], c.del * e.gain[3]};
}

/// Adds circular complex Gaussian noise to every channel with power
/// |sum|^2 / SNR.
inline Channels add_noise(const Channels &c, double snr_db, rng &r)
{
  if (std::isinf(snr_db) && snr_db > 0.0)
    return c;
  const double sigma = std::abs(c.sum) * std::pow(10.0, -snr_db / 20.0) / std::sqrt(2.0);
  auto n = [&] {
    const double re = r.normal(), im = r.normal();
    return sigma * cplx(re, im);
  };
  Channels out = c;
  out.sum += n();
  out.az += n();
  out.el += n();
  out.del += n();
  return out;
}

/// Gain/phase errors drawn from the config followed by receiver noise.
inline Channels apply_impairments(const Channels &c, const ImpairmentConfig &cfg, rng &r)
{
  cfg.check();
  const ChannelErrors e = draw_channel_errors(cfg, r);
  return add_noise(apply_channel_errors(c, e), cfg.snr_db, r);
}

/// Element signals for a target at (theta_az, theta_el) in radians,
/// including the multipath image if configured.
inline Quad received_elements(const ArrayGeometry &g, double theta_az, double theta_el,
                              const std::optional<Multipath> &mp)
{
  Quad x = array::steering_from_cosines(g, std::sin(theta_az), std::sin(theta_el));
  if (mp && mp->rel_amp > 0.0)
  {
    const double k = 2.0 * pi / g.lambda();
    const cplx w = mp->rel_amp * std::exp(j1 * (-k * mp->excess_path_m + deg2rad(mp->reflection_phase_deg)));
    const Quad img = array::steering_from_cosines(g, std::sin(theta_az), -std::sin(theta_el));
    for (std::size_t i = 0; i < 4; ++i)
      x[i] += w * img[i];
  }
  return x;
}

struct Estimate
{
  double az = 0.0, el = 0.0;           // radians
  double gamma_az = 0.0, gamma_el = 0.0;
  double quad_az = 0.0, quad_el = 0.0; // discarded quadrature parts, for diagnostics
  Channels channels{};
};

/// Full chain: element signals, comparator, impairments, ratio and
/// inversion per axis. The difference channels of a sum/difference
/// network lead the sum by 90 degrees for a positive angle, so they are
/// rotated by -90 degrees before the ratio is taken.
inline Estimate estimate(const ArrayGeometry &g, double theta_az, double theta_el, const ImpairmentConfig &cfg, rng &r,
                         const ChannelErrors *systematic = nullptr)
{
  cfg.check();
  const Quad x = received_elements(g, theta_az, theta_el, cfg.multipath);
  const array::Transfer t = cfg.comparator ? *cfg.comparator : array::ideal_transfer();
  Channels c = array::apply_transfer(t, x);
  const ChannelErrors e = systematic ? *systematic : draw_channel_errors(cfg, r);
  c = add_noise(apply_channel_errors(c, e), cfg.snr_db, r);
  Estimate out;
  out.channels = c;
  const cplx ra = -j1 * c.az / c.sum, re = -j1 * c.el / c.sum;
  out.gamma_az = monopulse_ratio(-j1 * c.az, c.sum);
  out.gamma_el = monopulse_ratio(-j1 * c.el, c.sum);
  out.quad_az = ra.imag();
  out.quad_el = re.imag();
  out.az = angle_from_ratio(out.gamma_az, g.d_az, g.lambda());
  out.el = angle_from_ratio(out.gamma_el, g.d_el, g.lambda());
  return out;
}

// ------------------------------------------------------------------------
// Dataset

struct Scenario
{
  double distance = 0.62; // metres
  double pitch = 0.03;    // metres
  std::size_t grid_n = 12;
  bool include_origin = true;
  // Selects an independent set of per-sample noise draws while keeping the
  // seed, and with it the receiver's fixed channel errors, unchanged.
  std::uint64_t noise_stream = 0;
  ImpairmentConfig impairments{};
  ArrayGeometry geometry{};

  std::size_t sample_count() const { return grid_n * grid_n + (include_origin ? 1 : 0); }

  void check() const
  {
    if (!(distance > 0.0) || !(pitch > 0.0) || grid_n < 1)
      throw invalid_argument("scenario needs positive distance, pitch and grid size");
    impairments.check();
    geometry.check();
  }
};

/// Impairment levels used for the standard training scenario.
inline ImpairmentConfig moderate_impairments(std::uint64_t seed)
{
  ImpairmentConfig c;
  c.sigma_amp_db = 0.5;
  c.sigma_phase_deg = 5.0;
  c.snr_db = 50.0;
  c.multipath = Multipath{0.1, 0.5, 180.0};
  c.seed = seed;
  return c;
}

struct DoASample
{
  std::size_t index = 0;
  double x = 0.0, y = 0.0, distance = 0.0; // metres
  double az_true = 0.0, el_true = 0.0;     // radians
  double az_est = 0.0, el_est = 0.0;       // radians, NaN when flagged
  std::string flags = "ok";

  bool ok() const { return flags == "ok"; }
};

/// Target positions: a grid_n x grid_n serpentine scan centred on
/// boresight (row by row from the top, alternating direction), followed
/// by the origin when include_origin is set.
inline std::vector<std::pair<double, double>> scan_positions(const Scenario &s)
{
  std::vector<std::pair<double, double>> p;
  const double half = 0.5 * static_cast<double>(s.grid_n - 1);
  for (std::size_t row = 0; row < s.grid_n; ++row)
  {
    const double y = (half - static_cast<double>(row)) * s.pitch;
    for (std::size_t k = 0; k < s.grid_n; ++k)
    {
      const std::size_t col = row % 2 == 0 ? k : s.grid_n - 1 - k;
      p.emplace_back((static_cast<double>(col) - half) * s.pitch, y);
    }
  }
  if (s.include_origin)
    p.emplace_back(0.0, 0.0);
  return p;
}

inline std::vector<DoASample> gen_dataset(const Scenario &s)
{
  s.check();
  const auto pos = scan_positions(s);
  std::vector<DoASample> out(pos.size());
  std::optional<ChannelErrors> fixed;
  if (s.impairments.fixed_channel_errors)
  {
    rng r(mix_seed(s.impairments.seed, std::numeric_limits<std::uint64_t>::max()));
    fixed = draw_channel_errors(s.impairments, r);
  }
  parallel_for(pos.size(), [&](std::size_t i) {
    DoASample d;
    d.index = i;
    d.x = pos[i].first;
    d.y = pos[i].second;
    d.distance = s.distance;
    d.az_true = std::atan(d.x / s.distance);
    d.el_true = std::atan(d.y / s.distance);
    rng r(mix_seed(s.impairments.seed, i + (s.noise_stream << 32)));
    try
    {
      const Estimate e = estimate(s.geometry, d.az_true, d.el_true, s.impairments, r, fixed ? &*fixed : nullptr);
      d.az_est = e.az;
      d.el_est = e.el;
    }
    catch (const sum_null &)
    {
      d.az_est = d.el_est = std::nan("");
      d.flags = "sum_null";
    }
    catch (const out_of_unambiguous_range &)
    {
      d.az_est = d.el_est = std::nan("");
      d.flags = "out_of_range";
    }
    out[i] = std::move(d);
  });
  return out;
}

inline const char *dataset_header()
{
  return "index,x_m,y_m,D_m,theta_az_true_deg,theta_el_true_deg,theta_az_est_deg,theta_el_est_deg,flags";
}

inline std::string dataset_csv(const std::vector<DoASample> &v)
{
  std::string out = std::string(dataset_header()) + "\n";
  char buf[512];
  for (const auto &d : v)
  {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", d.index, d.x, d.y,
                  d.distance, rad2deg(d.az_true), rad2deg(d.el_true), rad2deg(d.az_est), rad2deg(d.el_est),
                  d.flags.c_str());
    out += buf;
  }
  return out;
}

inline std::vector<DoASample> parse_dataset_csv(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw parse_error("dataset file is empty");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != dataset_header())
    throw parse_error("unexpected dataset header");
  std::vector<DoASample> out;
  std::size_t lineno = 1;
  while (std::getline(in, line))
  {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');)
      f.push_back(cell);
    if (f.size() != 9)
      throw parse_error("dataset line " + std::to_string(lineno) + ": expected 9 fields");
    auto num = [&](const std::string &s) {
      try
      {
        return std::stod(s);
      }
      catch (const std::exception &)
      {
        throw parse_error("dataset line " + std::to_string(lineno) + ": bad number '" + s + "'");
      }
    };
    DoASample d;
    d.index = static_cast<std::size_t>(num(f[0]));
    d.x = num(f[1]);
    d.y = num(f[2]);
    d.distance = num(f[3]);
    d.az_true = deg2rad(num(f[4]));
    d.el_true = deg2rad(num(f[5]));
    d.az_est = deg2rad(num(f[6]));
    d.el_est = deg2rad(num(f[7]));
    d.flags = f[8];
    out.push_back(std::move(d));
  }
  return out;
}

/// Builds a scenario from key=value settings; missing keys keep defaults.
/// Spacings are given in wavelengths. `comparator = network` replaces the
/// ideal sign matrix with the simulated comparator (designed at
/// comparator_f0) evaluated at the operating frequency.
inline Scenario scenario_from_config(const Config &c, Scenario s = {})
{
  s.distance = c.get("distance", s.distance);
  s.pitch = c.get("pitch", s.pitch);
  s.grid_n = static_cast<std::size_t>(c.get_int("grid_n", static_cast<std::int64_t>(s.grid_n)));
  s.include_origin = c.get_bool("include_origin", s.include_origin);
  auto &g = s.geometry;
  const double lam0 = g.lambda();
  const double daz = g.d_az / lam0, del = g.d_el / lam0;
  g.f_op = c.get("f_op", g.f_op);
  g.d_az = c.get("d_az_lambda", daz) * g.lambda();
  g.d_el = c.get("d_el_lambda", del) * g.lambda();
  const std::string el = c.get("element", std::string(g.element == array::ElementModel::isotropic ? "isotropic" : "cosine"));
  if (el == "isotropic")
    g.element = array::ElementModel::isotropic;
  else if (el == "cosine")
    g.element = array::ElementModel::cosine_q;
  else
    throw parse_error("element must be isotropic or cosine");
  g.q = c.get("q", g.q);
  auto &m = s.impairments;
  m.sigma_amp_db = c.get("sigma_amp_db", m.sigma_amp_db);
  m.sigma_phase_deg = c.get("sigma_phase_deg", m.sigma_phase_deg);
  m.snr_db = c.get("snr_db", m.snr_db); // "inf" disables noise
  m.fixed_channel_errors = c.get_bool("fixed_channel_errors", m.fixed_channel_errors);
  const Multipath mp0 = m.multipath.value_or(Multipath{});
  const double amp = c.get("multipath_amp", mp0.rel_amp);
  if (amp > 0.0)
    m.multipath = Multipath{amp, c.get("multipath_excess_m", mp0.excess_path_m),
                            c.get("multipath_phase_deg", mp0.reflection_phase_deg)};
  else
    m.multipath.reset();
  m.seed = static_cast<std::uint64_t>(c.get_int("seed", static_cast<std::int64_t>(m.seed)));
  const std::string comp = c.get("comparator", std::string(m.comparator ? "network" : "ideal"));
  if (comp == "network")
  {
    const double f0 = c.get("comparator_f0", 2e9);
    const auto graph = components::gen_comparator(f0, 50.0, 50.0, c.get("comparator_loss_db", 0.0));
    m.comparator = array::comparator_transfer(sweep::run(graph, std::vector<double>{g.f_op}, f0, 50.0), g.f_op);
  }
  else if (comp == "ideal")
    m.comparator.reset();
  else
    throw parse_error("comparator must be ideal or network");
  s.check();
  return s;
}

} // namespace mlab::doa
