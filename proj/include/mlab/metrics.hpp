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

// S-parameter figures of merit and the fractional-bandwidth search.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "components.hpp"

namespace mlab::components
{

/// Outputs driven from one input whose amplitudes should match and whose
/// phases should differ from the first output by the given offsets.
struct TransmissionGroup
{
  std::string name;
  std::size_t input = 0;
  std::vector<std::size_t> outputs;
  std::vector<double> expected_phase_deg; // relative to outputs[0]
};

struct Layout
{
  std::vector<std::string> port_labels;
  std::vector<std::size_t> reflection_ports;
  std::vector<std::pair<std::size_t, std::size_t>> isolation_pairs; // (to, from)
  std::vector<TransmissionGroup> groups;
};

struct Criteria
{
  std::optional<double> min_return_loss_db;
  std::optional<double> min_isolation_db;
  double max_amplitude_imbalance_db = 0.5;
  double max_phase_imbalance_deg = 10.0;
};

struct FrequencyVerdict
{
  double f = 0.0;
  double worst_return_loss_db = 0.0;
  double worst_isolation_db = 0.0;
  double worst_amplitude_imbalance_db = 0.0;
  double worst_phase_imbalance_deg = 0.0;
  bool return_ok = true;
  bool isolation_ok = true;
  bool amplitude_ok = true;
  bool phase_ok = true;
  bool pass() const { return return_ok && isolation_ok && amplitude_ok && phase_ok; }
};

struct Transmission
{
  std::size_t to = 0, from = 0;
  double mag_db = 0.0;
  double phase_deg = 0.0;
};

struct MetricsReport
{
  double f0 = 0.0;
  std::vector<std::string> port_labels;
  std::vector<std::pair<std::size_t, double>> return_loss_db;                  // at f0
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> isolation_db; // at f0
  std::vector<Transmission> transmissions;                                     // at f0
  std::vector<FrequencyVerdict> verdicts;
  double f_lo = 0.0, f_hi = 0.0;
  double fractional_bandwidth_pct = 0.0;
};

inline FrequencyVerdict judge(const net::SMatrix &s, double f, const Layout &layout, const Criteria &crit)
{
  FrequencyVerdict v;
  v.f = f;
  v.worst_return_loss_db = 1e9;
  for (std::size_t p : layout.reflection_ports)
    v.worst_return_loss_db = std::min(v.worst_return_loss_db, -mag_db(s(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p))));
  v.worst_isolation_db = 1e9;
  for (const auto &[to, from] : layout.isolation_pairs)
    v.worst_isolation_db = std::min(v.worst_isolation_db, -mag_db(s(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from))));
  for (const auto &g : layout.groups)
  {
    const cplx ref = s(static_cast<Eigen::Index>(g.outputs[0]), static_cast<Eigen::Index>(g.input));
    for (std::size_t k = 1; k < g.outputs.size(); ++k)
    {
      const cplx t = s(static_cast<Eigen::Index>(g.outputs[k]), static_cast<Eigen::Index>(g.input));
      v.worst_amplitude_imbalance_db = std::max(v.worst_amplitude_imbalance_db, std::abs(mag_db(t) - mag_db(ref)));
      const double dphi = wrap_deg(phase_deg(t / ref) - g.expected_phase_deg[k]);
      v.worst_phase_imbalance_deg = std::max(v.worst_phase_imbalance_deg, std::abs(dphi));
    }
  }
  if (crit.min_return_loss_db)
    v.return_ok = v.worst_return_loss_db >= *crit.min_return_loss_db;
  if (crit.min_isolation_db)
    v.isolation_ok = v.worst_isolation_db >= *crit.min_isolation_db;
  v.amplitude_ok = v.worst_amplitude_imbalance_db <= crit.max_amplitude_imbalance_db;
  v.phase_ok = v.worst_phase_imbalance_deg <= crit.max_phase_imbalance_deg;
  return v;
}

/// Per-frequency verdicts and the widest contiguous passing interval that
/// contains f0 (zero when f0 itself fails), as a percentage of f0 capped
/// at 100.
inline MetricsReport metrics(const net::SweepSParams &s, const Layout &layout, const Criteria &crit, double f0)
{
  const auto i0 = s.index_of(f0);
  if (i0 < 0)
    throw frequency_not_in_grid("metrics need f0 on the frequency grid");
  MetricsReport r;
  r.f0 = f0;
  r.port_labels = layout.port_labels;
  const net::SMatrix &m = s.matrices[static_cast<std::size_t>(i0)];
  auto at = [&](std::size_t to, std::size_t from) { return m(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)); };
  for (std::size_t p : layout.reflection_ports)
    r.return_loss_db.emplace_back(p, -mag_db(at(p, p)));
  for (const auto &pr : layout.isolation_pairs)
    r.isolation_db.emplace_back(pr, -mag_db(at(pr.first, pr.second)));
  for (const auto &g : layout.groups)
    for (std::size_t o : g.outputs)
      r.transmissions.push_back({o, g.input, mag_db(at(o, g.input)), phase_deg(at(o, g.input))});

  for (std::size_t i = 0; i < s.size(); ++i)
    r.verdicts.push_back(judge(s.matrices[i], s.freqs[i], layout, crit));
  const auto c = static_cast<std::size_t>(i0);
  if (r.verdicts[c].pass())
  {
    std::size_t lo = c, hi = c;
    while (lo > 0 && r.verdicts[lo - 1].pass())
      --lo;
    while (hi + 1 < r.verdicts.size() && r.verdicts[hi + 1].pass())
      ++hi;
    r.f_lo = s.freqs[lo];
    r.f_hi = s.freqs[hi];
    r.fractional_bandwidth_pct = std::min(100.0, (r.f_hi - r.f_lo) / f0 * 100.0);
  }
  else
    r.f_lo = r.f_hi = f0;
  return r;
}

// ------------------------------------------------------------------------
// Layouts

/// Coupler: sum drive at a and difference drive at c, outputs b and d.
inline Layout coupler_layout()
{
  Layout l;
  l.port_labels = {"Pa", "Pb", "Pc", "Pd"};
  l.reflection_ports = {port::a, port::b, port::c, port::d};
  l.isolation_pairs = {{port::c, port::a}, {port::d, port::b}};
  l.groups = {{"sum", port::a, {port::b, port::d}, {0.0, 0.0}},
              {"difference", port::c, {port::b, port::d}, {0.0, 180.0}}};
  return l;
}

/// Comparator: for each output channel, the four element inputs should
/// arrive with equal amplitude and the relative signs of the channel.
inline Layout comparator_layout()
{
  Layout l;
  for (const char *p : comparator_ports)
    l.port_labels.emplace_back(p);
  for (std::size_t p = 0; p < 8; ++p)
    l.reflection_ports.push_back(p);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = i + 1; k < 4; ++k)
    {
      l.isolation_pairs.emplace_back(k, i);
      l.isolation_pairs.emplace_back(k + 4, i + 4);
    }
  const std::array<const char *, 4> names{"sum", "azimuth", "elevation", "diagonal"};
  for (std::size_t row = 0; row < 4; ++row)
  {
    // By reciprocity, drive the output and watch the four inputs.
    TransmissionGroup g{names[row], 4 + row, {0, 1, 2, 3}, {}};
    for (std::size_t col = 0; col < 4; ++col)
      g.expected_phase_deg.push_back(sign_matrix[row][col] == sign_matrix[row][0] ? 0.0 : 180.0);
    l.groups.push_back(std::move(g));
  }
  return l;
}

/// Two-port thru: no imbalance terms, only the transmission itself.
inline Layout thru_layout()
{
  Layout l;
  l.port_labels = {"P1", "P2"};
  l.reflection_ports = {0, 1};
  l.groups = {{"thru", 0, {1}, {0.0}}};
  return l;
}

// ------------------------------------------------------------------------
// Output

inline std::string metrics_csv(const MetricsReport &r)
{
  std::string out = "freq_hz,worst_return_loss_db,worst_isolation_db,worst_amplitude_imbalance_db,"
                    "worst_phase_imbalance_deg,return_ok,isolation_ok,amplitude_ok,phase_ok,pass\n";
  char buf[256];
  for (const auto &v : r.verdicts)
  {
    std::snprintf(buf, sizeof buf, "%.9g,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%d,%d\n", v.f,
                  std::min(v.worst_return_loss_db, 999.0), std::min(v.worst_isolation_db, 999.0),
                  v.worst_amplitude_imbalance_db, v.worst_phase_imbalance_deg, v.return_ok, v.isolation_ok,
                  v.amplitude_ok, v.phase_ok, v.pass());
    out += buf;
  }
  return out;
}

inline std::string metrics_summary(const MetricsReport &r, const Criteria &c)
{
  std::string out;
  char buf[256];
  auto label = [&](std::size_t p) { return p < r.port_labels.size() ? r.port_labels[p] : std::to_string(p); };
  std::snprintf(buf, sizeof buf, "design frequency: %.6g Hz\n", r.f0);
  out += buf;
  out += "criteria:";
  if (c.min_return_loss_db)
  {
    std::snprintf(buf, sizeof buf, " return loss >= %.3g dB;", *c.min_return_loss_db);
    out += buf;
  }
  if (c.min_isolation_db)
  {
    std::snprintf(buf, sizeof buf, " isolation >= %.3g dB;", *c.min_isolation_db);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " amplitude imbalance <= %.3g dB; phase imbalance <= %.3g deg\n",
                c.max_amplitude_imbalance_db, c.max_phase_imbalance_deg);
  out += buf;
  out += "return loss at f0:\n";
  for (const auto &[p, v] : r.return_loss_db)
  {
    std::snprintf(buf, sizeof buf, "  %-6s %10.3f dB\n", label(p).c_str(), std::min(v, 999.0));
    out += buf;
  }
  out += "isolation at f0:\n";
  for (const auto &[pr, v] : r.isolation_db)
  {
    std::snprintf(buf, sizeof buf, "  %s-%s %10.3f dB\n", label(pr.first).c_str(), label(pr.second).c_str(),
                  std::min(v, 999.0));
    out += buf;
  }
  out += "transmission at f0:\n";
  for (const auto &t : r.transmissions)
  {
    std::snprintf(buf, sizeof buf, "  %s<-%s %9.4f dB %9.3f deg\n", label(t.to).c_str(), label(t.from).c_str(),
                  t.mag_db, t.phase_deg);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "passing band: %.6g Hz to %.6g Hz\nfractional bandwidth: %.3f %%\n", r.f_lo, r.f_hi,
                r.fractional_bandwidth_pct);
  out += buf;
  return out;
}

} // namespace mlab::components
