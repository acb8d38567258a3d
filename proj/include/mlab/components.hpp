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

// Circuit generators for the hybrid couplers, the 360 degree crossover and
// the eight-port monopulse comparator, plus the analytic symmetry-mode
// models used to cross-check them and the crossover condition solver.
//
// Crossover layout. The four ports sit on the corners of a square visited
// in the order x, y, x', y'. Each side of the square is two (Zx, thx)
// sections joined at a midpoint, and an inner (Zy, thy) line runs from each
// midpoint to a common centre node. A signal entering x leaves at x'.
//
// Port-transformation coupler. The ring runs
//   b -TL1- a -Z1/45- x [crossover x->x'] x' -Z1/45- d -TL1- c
//     -Z1/45- (1) -Zeta/90- y [crossover y->y'] y' -Zeta/90- (2) -Z1/45- b
// with TL1 = (sqrt2 z0, 90). a is the sum input, c the difference input;
// b and d are the outputs. Both inputs end up on the same side of the ring.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "netlist.hpp"
#include "sweep.hpp"

namespace mlab::components
{

using netlist::GraphBuilder;
using netlist::NetworkGraph;

struct CrossoverParams
{
  double z_x = 57.0;
  double z_y = 50.0;
  double theta_x = 90.0;
  double theta_y = 90.0;

  void check() const
  {
    if (!(z_x > 0.0) || !(z_y > 0.0))
      throw invalid_argument("crossover impedances must be positive");
    if (!(theta_x > 0.0 && theta_x < 180.0) || !(theta_y > 0.0 && theta_y < 180.0))
      throw invalid_argument("crossover electrical lengths must lie in (0, 180) degrees");
  }
};

struct CouplerParams
{
  double f0 = 2e9;
  double z0 = 50.0;
  double z_eta = 50.0; // phase-shifter impedance; free at f0
  double loss_db = 0.0;
  CrossoverParams crossover{};

  double z1() const { return std::sqrt(2.0) * z0; }

  void check() const
  {
    if (!(f0 > 0.0) || !(z0 > 0.0) || !(z_eta > 0.0))
      throw invalid_argument("coupler needs positive f0, z0 and z_eta");
    if (!(loss_db >= 0.0))
      throw invalid_argument("loss must be non-negative");
    crossover.check();
  }
};

// S-matrix port order of the generated graphs (natural label order).
inline constexpr std::array<const char *, 4> coupler_ports{"Pa", "Pb", "Pc", "Pd"};
inline constexpr std::array<const char *, 4> crossover_ports{"Px", "Pxp", "Py", "Pyp"};
inline constexpr std::array<const char *, 8> comparator_ports{"P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"};

namespace port
{
inline constexpr std::size_t a = 0, b = 1, c = 2, d = 3;   // couplers
inline constexpr std::size_t x = 0, xp = 1, y = 2, yp = 3; // crossover
} // namespace port

/// Output channels (rows: sum, azimuth, elevation, diagonal difference)
/// as signed sums of the element signals (columns: A, B, C, D).
inline constexpr std::array<std::array<int, 4>, 4> sign_matrix{{
    {+1, +1, +1, +1},
    {+1, -1, +1, -1},
    {+1, +1, -1, -1},
    {+1, -1, -1, +1},
}};

// ------------------------------------------------------------------------
// Generators

/// Adds a crossover between existing or new corner nodes {x, y, x', y'}.
inline void add_crossover(GraphBuilder &g, const std::string &prefix, const std::array<std::string, 4> &corners,
                          const CrossoverParams &p, double loss_db)
{
  const net::TLineSection outer{p.z_x, p.theta_x, loss_db};
  const net::TLineSection inner{p.z_y, p.theta_y, loss_db};
  const std::string centre = prefix + "c";
  for (int i = 0; i < 4; ++i)
  {
    const std::string m = prefix + "m" + std::to_string(i);
    const std::string tag = std::to_string(i);
    g.tline(prefix + "o" + tag + "a", corners[i], m, outer);
    g.tline(prefix + "o" + tag + "b", m, corners[(i + 1) % 4], outer);
    g.tline(prefix + "k" + tag, m, centre, inner);
  }
}

inline NetworkGraph gen_crossover(const CrossoverParams &p, double f0, double z0, double loss_db = 0.0)
{
  p.check();
  if (!(f0 > 0.0) || !(z0 > 0.0))
    throw invalid_argument("crossover needs positive f0 and z0");
  GraphBuilder g;
  g.port("Px", "x").port("Pxp", "xp").port("Py", "y").port("Pyp", "yp");
  add_crossover(g, "X.", {"x", "y", "xp", "yp"}, p, loss_db);
  return g.build();
}

/// Adds a port-transformation coupler; its port nodes are prefix+{a,b,c,d}.
inline void add_pt_coupler(GraphBuilder &g, const std::string &prefix, const CouplerParams &p)
{
  const double z1 = p.z1();
  const net::TLineSection ring{z1, 90.0, p.loss_db};
  const net::TLineSection half{z1, 45.0, p.loss_db};
  const net::TLineSection eta{p.z_eta, 90.0, p.loss_db};
  auto n = [&](const char *s) { return prefix + s; };
  g.tline(n("t1"), n("b"), n("a"), ring);
  g.tline(n("t2"), n("a"), n("x"), half);
  g.tline(n("t3"), n("xp"), n("d"), half);
  g.tline(n("t4"), n("d"), n("c"), ring);
  g.tline(n("t5"), n("c"), n("n1"), half);
  g.tline(n("t6"), n("n1"), n("y"), eta);
  g.tline(n("t7"), n("yp"), n("n2"), eta);
  g.tline(n("t8"), n("n2"), n("b"), half);
  add_crossover(g, prefix + "X.", {n("x"), n("y"), n("xp"), n("yp")}, p.crossover, p.loss_db);
}

inline NetworkGraph gen_pt_coupler(const CouplerParams &p)
{
  p.check();
  GraphBuilder g;
  g.port("Pa", "a").port("Pb", "b").port("Pc", "c").port("Pd", "d");
  add_pt_coupler(g, "", p);
  return g.build();
}

/// Classic 1.5 wavelength ring: b-a, a-d, d-c quarter-wave arcs and a
/// three-quarter-wave arc c-b made of three quarter-wave sections.
inline NetworkGraph gen_conventional_ratrace(double f0, double z0, double loss_db = 0.0)
{
  if (!(f0 > 0.0) || !(z0 > 0.0))
    throw invalid_argument("rat-race needs positive f0 and z0");
  const net::TLineSection ring{std::sqrt(2.0) * z0, 90.0, loss_db};
  GraphBuilder g;
  g.port("Pa", "a").port("Pb", "b").port("Pc", "c").port("Pd", "d");
  g.tline("t1", "b", "a", ring);
  g.tline("t2", "a", "d", ring);
  g.tline("t3", "d", "c", ring);
  g.tline("t4", "c", "n1", ring);
  g.tline("t5", "n1", "n2", ring);
  g.tline("t6", "n2", "b", ring);
  return g.build();
}

/// Four couplers plus an interconnecting crossover. Inputs P1..P4 take
/// elements A..D, outputs P5..P8 give the sum, azimuth, elevation and
/// diagonal difference channels.
inline NetworkGraph gen_comparator(const CouplerParams &p)
{
  p.check();
  GraphBuilder g;
  for (const char *h : {"H1.", "H2.", "H3.", "H4."})
    add_pt_coupler(g, h, p);
  // First stage: H1 pairs A with C, H2 pairs B with D.
  g.port("P1", "H1.d").port("P3", "H1.b").port("P2", "H2.d").port("P4", "H2.b");
  // Second stage.
  g.port("P5", "H3.a").port("P6", "H3.c").port("P7", "H4.a").port("P8", "H4.c");
  // H1.c -> H4.d and H2.a -> H3.b cross; the other two links are 360 degree lines.
  add_crossover(g, "XI.", {"H1.c", "H2.a", "H4.d", "H3.b"}, p.crossover, p.loss_db);
  const net::TLineSection link{p.z0, 360.0, p.loss_db};
  g.tline("L1", "H1.a", "H3.d", link);
  g.tline("L2", "H2.c", "H4.b", link);
  return g.build();
}

inline NetworkGraph gen_comparator(double f0, double z0, double z_eta, double loss_db)
{
  CouplerParams p;
  p.f0 = f0;
  p.z0 = z0;
  p.z_eta = z_eta;
  p.loss_db = loss_db;
  return gen_comparator(p);
}

// ------------------------------------------------------------------------
// Crossover symmetry modes

/// Reflection at port x for the four excitations, indexed [v][h] with 0 =
/// even and 1 = odd about the plane through side x-y (v) and side y'-x (h).
inline std::array<std::array<cplx, 2>, 2> crossover_mode_gammas(const CrossoverParams &p, double f, double f0,
                                                                double z0, double loss_db = 0.0)
{
  if (!(f > 0.0))
    throw invalid_argument("frequency must be positive");
  // An inner line lying on a symmetry plane is split lengthwise: each half
  // has twice the impedance.
  const net::TLineSection half_spoke{2.0 * p.z_y, p.theta_y, loss_db};
  const net::TLineSection side{p.z_x, p.theta_x, loss_db};
  const Eigen::Matrix2cd s_spoke = net::tline_s(half_spoke, f, f0, z0);
  const Eigen::Matrix2cd s_side = net::tline_s(side, f, f0, z0);
  std::array<std::array<cplx, 2>, 2> g{};
  for (int v = 0; v < 2; ++v)
    for (int h = 0; h < 2; ++h)
    {
      // The centre lies on both planes: shorted if either mode is odd.
      const cplx centre = (v == 1 || h == 1) ? -1.0 : 1.0;
      const cplx midpoint_load = net::reflect_through(s_spoke, centre);
      const cplx g_v = net::reflect_through(s_side, v == 1 ? cplx(-1.0) : midpoint_load);
      const cplx g_h = net::reflect_through(s_side, h == 1 ? cplx(-1.0) : midpoint_load);
      net::SMatrix node = net::junction_s(3);
      node = net::terminate(node, 1, g_h);
      node = net::terminate(node, 0, g_v);
      g[v][h] = node(0, 0);
    }
  return g;
}

/// Reflection coefficient of a mode input impedance against z0.
inline cplx mode_gamma(cplx z_mode, double z0) { return (z_mode - z0) / (z_mode + z0); }

/// Full crossover S-matrix from the four mode reflections, in the port
/// order x, x', y, y' of gen_crossover.
inline net::SMatrix fourmode_crossover_s(const CrossoverParams &p, double f, double f0, double z0,
                                         double loss_db = 0.0)
{
  p.check();
  const auto g = crossover_mode_gammas(p, f, f0, z0, loss_db);
  const cplx ee = g[0][0], eo = g[0][1], oe = g[1][0], oo = g[1][1];
  // Column for a wave entering x.
  std::array<cplx, 4> col{};
  col[port::x] = 0.25 * (ee + eo + oe + oo);
  col[port::y] = 0.25 * (ee + eo - oe - oo);  // mirror of x in the v plane
  col[port::yp] = 0.25 * (ee - eo + oe - oo); // mirror of x in the h plane
  col[port::xp] = 0.25 * (ee - eo - oe + oo);
  // Symmetry maps taking each port to x: identity, v, h and both mirrors.
  const std::array<std::array<std::size_t, 4>, 4> to_x{{
      {port::x, port::xp, port::y, port::yp},  // from x
      {port::xp, port::x, port::yp, port::y},  // from x' (both mirrors)
      {port::y, port::yp, port::x, port::xp},  // from y (v mirror)
      {port::yp, port::y, port::xp, port::x},  // from y' (h mirror)
  }};
  net::SMatrix s(4, 4);
  for (std::size_t q = 0; q < 4; ++q)
    for (std::size_t r = 0; r < 4; ++r)
      s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) = col[to_x[q][r]];
  return s;
}

/// Two-port loads the crossover presents at (x, y') when x' and y carry
/// the mirror-image excitation (even) or its negative (odd).
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> crossover_half_loads(const CrossoverParams &p, double f,
                                                                         double f0, double z0,
                                                                         double loss_db = 0.0)
{
  const net::SMatrix s = fourmode_crossover_s(p, f, f0, z0, loss_db);
  const std::array<Eigen::Index, 2> h{port::x, port::yp}, m{port::xp, port::y};
  Eigen::Matrix2cd even, odd;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
    {
      even(r, c) = s(h[r], h[c]) + s(h[r], m[c]);
      odd(r, c) = s(h[r], h[c]) - s(h[r], m[c]);
    }
  return {even, odd};
}

// ------------------------------------------------------------------------
// Coupler even/odd model

namespace detail
{
inline Eigen::Matrix2cd line_admittance(const net::Abcd &m)
{
  if (std::abs(m.b) < singular_tolerance)
    throw pole_at_frequency("line admittance is unbounded (B = 0)");
  Eigen::Matrix2cd y;
  y << m.d / m.b, -1.0 / m.b, -1.0 / m.b, m.a / m.b;
  return y;
}

// Admittance seen at the two branch inputs when two independent line
// branches end on a two-port load with reflection matrix r.
inline Eigen::Matrix2cd branch_admittance(const net::Abcd &b1, const net::Abcd &b2, const Eigen::Matrix2cd &r,
                                          double z0)
{
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd v = id + r;        // load voltage per incident wave
  const Eigen::Matrix2cd i = (id - r) / z0; // load current per incident wave
  const Eigen::Matrix2cd a = Eigen::Vector2cd(b1.a, b2.a).asDiagonal();
  const Eigen::Matrix2cd b = Eigen::Vector2cd(b1.b, b2.b).asDiagonal();
  const Eigen::Matrix2cd c = Eigen::Vector2cd(b1.c, b2.c).asDiagonal();
  const Eigen::Matrix2cd d = Eigen::Vector2cd(b1.d, b2.d).asDiagonal();
  const Eigen::Matrix2cd vin = a * v + b * i;
  const Eigen::Matrix2cd iin = c * v + d * i;
  if (!(std::abs(vin.determinant()) >= singular_tolerance * std::max(1.0, vin.norm() * vin.norm())))
    throw pole_at_frequency("branch admittance is unbounded");
  return iin * vin.inverse();
}

inline Eigen::Matrix2cd y_to_s(const Eigen::Matrix2cd &y, double z0)
{
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd den = id + z0 * y;
  if (std::abs(den.determinant()) < singular_tolerance)
    throw degenerate_network("admittance to S conversion is singular");
  return (id - z0 * y) * den.inverse();
}
} // namespace detail

/// Half-circuit S-matrices (ports a, b) of the port-transformation coupler
/// for the even and odd excitations of its a<->d, b<->c symmetry.
inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> evenodd_half_circuits(const CouplerParams &p, double f)
{
  p.check();
  if (!(f > 0.0))
    throw invalid_argument("frequency must be positive");
  const double z0 = p.z0, f0 = p.f0;
  const net::TLineSection ring{p.z1(), 90.0, p.loss_db};
  const net::TLineSection half{p.z1(), 45.0, p.loss_db};
  const net::TLineSection eta{p.z_eta, 90.0, p.loss_db};
  const Eigen::Matrix2cd y_ring = detail::line_admittance(net::tline_abcd(ring, f, f0));
  const net::Abcd to_x = net::tline_abcd(half, f, f0);                                   // a -> x
  const net::Abcd to_yp = net::tline_abcd(half, f, f0) * net::tline_abcd(eta, f, f0);    // b -> (2) -> y'
  const auto [r_even, r_odd] = crossover_half_loads(p.crossover, f, f0, z0, p.loss_db);
  const Eigen::Matrix2cd ye = y_ring + detail::branch_admittance(to_x, to_yp, r_even, z0);
  const Eigen::Matrix2cd yo = y_ring + detail::branch_admittance(to_x, to_yp, r_odd, z0);
  return {detail::y_to_s(ye, z0), detail::y_to_s(yo, z0)};
}

/// Coupler S-matrix (ports a, b, c, d) recombined from the half circuits.
inline net::SMatrix evenodd_ratrace_s(const CouplerParams &p, double f)
{
  const auto [e, o] = evenodd_half_circuits(p, f);
  // Half ports a, b map to their mirror images d, c.
  const std::array<Eigen::Index, 2> half{static_cast<Eigen::Index>(port::a), static_cast<Eigen::Index>(port::b)};
  const std::array<Eigen::Index, 2> mirror{static_cast<Eigen::Index>(port::d), static_cast<Eigen::Index>(port::c)};
  net::SMatrix s(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
    {
      const cplx same = 0.5 * (e(i, k) + o(i, k));
      const cplx cross = 0.5 * (e(i, k) - o(i, k));
      s(half[i], half[k]) = same;
      s(mirror[i], mirror[k]) = same;
      s(mirror[i], half[k]) = cross;
      s(half[i], mirror[k]) = cross;
    }
  return s;
}

/// Even- and odd-mode ABCD (port a to port b) of the half circuit at the
/// design frequency: a quarter-wave TL1 between shunt admittances. In the
/// even mode the branch at a acts as an open 45 degree stub (+j/Z1) and the
/// branch at b as a shorted one (-j/Z1); the odd mode swaps them.
inline std::pair<net::Abcd, net::Abcd> evenodd_abcd_at_f0(double z0)
{
  const double z1 = std::sqrt(2.0) * z0;
  const net::Abcd line = net::tline_abcd({z1, 90.0, 0.0}, 1.0, 1.0);
  const cplx y = j1 / z1;
  return {net::shunt_abcd(y) * line * net::shunt_abcd(-y), net::shunt_abcd(-y) * line * net::shunt_abcd(y)};
}

// ------------------------------------------------------------------------
// Crossover conditions

/// Printed design-condition expressions, scaled so they stay finite at
/// theta_x = 90 degrees: the first divided by tan^2, the second with
/// numerator and denominator multiplied by cos^3. NaN when the second has
/// no real value.
struct ConditionResiduals
{
  double matching = 0.0;
  double isolation = 0.0;
};

inline ConditionResiduals printed_condition_residuals(const CrossoverParams &p, double z0)
{
  const double t = deg2rad(p.theta_x);
  const double s = std::sin(t), c = std::cos(t);
  ConditionResiduals r;
  r.matching = (s * s + 2.0 * (c * c - s * s) * (z0 / p.z_x)) / (s * s);
  const double radicand = 2.0 * s * s * s * s - 2.0 * s * s * c * c;
  r.isolation = radicand < 0.0 ? std::nan("") : 2.0 * c * std::sqrt(radicand) / (s * s * s - 3.0 * s * c * c);
  return r;
}

struct CrossoverVerdict
{
  double thru_db = 0.0;         // worst of |S x'x| and |S y'y|
  double leakage_db = 0.0;      // worst reflection or coupling to a neighbour
  bool pass = false;
};

/// Checks a crossover with the full network model at f0.
inline CrossoverVerdict verify_crossover(const CrossoverParams &p, double f0, double z0, double min_thru_db = -0.01,
                                         double max_leak_db = -40.0)
{
  const net::SMatrix s = sweep::at(gen_crossover(p, f0, z0), f0, f0, z0);
  CrossoverVerdict v;
  v.thru_db = std::min(mag_db(s(port::xp, port::x)), mag_db(s(port::yp, port::y)));
  double leak = 0.0;
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
    {
      const bool thru = (r == port::xp && c == port::x) || (r == port::x && c == port::xp) ||
                        (r == port::yp && c == port::y) || (r == port::y && c == port::yp);
      if (!thru)
        leak = std::max(leak, std::abs(s(r, c)));
    }
  v.leakage_db = leak > 0.0 ? mag_db(leak) : -400.0;
  v.pass = v.thru_db >= min_thru_db && v.leakage_db <= max_leak_db;
  return v;
}

struct CrossoverCandidate
{
  CrossoverParams params;
  CrossoverVerdict verdict;
};

struct CrossoverScan
{
  double theta_lo = 5.0, theta_hi = 175.0, theta_step = 1.0;
  double z_lo = 20.0, z_hi = 150.0, z_step = 1.0;
  double min_thru_db = -0.01;
  double max_leak_db = -40.0;
};

/// With theta_y = 90 degrees and Zy = z0, scans (theta_x, Zx) for points
/// where the four-mode model predicts a matched, isolated crossover. Each
/// Zx row contributes its best theta_x, refined with Brent's method and
/// accepted only if the full network model passes. Results are ordered by Zx.
inline std::vector<CrossoverCandidate> solve_crossover_conditions(double z0, const CrossoverScan &scan = {})
{
  if (!(z0 > 0.0))
    throw invalid_argument("z0 must be positive");
  const double f0 = 1e9; // only electrical lengths at f0 matter
  auto leak_db = [&](double zx, double tx) {
    CrossoverParams p{zx, z0, tx, 90.0};
    const net::SMatrix s = fourmode_crossover_s(p, f0, f0, z0);
    const double worst = std::max({std::abs(s(port::x, port::x)), std::abs(s(port::y, port::x)),
                                   std::abs(s(port::yp, port::x))});
    return 20.0 * std::log10(std::max(worst, 1e-20));
  };

  const auto n_theta = static_cast<std::size_t>(std::floor((scan.theta_hi - scan.theta_lo) / scan.theta_step + 1e-9)) + 1;
  const auto n_z = static_cast<std::size_t>(std::floor((scan.z_hi - scan.z_lo) / scan.z_step + 1e-9)) + 1;
  std::vector<std::optional<CrossoverCandidate>> rows(n_z);
  parallel_for(n_z, [&](std::size_t iz) {
    const double zx = scan.z_lo + scan.z_step * static_cast<double>(iz);
    std::size_t best = 0;
    double best_val = 1e300;
    for (std::size_t it = 0; it < n_theta; ++it)
    {
      const double v = leak_db(zx, scan.theta_lo + scan.theta_step * static_cast<double>(it));
      if (v < best_val)
      {
        best_val = v;
        best = it;
      }
    }
    const double t0 = scan.theta_lo + scan.theta_step * static_cast<double>(best);
    const double lo = std::max(scan.theta_lo, t0 - scan.theta_step);
    const double hi = std::min(scan.theta_hi, t0 + scan.theta_step);
    auto refined = boost::math::tools::brent_find_minima([&](double t) { return leak_db(zx, t); }, lo, hi, 40);
    double theta = refined.second < best_val ? refined.first : t0;
    CrossoverParams p{zx, z0, theta, 90.0};
    const auto verdict = verify_crossover(p, f0, z0, scan.min_thru_db, scan.max_leak_db);
    if (verdict.pass)
      rows[iz] = CrossoverCandidate{p, verdict};
  });
  std::vector<CrossoverCandidate> out;
  for (auto &r : rows)
    if (r)
      out.push_back(*r);
  if (out.empty())
    throw no_solution_found("no crossover meets the verification tolerance on the scan grid");
  return out;
}

/// Thru phase x -> x' at f0, unwrapped continuously from a near-zero
/// frequency where the phase starts at zero.
inline double accumulated_thru_phase_deg(const CrossoverParams &p, double f0, double z0, std::size_t points = 2001)
{
  std::vector<double> freqs(points);
  for (std::size_t i = 0; i < points; ++i)
    freqs[i] = f0 * (static_cast<double>(i) + 1.0) / static_cast<double>(points);
  freqs.back() = f0;
  const auto s = sweep::run(gen_crossover(p, f0, z0), freqs, f0, z0);
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < points; ++i)
  {
    const double ph = phase_deg(s.matrices[i](port::xp, port::x));
    acc += i == 0 ? ph : wrap_deg(ph - prev);
    prev = ph;
  }
  return acc;
}

} // namespace mlab::components
