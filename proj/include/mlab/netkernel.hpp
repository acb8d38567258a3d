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

// Ideal TEM transmission-line network kernel: element matrices, ABCD and
// scattering conversions, and multiport interconnection at a shared real
// reference impedance.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace mlab::net
{

// Nepers per dB.
inline constexpr double neper_per_db = 1.0 / 8.685889638065035;

/// A uniform TEM line section. Electrical length is given at the design
/// frequency f0 and scales linearly with frequency. loss_db is the
/// attenuation in dB per 360 degrees of electrical length.
struct TLineSection
{
  double z_char = 50.0;
  double theta0_deg = 90.0;
  double loss_db = 0.0;

  void check() const
  {
    if (!(z_char > 0.0) || !std::isfinite(z_char))
      throw invalid_argument("line impedance must be positive");
    if (!(theta0_deg > 0.0) || !std::isfinite(theta0_deg))
      throw invalid_argument("line electrical length must be positive");
    if (!(loss_db >= 0.0) || !std::isfinite(loss_db))
      throw invalid_argument("line loss must be non-negative");
  }

  friend bool operator==(const TLineSection &, const TLineSection &) = default;
};

enum class Termination
{
  open,
  short_circuit
};

struct Abcd
{
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static Abcd identity() { return {}; }
  cplx det() const { return a * d - b * c; }
};

inline Abcd cascade(const Abcd &left, const Abcd &right)
{
  return {left.a * right.a + left.b * right.c, left.a * right.b + left.b * right.d,
          left.c * right.a + left.d * right.c, left.c * right.b + left.d * right.d};
}

inline Abcd operator*(const Abcd &left, const Abcd &right) { return cascade(left, right); }

struct FrequencyGrid
{
  double f0 = 2e9;
  double f_start = 1e9;
  double f_stop = 3e9;
  std::size_t n_points = 201;

  void check() const
  {
    if (!(f0 > 0.0))
      throw invalid_argument("design frequency must be positive");
    if (!(f_start > 0.0) || !(f_start < f_stop))
      throw invalid_argument("frequency grid needs 0 < f_start < f_stop");
    if (n_points < 2)
      throw invalid_argument("frequency grid needs at least two points");
  }

  std::vector<double> frequencies() const
  {
    check();
    std::vector<double> f(n_points);
    const double step = (f_stop - f_start) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i)
      f[i] = f_start + step * static_cast<double>(i);
    f.back() = f_stop;
    return f;
  }
};

using SMatrix = Eigen::MatrixXcd;

/// N-port scattering parameters sampled over ascending frequencies.
struct SweepSParams
{
  std::size_t ports = 0;
  double z_ref = 50.0;
  std::vector<double> freqs;
  std::vector<SMatrix> matrices;

  std::size_t size() const { return freqs.size(); }

  // Index of the sample at f (relative tolerance 1e-9), or -1.
  std::ptrdiff_t index_of(double f) const
  {
    for (std::size_t i = 0; i < freqs.size(); ++i)
      if (std::abs(freqs[i] - f) <= 1e-9 * std::max(1.0, std::abs(f)))
        return static_cast<std::ptrdiff_t>(i);
    return -1;
  }

  const SMatrix &at(double f) const
  {
    const auto i = index_of(f);
    if (i < 0)
      throw frequency_not_in_grid("frequency " + std::to_string(f) + " Hz is not a sample of the sweep");
    return matrices[static_cast<std::size_t>(i)];
  }
};

// ------------------------------------------------------------------------
// Elements

/// Complex electrical length gamma*l = alpha + j*theta at frequency f.
inline cplx electrical_length(const TLineSection &s, double f, double f0)
{
  const double theta_deg = s.theta0_deg * f / f0;
  const double alpha = s.loss_db * (theta_deg / 360.0) * neper_per_db;
  return {alpha, deg2rad(theta_deg)};
}

inline Abcd tline_abcd(const TLineSection &s, double f, double f0)
{
  const cplx gl = electrical_length(s, f, f0);
  if (s.loss_db == 0.0)
  {
    const double th = gl.imag();
    const double c = std::cos(th), sn = std::sin(th);
    return {c, j1 * s.z_char * sn, j1 * sn / s.z_char, c};
  }
  const cplx ch = std::cosh(gl), sh = std::sinh(gl);
  return {ch, s.z_char * sh, sh / s.z_char, ch};
}

inline Abcd shunt_abcd(cplx y) { return {1.0, 0.0, y, 1.0}; }
inline Abcd series_abcd(cplx z) { return {1.0, z, 0.0, 1.0}; }

/// Input admittance of an open- or short-terminated stub. Throws
/// pole_at_frequency when the admittance is unbounded.
inline cplx stub_admittance(const TLineSection &stub, Termination term, double f, double f0)
{
  const cplx gl = electrical_length(stub, f, f0);
  cplx num, den;
  if (stub.loss_db == 0.0)
  {
    const double th = gl.imag();
    // Y = j tan(th)/Z for open, -j cot(th)/Z for short.
    if (term == Termination::open)
    {
      num = j1 * std::sin(th);
      den = std::cos(th);
    }
    else
    {
      num = -j1 * std::cos(th);
      den = std::sin(th);
    }
  }
  else
  {
    if (term == Termination::open)
    {
      num = std::sinh(gl);
      den = std::cosh(gl);
    }
    else
    {
      num = std::cosh(gl);
      den = std::sinh(gl);
    }
  }
  if (std::abs(den) < singular_tolerance)
    throw pole_at_frequency(std::string(term == Termination::open ? "open" : "short") +
                            " stub admittance is unbounded at theta=" +
                            std::to_string(stub.theta0_deg * f / f0) + " deg",
                            f);
  return num / (den * stub.z_char);
}

inline Abcd shunt_stub_abcd(const TLineSection &stub, Termination term, double f, double f0)
{
  return shunt_abcd(stub_admittance(stub, term, f, f0));
}

/// Two-port scattering matrix of an ABCD block at real reference impedance.
inline Eigen::Matrix2cd abcd_to_s(const Abcd &m, double z_ref)
{
  if (!(z_ref > 0.0))
    throw invalid_argument("reference impedance must be positive");
  const cplx den = m.a + m.b / z_ref + m.c * z_ref + m.d;
  if (std::abs(den) < singular_tolerance)
    throw degenerate_network("ABCD to S conversion denominator vanishes");
  Eigen::Matrix2cd s;
  s(0, 0) = (m.a + m.b / z_ref - m.c * z_ref - m.d) / den;
  s(0, 1) = 2.0 * m.det() / den;
  s(1, 0) = 2.0 / den;
  s(1, 1) = (-m.a + m.b / z_ref - m.c * z_ref + m.d) / den;
  return s;
}

inline Abcd s_to_abcd(const Eigen::Matrix2cd &s, double z_ref)
{
  const cplx s11 = s(0, 0), s12 = s(0, 1), s21 = s(1, 0), s22 = s(1, 1);
  if (std::abs(s21) < singular_tolerance)
    throw degenerate_network("S to ABCD conversion needs nonzero S21");
  const cplx t = 2.0 * s21;
  return {((1.0 + s11) * (1.0 - s22) + s12 * s21) / t,
          z_ref * ((1.0 + s11) * (1.0 + s22) - s12 * s21) / t,
          ((1.0 - s11) * (1.0 - s22) - s12 * s21) / (t * z_ref),
          ((1.0 - s11) * (1.0 + s22) + s12 * s21) / t};
}

inline SMatrix tline_s(const TLineSection &s, double f, double f0, double z_ref)
{
  return abcd_to_s(tline_abcd(s, f, f0), z_ref);
}

/// Input reflection of a stub, computed from the line's S-matrix with an
/// ideal termination. Unlike the admittance form this has no poles.
inline cplx stub_reflection(const TLineSection &stub, Termination term, double f, double f0, double z_ref)
{
  const Eigen::Matrix2cd s = abcd_to_s(tline_abcd(stub, f, f0), z_ref);
  const double gl = term == Termination::open ? 1.0 : -1.0;
  return s(0, 0) + s(0, 1) * s(1, 0) * gl / (1.0 - s(1, 1) * gl);
}

/// Ideal k-way node junction between ports of equal reference impedance.
inline SMatrix junction_s(std::size_t k)
{
  SMatrix s = SMatrix::Constant(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k),
                                cplx(2.0 / static_cast<double>(k)));
  s -= SMatrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  return s;
}

/// Reduces port p of s by terminating it in reflection gamma.
inline SMatrix terminate(const SMatrix &s, Eigen::Index p, cplx gamma)
{
  const Eigen::Index n = s.rows();
  const cplx den = 1.0 - s(p, p) * gamma;
  if (std::abs(den) < singular_tolerance)
    throw singular_junction("terminated port is resonant");
  SMatrix out(n - 1, n - 1);
  for (Eigen::Index r = 0, rr = 0; r < n; ++r)
  {
    if (r == p)
      continue;
    for (Eigen::Index c = 0, cc = 0; c < n; ++c)
    {
      if (c == p)
        continue;
      out(rr, cc) = s(r, c) + s(r, p) * gamma * s(p, c) / den;
      ++cc;
    }
    ++rr;
  }
  return out;
}

/// Input reflection of a two-port element terminated in gamma_l at port 2.
inline cplx reflect_through(const Eigen::Matrix2cd &s, cplx gamma_l)
{
  const cplx den = 1.0 - s(1, 1) * gamma_l;
  if (std::abs(den) < singular_tolerance)
    throw singular_junction("terminated two-port is resonant");
  return s(0, 0) + s(0, 1) * s(1, 0) * gamma_l / den;
}

// ------------------------------------------------------------------------
// Interconnection

using PortPair = std::pair<std::size_t, std::size_t>;

/// Joins pairs of ports of one network to each other. The remaining ports
/// keep their relative order. Throws singular_junction when the internal
/// system (I - P S_ii) has no solution.
inline SMatrix interconnect(const SMatrix &s, std::span<const PortPair> pairs)
{
  const auto n = static_cast<std::size_t>(s.rows());
  std::vector<int> role(n, -1); // partner slot in the internal list, or -1 for external
  std::vector<std::size_t> internal;
  internal.reserve(2 * pairs.size());
  for (const auto &[p, q] : pairs)
  {
    if (p >= n || q >= n)
      throw port_out_of_range("port index out of range in interconnection");
    if (p == q || role[p] != -1 || role[q] != -1)
      throw invalid_argument("interconnected ports must be distinct");
    role[p] = static_cast<int>(internal.size());
    internal.push_back(p);
    role[q] = static_cast<int>(internal.size());
    internal.push_back(q);
  }
  std::vector<std::size_t> external;
  for (std::size_t i = 0; i < n; ++i)
    if (role[i] == -1)
      external.push_back(i);

  const auto ne = static_cast<Eigen::Index>(external.size());
  const auto ni = static_cast<Eigen::Index>(internal.size());
  if (ni == 0)
    return s;

  // Row r of P*S swaps to the row of r's partner (pairs are stored adjacently).
  auto partner = [](Eigen::Index r) { return r ^ 1; };

  SMatrix m(ni, ni);
  SMatrix rhs(ni, ne);
  for (Eigen::Index r = 0; r < ni; ++r)
  {
    const auto pr = internal[static_cast<std::size_t>(partner(r))];
    for (Eigen::Index c = 0; c < ni; ++c)
      m(r, c) = (r == c ? 1.0 : 0.0) - s(static_cast<Eigen::Index>(pr), static_cast<Eigen::Index>(internal[c]));
    for (Eigen::Index c = 0; c < ne; ++c)
      rhs(r, c) = s(static_cast<Eigen::Index>(pr), static_cast<Eigen::Index>(external[c]));
  }

  SMatrix x;
  Eigen::PartialPivLU<SMatrix> lu(m);
  if (lu.rcond() >= 1e-12)
    x = lu.solve(rhs);
  else
  {
    // A lossless sub-network can hold a resonance that no port excites; the
    // system is then singular but consistent and the trapped mode does not
    // reach the external ports. Take the minimum-norm solution and reject
    // only a genuinely inconsistent system.
    Eigen::JacobiSVD<SMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    x = svd.solve(rhs);
    const double scale = std::max(1.0, rhs.norm());
    if (!((m * x - rhs).norm() <= 1e-8 * scale) || !x.allFinite())
      throw singular_junction("internal connection system is not invertible");
  }

  SMatrix out(ne, ne);
  for (Eigen::Index r = 0; r < ne; ++r)
    for (Eigen::Index c = 0; c < ne; ++c)
    {
      cplx acc = s(static_cast<Eigen::Index>(external[r]), static_cast<Eigen::Index>(external[c]));
      for (Eigen::Index k = 0; k < ni; ++k)
        acc += s(static_cast<Eigen::Index>(external[r]), static_cast<Eigen::Index>(internal[k])) * x(k, c);
      out(r, c) = acc;
    }
  return out;
}

inline SMatrix block_diagonal(const SMatrix &a, const SMatrix &b)
{
  SMatrix s = SMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  s.topLeftCorner(a.rows(), a.cols()) = a;
  s.bottomRightCorner(b.rows(), b.cols()) = b;
  return s;
}

/// Connects port joins.first of a to port joins.second of b. Remaining
/// ports are numbered a's ascending, then b's ascending.
inline SMatrix connect(const SMatrix &a, const SMatrix &b, std::span<const PortPair> joins)
{
  const auto na = static_cast<std::size_t>(a.rows());
  const auto nb = static_cast<std::size_t>(b.rows());
  std::vector<PortPair> pairs;
  pairs.reserve(joins.size());
  for (const auto &[pa, pb] : joins)
  {
    if (pa >= na || pb >= nb)
      throw port_out_of_range("joined port index out of range");
    pairs.emplace_back(pa, na + pb);
  }
  if (2 * joins.size() >= na + nb)
    throw invalid_argument("connection leaves no external port");
  return interconnect(block_diagonal(a, b), pairs);
}

inline SweepSParams connect(const SweepSParams &a, const SweepSParams &b, std::span<const PortPair> joins)
{
  if (a.freqs != b.freqs)
    throw grid_mismatch("connected sweeps have different frequency grids");
  if (a.z_ref != b.z_ref)
    throw grid_mismatch("connected sweeps have different reference impedances");
  SweepSParams out;
  out.z_ref = a.z_ref;
  out.freqs = a.freqs;
  out.matrices.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    try
    {
      out.matrices.push_back(connect(a.matrices[i], b.matrices[i], joins));
    }
    catch (const singular_junction &e)
    {
      throw singular_junction(e.reason, a.freqs[i], static_cast<std::ptrdiff_t>(i));
    }
  }
  out.ports = a.ports + b.ports - 2 * joins.size();
  return out;
}

/// Sweep of a single two-port ABCD-described element; handy for chains.
template <typename AbcdAt>
SweepSParams two_port_sweep(const std::vector<double> &freqs, double z_ref, AbcdAt &&abcd_at)
{
  SweepSParams out;
  out.ports = 2;
  out.z_ref = z_ref;
  out.freqs = freqs;
  out.matrices.reserve(freqs.size());
  for (double f : freqs)
    out.matrices.push_back(abcd_to_s(abcd_at(f), z_ref));
  return out;
}

} // namespace mlab::net
