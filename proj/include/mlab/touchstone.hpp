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

// Touchstone (version 1) reader and writer for 1, 2, 3, 4 and 8 ports.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netkernel.hpp"

namespace mlab::touchstone
{

inline bool supported_port_count(std::size_t n) { return n == 1 || n == 2 || n == 3 || n == 4 || n == 8; }

namespace detail
{
inline void put(std::string &out, double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  out += buf;
}

inline void put_pair(std::string &out, cplx v)
{
  out += ' ';
  put(out, v.real());
  out += ' ';
  put(out, v.imag());
}

inline std::string lower(std::string s)
{
  for (auto &c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}
} // namespace detail

/// Writes S-parameters as real/imaginary pairs with 9 significant digits.
/// Two-port data uses the S11 S21 S12 S22 order; larger networks are
/// written row by row with at most four pairs per line.
inline std::string write(const net::SweepSParams &s)
{
  const std::size_t n = s.ports;
  if (!supported_port_count(n))
    throw unsupported_port_count("touchstone output supports 1, 2, 3, 4 or 8 ports, got " + std::to_string(n));
  char zbuf[32];
  std::snprintf(zbuf, sizeof zbuf, "%g", s.z_ref);
  std::string out = "# Hz S RI R ";
  out += zbuf;
  out += '\n';
  for (std::size_t k = 0; k < s.size(); ++k)
  {
    const auto &m = s.matrices[k];
    detail::put(out, s.freqs[k]);
    if (n <= 2)
    {
      if (n == 1)
        detail::put_pair(out, m(0, 0));
      else
        for (auto [r, c] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}})
          detail::put_pair(out, m(r, c));
      out += '\n';
      continue;
    }
    for (std::size_t r = 0; r < n; ++r)
    {
      for (std::size_t c = 0; c < n; ++c)
      {
        if (c > 0 && c % 4 == 0)
          out += "\n ";
        detail::put_pair(out, m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      }
      out += '\n';
      if (r + 1 < n)
        out += ' ';
    }
  }
  return out;
}

inline void write_file(const net::SweepSParams &s, const std::string &path)
{
  const std::string text = write(s);
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw error("cannot open " + path + " for writing");
  f << text;
  if (!f)
    throw error("failed writing " + path);
}

/// Parses Touchstone text holding an n-port network. Accepts RI, MA and DB
/// data, any of Hz/kHz/MHz/GHz, and '!' comments.
inline net::SweepSParams read(const std::string &text, std::size_t n)
{
  if (!supported_port_count(n))
    throw unsupported_port_count("touchstone input supports 1, 2, 3, 4 or 8 ports, got " + std::to_string(n));
  double unit = 1e9;
  std::string fmt = "ma";
  double z_ref = 50.0;
  bool have_option = false;
  std::vector<double> values;

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (const auto bang = line.find('!'); bang != std::string::npos)
      line.erase(bang);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      continue;
    if (tok[0] == '#')
    {
      if (have_option)
        continue; // only the first option line counts
      have_option = true;
      std::vector<std::string> opts;
      if (tok.size() > 1)
        opts.push_back(detail::lower(tok.substr(1)));
      while (ls >> tok)
        opts.push_back(detail::lower(tok));
      for (std::size_t i = 0; i < opts.size(); ++i)
      {
        const auto &o = opts[i];
        if (o == "hz")
          unit = 1.0;
        else if (o == "khz")
          unit = 1e3;
        else if (o == "mhz")
          unit = 1e6;
        else if (o == "ghz")
          unit = 1e9;
        else if (o == "ri" || o == "ma" || o == "db")
          fmt = o;
        else if (o == "s")
          ;
        else if (o == "y" || o == "z" || o == "h" || o == "g")
          throw parse_error("only S-parameter touchstone data is supported");
        else if (o == "r")
        {
          if (i + 1 >= opts.size())
            throw parse_error("touchstone option line: R without a value");
          try
          {
            z_ref = std::stod(opts[++i]);
          }
          catch (const std::exception &)
          {
            throw parse_error("touchstone option line: bad reference impedance");
          }
        }
        else
          throw parse_error("touchstone option line: unknown token '" + o + "'");
      }
      continue;
    }
    do
    {
      try
      {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size())
          throw std::invalid_argument(tok);
      }
      catch (const std::exception &)
      {
        throw parse_error("touchstone line " + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    } while (ls >> tok);
  }

  const std::size_t per_record = 1 + 2 * n * n;
  if (values.size() % per_record != 0)
    throw parse_error("touchstone data does not divide into " + std::to_string(n) + "-port records");

  auto to_complex = [&](double x, double y) -> cplx {
    if (fmt == "ri")
      return {x, y};
    const double mag = fmt == "db" ? db_to_mag(x) : x;
    return std::polar(mag, deg2rad(y));
  };

  net::SweepSParams s;
  s.ports = n;
  s.z_ref = z_ref;
  const auto ni = static_cast<Eigen::Index>(n);
  for (std::size_t off = 0; off < values.size(); off += per_record)
  {
    const double f = values[off] * unit;
    if (!s.freqs.empty() && !(f > s.freqs.back()))
      throw parse_error("touchstone frequencies must be strictly ascending");
    s.freqs.push_back(f);
    net::SMatrix m(ni, ni);
    const double *v = &values[off + 1];
    for (std::size_t k = 0; k < n * n; ++k)
    {
      Eigen::Index r = static_cast<Eigen::Index>(k / n), c = static_cast<Eigen::Index>(k % n);
      if (n == 2)
        std::swap(r, c); // two-port records are column-major
      m(r, c) = to_complex(v[2 * k], v[2 * k + 1]);
    }
    s.matrices.push_back(std::move(m));
  }
  return s;
}

/// Reads a .sNp file; the port count comes from the extension.
inline net::SweepSParams read_file(const std::string &path)
{
  const auto dot = path.rfind('.');
  std::size_t n = 0;
  if (dot != std::string::npos)
  {
    const std::string ext = detail::lower(path.substr(dot + 1));
    if (ext.size() >= 3 && ext.front() == 's' && ext.back() == 'p')
    {
      try
      {
        n = std::stoul(ext.substr(1, ext.size() - 2));
      }
      catch (const std::exception &)
      {
        n = 0;
      }
    }
  }
  if (n == 0)
    throw parse_error("cannot infer port count from file name " + path);
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw error("cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return read(buf.str(), n);
}

} // namespace mlab::touchstone
