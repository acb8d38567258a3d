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

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mlab
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;
inline constexpr cplx j1{0.0, 1.0};

// Denominators smaller than this are treated as singular everywhere in the library.
inline constexpr double singular_tolerance = 1e-15;

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

inline double mag_db(cplx v) { return 20.0 * std::log10(std::abs(v)); }
inline double db_to_mag(double db) { return std::pow(10.0, db / 20.0); }
inline double phase_deg(cplx v) { return rad2deg(std::arg(v)); }

// Wrap an angle in degrees to (-180, 180].
inline double wrap_deg(double deg)
{
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0)
    w += 360.0;
  else if (w > 180.0)
    w -= 360.0;
  return w;
}

inline double wavelength(double f_hz) { return speed_of_light / f_hz; }

// ------------------------------------------------------------------------
// Errors. Every failure the library reports is an mlab::error subclass, so
// callers can catch the family or an individual kind.

class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Raised for evaluation failures tied to one sample of a frequency grid.
class frequency_error : public error
{
public:
  frequency_error(const std::string &what, double f_hz, std::ptrdiff_t index)
      : error(what + " at f=" + std::to_string(f_hz) + " Hz (index " + std::to_string(index) + ")"),
        frequency_hz(f_hz), frequency_index(index)
  {
  }
  double frequency_hz;
  std::ptrdiff_t frequency_index;
};

class pole_at_frequency : public frequency_error
{
public:
  pole_at_frequency(std::string why, double f_hz = 0.0, std::ptrdiff_t index = -1)
      : frequency_error("pole at frequency: " + why, f_hz, index), reason(std::move(why))
  {
  }
  std::string reason;
};

class singular_junction : public frequency_error
{
public:
  singular_junction(std::string why, double f_hz = 0.0, std::ptrdiff_t index = -1)
      : frequency_error("singular junction: " + why, f_hz, index), reason(std::move(why))
  {
  }
  std::string reason;
};

class degenerate_network : public error
{
public:
  using error::error;
};

class grid_mismatch : public error
{
public:
  using error::error;
};

class port_out_of_range : public error
{
public:
  using error::error;
};

class frequency_not_in_grid : public error
{
public:
  using error::error;
};

class unsupported_port_count : public error
{
public:
  using error::error;
};

class no_solution_found : public error
{
public:
  using error::error;
};

class no_main_lobe : public error
{
public:
  using error::error;
};

class sum_null : public error
{
public:
  using error::error;
};

class out_of_unambiguous_range : public error
{
public:
  using error::error;
};

class empty_batch : public error
{
public:
  using error::error;
};

class invalid_argument : public error
{
public:
  using error::error;
};

class parse_error : public error
{
public:
  using error::error;
};

} // namespace mlab
