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

// Figures of merit and the fractional-bandwidth search.

#include <gtest/gtest.h>

#include <mlab/metrics.hpp>
#include <mlab/sweep.hpp>

using namespace mlab;
using namespace mlab::components;

namespace
{
constexpr double f0 = 2e9;

net::SweepSParams matched_thru(const std::vector<double> &freqs)
{
  net::SweepSParams s;
  s.ports = 2;
  s.freqs = freqs;
  for (double f : freqs)
    s.matrices.push_back(net::tline_s({50.0, 90.0, 0.0}, f, f0, 50.0));
  return s;
}

std::vector<double> grid(double lo, double hi, std::size_t n)
{
  return net::FrequencyGrid{f0, lo, hi, n}.frequencies();
}
} // namespace

TEST(Metrics, MatchedThruPassesEverywhere)
{
  Criteria crit;
  crit.min_return_loss_db = 20.0;
  const auto r = metrics(matched_thru(grid(1e9, 3e9, 201)), thru_layout(), crit, f0);
  EXPECT_DOUBLE_EQ(r.fractional_bandwidth_pct, 100.0);
  EXPECT_DOUBLE_EQ(r.f_lo, 1e9);
  EXPECT_DOUBLE_EQ(r.f_hi, 3e9);
  for (const auto &v : r.verdicts)
    EXPECT_TRUE(v.pass());
}

TEST(Metrics, BandContainsF0)
{
  const auto s = sweep::run(gen_pt_coupler({}), grid(1e9, 3e9, 401), f0);
  Criteria crit;
  crit.min_return_loss_db = 10.0;
  crit.min_isolation_db = 10.0;
  const auto r = metrics(s, coupler_layout(), crit, f0);
  EXPECT_LE(r.f_lo, f0);
  EXPECT_GE(r.f_hi, f0);
  EXPECT_GT(r.fractional_bandwidth_pct, 0.0);
  EXPECT_LT(r.fractional_bandwidth_pct, 100.0);
  // The interval is contiguous and its neighbours fail.
  const auto lo = static_cast<std::size_t>(s.index_of(r.f_lo));
  const auto hi = static_cast<std::size_t>(s.index_of(r.f_hi));
  for (std::size_t i = lo; i <= hi; ++i)
    EXPECT_TRUE(r.verdicts[i].pass());
  if (lo > 0)
    EXPECT_FALSE(r.verdicts[lo - 1].pass());
  if (hi + 1 < r.verdicts.size())
    EXPECT_FALSE(r.verdicts[hi + 1].pass());
}

TEST(Metrics, FailingF0GivesZero)
{
  auto s = matched_thru(grid(1e9, 3e9, 21));
  const auto i0 = static_cast<std::size_t>(s.index_of(f0));
  s.matrices[i0](0, 0) = 0.9;
  Criteria crit;
  crit.min_return_loss_db = 10.0;
  const auto r = metrics(s, thru_layout(), crit, f0);
  EXPECT_EQ(r.fractional_bandwidth_pct, 0.0);
  EXPECT_FALSE(r.verdicts[i0].pass());
}

TEST(Metrics, F0MustBeOnTheGrid)
{
  EXPECT_THROW(metrics(matched_thru(grid(1e9, 3e9, 4)), thru_layout(), {}, f0), frequency_not_in_grid);
}

TEST(Metrics, ImbalanceMeasuredAgainstExpectedPhase)
{
  net::SMatrix m = net::SMatrix::Zero(4, 4);
  using namespace port;
  m(b, a) = m(a, b) = cplx(0.0, -1.0) / std::sqrt(2.0);
  m(d, a) = m(a, d) = cplx(0.0, -1.0) / std::sqrt(2.0) * db_to_mag(-0.3);
  m(b, c) = m(c, b) = cplx(0.0, -1.0) / std::sqrt(2.0);
  m(d, c) = m(c, d) = std::polar(1.0 / std::sqrt(2.0), deg2rad(90.0 - 7.0));
  const auto v = judge(m, f0, coupler_layout(), Criteria{});
  EXPECT_NEAR(v.worst_amplitude_imbalance_db, 0.3, 1e-9);
  EXPECT_NEAR(v.worst_phase_imbalance_deg, 7.0, 1e-9);
  EXPECT_TRUE(v.pass());
}

TEST(Metrics, ComparatorLayoutAtF0)
{
  const auto s = sweep::run(gen_comparator(f0, 50.0, 50.0, 0.0), std::vector<double>{f0}, f0);
  Criteria crit;
  crit.min_return_loss_db = 10.0;
  crit.min_isolation_db = 10.0;
  const auto r = metrics(s, comparator_layout(), crit, f0);
  EXPECT_TRUE(r.verdicts[0].pass());
  EXPECT_LT(r.verdicts[0].worst_amplitude_imbalance_db, 1e-6);
  EXPECT_LT(r.verdicts[0].worst_phase_imbalance_deg, 1e-6);
  for (const auto &t : r.transmissions)
    EXPECT_NEAR(t.mag_db, -6.0206, 1e-3);
}
