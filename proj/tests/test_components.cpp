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

// Generators, analytic oracles and the crossover design scan.

#include <gtest/gtest.h>

#include <mlab/components.hpp>
#include <mlab/sweep.hpp>

using namespace mlab;
using namespace mlab::components;

namespace
{
constexpr double f0 = 2e9;
double max_abs(const net::SMatrix &m) { return m.cwiseAbs().maxCoeff(); }
} // namespace

TEST(PtCoupler, IdealResponseAtF0)
{
  const auto s = sweep::at(gen_pt_coupler({}), f0, f0);
  using namespace port;
  EXPECT_NEAR(mag_db(s(b, a)), -3.0103, 0.05);
  EXPECT_NEAR(mag_db(s(d, a)), -3.0103, 0.05);
  EXPECT_NEAR(mag_db(s(b, c)), -3.0103, 0.05);
  EXPECT_NEAR(mag_db(s(d, c)), -3.0103, 0.05);
  for (std::size_t p = 0; p < 4; ++p)
    EXPECT_LT(mag_db(s(p, p)), -40.0);
  EXPECT_LT(mag_db(s(c, a)), -40.0);
  EXPECT_LT(mag_db(s(d, b)), -40.0);
  EXPECT_NEAR(wrap_deg(phase_deg(s(d, a)) - phase_deg(s(b, a))), 0.0, 0.1);
  EXPECT_NEAR(std::abs(wrap_deg(phase_deg(s(d, c)) - phase_deg(s(b, c)))), 180.0, 0.1);
}

TEST(PtCoupler, ZetaDoesNotMatterAtF0)
{
  CouplerParams p50, p80;
  p80.z_eta = 80.0;
  const auto a = sweep::at(gen_pt_coupler(p50), f0, f0);
  const auto b = sweep::at(gen_pt_coupler(p80), f0, f0);
  EXPECT_LT(max_abs(a - b), 1e-9);
  // Off f0 it does.
  EXPECT_GT(max_abs(sweep::at(gen_pt_coupler(p50), 1.1 * f0, f0) - sweep::at(gen_pt_coupler(p80), 1.1 * f0, f0)),
            1e-3);
}

TEST(PtCoupler, EvenOddOracleMatchesSweep)
{
  for (double z_eta : {50.0, 80.0})
    for (double loss : {0.0, 0.3})
    {
      CouplerParams p;
      p.z_eta = z_eta;
      p.loss_db = loss;
      const auto g = gen_pt_coupler(p);
      for (double k : {0.77, 0.9, 1.0, 1.1, 1.3})
        EXPECT_LT(max_abs(evenodd_ratrace_s(p, k * f0) - sweep::at(g, k * f0, f0)), 1e-9) << k;
    }
}

TEST(PtCoupler, HalfCircuitAtF0IsStubLineStub)
{
  const CouplerParams p;
  const auto [e, o] = evenodd_half_circuits(p, f0);
  const auto [ae, ao] = evenodd_abcd_at_f0(p.z0);
  const net::Abcd me = net::s_to_abcd(e, p.z0), mo = net::s_to_abcd(o, p.z0);
  EXPECT_LT(std::abs(me.a - ae.a) + std::abs(me.b - ae.b) + std::abs(me.c - ae.c) + std::abs(me.d - ae.d), 1e-9);
  EXPECT_LT(std::abs(mo.a - ao.a) + std::abs(mo.b - ao.b) + std::abs(mo.c - ao.c) + std::abs(mo.d - ao.d), 1e-9);
}

TEST(PtCoupler, PhaseShifterSeesOpenOrShortAtF0)
{
  // The crossover terminates each half of the relocated 180 degree line
  // in an open (even excitation) or a short (odd excitation).
  const auto [re, ro] = crossover_half_loads(CrossoverParams{}, f0, f0, 50.0);
  EXPECT_LT((re - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ro + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ConventionalRatRace, PhasesAtF0)
{
  const auto s = sweep::at(gen_conventional_ratrace(f0, 50.0), f0, f0);
  using namespace port;
  EXPECT_NEAR(wrap_deg(phase_deg(s(d, a)) - phase_deg(s(b, a))), 0.0, 1e-6);
  EXPECT_NEAR(std::abs(wrap_deg(phase_deg(s(d, c)) - phase_deg(s(b, c)))), 180.0, 1e-6);
}

TEST(Crossover, IdealAtReferencePoint)
{
  const auto s = sweep::at(gen_crossover({}, f0, 50.0), f0, f0);
  using namespace port;
  EXPECT_GT(mag_db(s(xp, x)), -0.01);
  EXPECT_GT(mag_db(s(yp, y)), -0.01);
  EXPECT_LT(mag_db(s(x, x)), -40.0);
  EXPECT_LT(mag_db(s(y, x)), -40.0);
  EXPECT_LT(mag_db(s(yp, x)), -40.0);
}

TEST(Crossover, AccumulatedThruPhaseIsMinus360)
{
  EXPECT_NEAR(accumulated_thru_phase_deg({}, f0, 50.0), -360.0, 1.0);
}

TEST(Crossover, MirrorRelabellingLeavesSUnchanged)
{
  const auto s = sweep::at(gen_crossover({57.0, 50.0, 80.0, 100.0}, f0, 50.0), 1.07 * f0, f0);
  const std::array<Eigen::Index, 4> perm{port::xp, port::x, port::yp, port::y};
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      EXPECT_LT(std::abs(s(r, c) - s(perm[r], perm[c])), 1e-12);
}

TEST(Crossover, FourModeOracleMatchesSweep)
{
  for (const CrossoverParams p : {CrossoverParams{}, CrossoverParams{40.0, 65.0, 70.0, 110.0}})
    for (double loss : {0.0, 0.4})
    {
      const auto g = gen_crossover(p, f0, 50.0, loss);
      for (double k : {0.5, 0.93, 1.0, 1.2})
        EXPECT_LT(max_abs(fourmode_crossover_s(p, k * f0, f0, 50.0, loss) - sweep::at(g, k * f0, f0)), 1e-9);
    }
}

TEST(Crossover, ModeGammas)
{
  EXPECT_EQ(mode_gamma(50.0, 50.0), cplx(0.0));
  const auto g = crossover_mode_gammas({}, f0, f0, 50.0);
  EXPECT_LT(std::abs(0.25 * (g[0][0] + g[0][1] + g[1][0] + g[1][1])), 1e-12);
}

TEST(Crossover, PrintedConditionsAtReferencePoint)
{
  // Reported, not asserted as design truth: the closed-form matching
  // expression does not vanish at this point although the network is ideal.
  const auto r = printed_condition_residuals({}, 50.0);
  EXPECT_NEAR(r.matching, 1.0 - 2.0 * 50.0 / 57.0, 1e-12);
  EXPECT_NEAR(r.isolation, 0.0, 1e-12);
}

TEST(CrossoverSolver, CandidatesVerifyAndAreDeterministic)
{
  const auto a = solve_crossover_conditions(50.0);
  ASSERT_FALSE(a.empty());
  for (const auto &c : a)
  {
    const auto v = verify_crossover(c.params, f0, 50.0);
    EXPECT_TRUE(v.pass);
    EXPECT_GE(v.thru_db, -0.01);
    EXPECT_LE(v.leakage_db, -40.0);
  }
  const auto b = solve_crossover_conditions(50.0);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    EXPECT_EQ(a[i].params.z_x, b[i].params.z_x);
    EXPECT_EQ(a[i].params.theta_x, b[i].params.theta_x);
  }
}

TEST(CrossoverSolver, NothingOnAnImpossibleScan)
{
  CrossoverScan scan;
  scan.theta_lo = 10.0;
  scan.theta_hi = 30.0;
  scan.z_lo = 140.0;
  scan.z_hi = 150.0;
  EXPECT_THROW(solve_crossover_conditions(50.0, scan), no_solution_found);
}

TEST(Comparator, SignMatrixUpToCommonFactor)
{
  const auto s = sweep::at(gen_comparator(f0, 50.0, 50.0, 0.0), f0, f0);
  const cplx u = 2.0 * s(4, 0) / static_cast<double>(sign_matrix[0][0]);
  EXPECT_NEAR(std::abs(u), 1.0, 1e-9);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      EXPECT_LT(std::abs(s(4 + r, c) - 0.5 * u * static_cast<double>(sign_matrix[r][c])), 1e-6);
}

TEST(Comparator, IsMatchedAndIsolatedAtF0)
{
  const auto s = sweep::at(gen_comparator(f0, 50.0, 50.0, 0.0), f0, f0);
  EXPECT_LT(s.topLeftCorner(4, 4).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(s.bottomRightCorner(4, 4).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Params, Validation)
{
  CouplerParams p;
  p.z_eta = 0.0;
  EXPECT_THROW(p.check(), invalid_argument);
  EXPECT_THROW((CrossoverParams{57.0, 50.0, 180.0, 90.0}.check()), invalid_argument);
}
