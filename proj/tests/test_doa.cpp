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

// Monopulse ratio, angle inversion, impairments and the dataset generator.

#include <gtest/gtest.h>

#include <cmath>

#include <mlab/doa.hpp>

using namespace mlab;
using namespace mlab::doa;

namespace
{
const ArrayGeometry geom{};
} // namespace

TEST(Ratio, Examples)
{
  EXPECT_DOUBLE_EQ(monopulse_ratio(cplx(1.0), cplx(2.0)), 0.5);
  EXPECT_DOUBLE_EQ(monopulse_ratio(mlab::j1, cplx(1.0)), 0.0);
  EXPECT_DOUBLE_EQ(monopulse_ratio(cplx(-3.0, 1.0), cplx(0.0, 1.0)), 1.0);
  EXPECT_THROW(monopulse_ratio(cplx(1.0), cplx(0.0)), sum_null);
  EXPECT_THROW(monopulse_ratio(cplx(1.0), cplx(1e-13)), sum_null);
}

TEST(Ratio, HalfWaveInversion)
{
  EXPECT_NEAR(rad2deg(angle_from_ratio(1.0, 0.5, 1.0)), 30.0, 1e-12);
  EXPECT_EQ(angle_from_ratio(0.0, 0.5, 1.0), 0.0);
  EXPECT_THROW(angle_from_ratio(1.0, 0.0, 1.0), invalid_argument);
  EXPECT_THROW(angle_from_ratio(1.0, 0.5, -1.0), invalid_argument);
  // atan(100) / (pi * 0.3) > 1
  EXPECT_THROW(angle_from_ratio(100.0, 0.3, 1.0), out_of_unambiguous_range);
}

TEST(Ratio, RoundTrip)
{
  rng r(5);
  for (int i = 0; i < 2000; ++i)
  {
    const double theta = deg2rad(r.uniform(-40.0, 40.0));
    const double d = r.uniform(0.3, 0.7);
    const double back = angle_from_ratio(ratio_from_angle(theta, d, 1.0), d, 1.0);
    EXPECT_NEAR(back, theta, 1e-12);
  }
}

TEST(Impairments, IdentityWhenDisabled)
{
  const Channels c{cplx(4.0, 1.0), cplx(0.2, -0.1), cplx(-0.3, 0.0), cplx(0.0, 0.01)};
  rng r(1);
  const auto out = apply_impairments(c, ImpairmentConfig{}, r);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_EQ(out[i], c[i]);
}

TEST(Impairments, DeterministicForASeed)
{
  const Channels c{cplx(4.0), cplx(0.2), cplx(-0.3), cplx(0.01)};
  const auto cfg = moderate_impairments(3);
  rng a(17), b(17);
  const auto x = apply_impairments(c, cfg, a), y = apply_impairments(c, cfg, b);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_EQ(x[i], y[i]);
}

TEST(Impairments, SpreadGrowsWithSigma)
{
  double prev = 0.0;
  for (double s : {0.1, 0.5, 1.0, 2.0})
  {
    ImpairmentConfig cfg;
    cfg.sigma_amp_db = s;
    cfg.sigma_phase_deg = 10.0 * s;
    double acc = 0.0;
    rng r(11); // paired normals across sigma levels
    for (int i = 0; i < 500; ++i)
    {
      const auto e = draw_channel_errors(cfg, r);
      acc += std::norm(e.gain[1] - 1.0);
    }
    EXPECT_GT(acc, prev);
    prev = acc;
  }
}

TEST(Impairments, NoisePowerMatchesSnr)
{
  const Channels c{cplx(2.0), cplx(0.0), cplx(0.0), cplx(0.0)};
  rng r(23);
  double p = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    p += std::norm(add_noise(c, 20.0, r).az);
  EXPECT_NEAR(p / n, 4.0 / 100.0, 0.04 * 0.05);
}

TEST(Estimate, ExactWithoutImpairments)
{
  rng r(0);
  for (double az : {-14.0, -3.0, 0.0, 2.5, 14.0})
    for (double el : {-14.0, 0.0, 7.0})
    {
      const auto e = estimate(geom, deg2rad(az), deg2rad(el), ImpairmentConfig{}, r);
      EXPECT_NEAR(e.az, deg2rad(az), 1e-9);
      EXPECT_NEAR(e.el, deg2rad(el), 1e-9);
      EXPECT_NEAR(e.quad_az, 0.0, 1e-12);
    }
}

TEST(Estimate, BoresightIsZero)
{
  rng r(0);
  const auto e = estimate(geom, 0.0, 0.0, ImpairmentConfig{}, r);
  EXPECT_EQ(e.gamma_az, 0.0);
  EXPECT_EQ(e.gamma_el, 0.0);
  EXPECT_EQ(e.az, 0.0);
  EXPECT_EQ(e.el, 0.0);
}

TEST(Estimate, NetworkComparatorAtItsDesignFrequencyIsExact)
{
  Config c;
  c.set("comparator", "network");
  c.set("comparator_f0", "1.95e9");
  const Scenario s = scenario_from_config(c);
  ASSERT_TRUE(s.impairments.comparator.has_value());
  rng r(0);
  const auto e = estimate(s.geometry, deg2rad(9.0), deg2rad(-4.0), s.impairments, r);
  EXPECT_NEAR(e.az, deg2rad(9.0), 1e-9);
  EXPECT_NEAR(e.el, deg2rad(-4.0), 1e-9);
}

TEST(Estimate, OddSymmetryUnderNoise)
{
  // Mean of est(theta) + est(-theta) over independent noise is zero.
  ImpairmentConfig cfg;
  cfg.snr_db = 30.0;
  rng r(31);
  double sum = 0.0, sq = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i)
  {
    const double az = deg2rad(r.uniform(-12.0, 12.0)), el = deg2rad(r.uniform(-12.0, 12.0));
    const double v = estimate(geom, az, el, cfg, r).az + estimate(geom, -az, -el, cfg, r).az;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n, sd = std::sqrt(sq / n - mean * mean);
  EXPECT_LT(std::abs(mean), 4.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST(Dataset, LayoutAndCount)
{
  const Scenario s;
  const auto d = gen_dataset(s);
  ASSERT_EQ(d.size(), 145u);
  EXPECT_EQ(d.size(), s.sample_count());
  double max_deg = 0.0;
  for (const auto &x : d)
  {
    EXPECT_TRUE(x.ok());
    max_deg = std::max({max_deg, std::abs(rad2deg(x.az_true)), std::abs(rad2deg(x.el_true))});
  }
  EXPECT_NEAR(max_deg, 14.9, 0.05);
  EXPECT_EQ(d.back().x, 0.0);
  EXPECT_EQ(d.back().y, 0.0);
  // Serpentine: row 0 runs left to right, row 1 right to left.
  EXPECT_LT(d[0].x, d[1].x);
  EXPECT_GT(d[12].x, d[13].x);
  EXPECT_DOUBLE_EQ(d[11].x, d[12].x);
  EXPECT_GT(d[0].y, d[12].y);
}

TEST(Dataset, DeterministicForASeed)
{
  Scenario s;
  s.impairments = moderate_impairments(42);
  const auto a = gen_dataset(s), b = gen_dataset(s);
  EXPECT_EQ(dataset_csv(a), dataset_csv(b));
  s.impairments.seed = 43;
  EXPECT_NE(dataset_csv(a), dataset_csv(gen_dataset(s)));
}

TEST(Dataset, NoiseStreamKeepsSystematicErrors)
{
  Scenario s;
  s.impairments = moderate_impairments(42);
  s.impairments.snr_db = std::numeric_limits<double>::infinity();
  const auto a = gen_dataset(s);
  s.noise_stream = 3;
  const auto b = gen_dataset(s);
  EXPECT_EQ(dataset_csv(a), dataset_csv(b)); // no noise: only the fixed errors remain
}

TEST(Dataset, CsvRoundTrip)
{
  Scenario s;
  s.impairments = moderate_impairments(8);
  auto d = gen_dataset(s);
  d[3].flags = "sum_null";
  d[3].az_est = d[3].el_est = std::nan("");
  const auto back = parse_dataset_csv(dataset_csv(d));
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
  {
    EXPECT_EQ(back[i].index, d[i].index);
    EXPECT_DOUBLE_EQ(back[i].x, d[i].x);
    EXPECT_NEAR(back[i].az_true, d[i].az_true, 1e-15);
    EXPECT_EQ(back[i].flags, d[i].flags);
    if (d[i].ok())
      EXPECT_NEAR(back[i].el_est, d[i].el_est, 1e-15);
    else
      EXPECT_TRUE(std::isnan(back[i].el_est));
  }
}

TEST(Dataset, MalformedCsv)
{
  EXPECT_THROW(parse_dataset_csv("nonsense\n1,2\n"), parse_error);
  EXPECT_THROW(parse_dataset_csv(std::string(dataset_header()) + "\n0,0.1,0.2\n"), parse_error);
}

TEST(Scenario, FromConfig)
{
  const Config c = Config::parse("distance = 0.86\ngrid_n = 4\ninclude_origin = false\nelement = isotropic\n"
                                 "snr_db = inf\nmultipath_amp = 0\nseed = 9\nd_az_lambda = 0.5\n");
  const Scenario s = scenario_from_config(c, Scenario{});
  EXPECT_EQ(s.distance, 0.86);
  EXPECT_EQ(s.sample_count(), 16u);
  EXPECT_EQ(s.geometry.element, array::ElementModel::isotropic);
  EXPECT_TRUE(std::isinf(s.impairments.snr_db));
  EXPECT_FALSE(s.impairments.multipath.has_value());
  EXPECT_EQ(s.impairments.seed, 9u);
  EXPECT_NEAR(s.geometry.d_az, 0.5 * s.geometry.lambda(), 1e-15);
  EXPECT_THROW(scenario_from_config(Config::parse("element = horn\n")), parse_error);
  EXPECT_THROW(scenario_from_config(Config::parse("comparator = magic\n")), parse_error);
  EXPECT_THROW(scenario_from_config(Config::parse("distance = -1\n")), invalid_argument);
}
