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

// Touchstone writer and reader.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <mlab/components.hpp>
#include <mlab/sweep.hpp>
#include <mlab/touchstone.hpp>

using namespace mlab;

namespace
{
std::string slurp(const std::string &path)
{
  std::ifstream f(path, std::ios::binary);
  std::ostringstream b;
  b << f.rdbuf();
  return b.str();
}

net::SMatrix thru()
{
  net::SMatrix t(2, 2);
  t << 0.0, 1.0, 1.0, 0.0;
  return t;
}
} // namespace

TEST(TouchstoneWrite, TwoPortThruMatchesGolden)
{
  const net::SweepSParams s{2, 50.0, {1e9, 2e9}, {thru(), thru()}};
  EXPECT_EQ(touchstone::write(s), slurp(MLAB_TEST_DATA "/thru_golden.s2p"));
}

TEST(TouchstoneWrite, OnePortIsSingleColumnBlock)
{
  net::SMatrix r(1, 1);
  r << cplx(0.5, -0.25);
  const auto text = touchstone::write(net::SweepSParams{1, 50.0, {1e9}, {r}});
  EXPECT_EQ(text, "# Hz S RI R 50\n1.00000000e+09 5.00000000e-01 -2.50000000e-01\n");
}

TEST(TouchstoneWrite, TwoPortColumnOrder)
{
  net::SMatrix m(2, 2);
  m << cplx(11, 0), cplx(12, 0), cplx(21, 0), cplx(22, 0);
  const auto text = touchstone::write(net::SweepSParams{2, 50.0, {1.0}, {m}});
  // S11 S21 S12 S22
  EXPECT_NE(text.find("1.10000000e+01 0.00000000e+00 2.10000000e+01 0.00000000e+00 1.20000000e+01"),
            std::string::npos);
}

TEST(TouchstoneWrite, RejectsUnsupportedPortCount)
{
  const net::SweepSParams s{5, 50.0, {1e9}, {net::SMatrix::Zero(5, 5)}};
  EXPECT_THROW(touchstone::write(s), unsupported_port_count);
}

TEST(TouchstoneRoundTrip, ComparatorEightPortAtThreeFrequencies)
{
  const auto g = components::gen_comparator(2e9, 50.0, 50.0, 0.1);
  const auto s = sweep::run(g, std::vector<double>{1.9e9, 2e9, 2.1e9}, 2e9, 50.0);
  const auto back = touchstone::read(touchstone::write(s), 8);
  ASSERT_EQ(back.size(), 3u);
  ASSERT_EQ(back.ports, 8u);
  for (std::size_t i = 0; i < 3; ++i)
  {
    EXPECT_NEAR(back.freqs[i], s.freqs[i], 1e-9 * s.freqs[i]);
    EXPECT_LT((back.matrices[i] - s.matrices[i]).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(TouchstoneRoundTrip, FourPortAndTwoPort)
{
  const auto g = components::gen_conventional_ratrace(2e9, 50.0);
  const auto s = sweep::run(g, std::vector<double>{1.5e9, 2e9}, 2e9, 50.0);
  const auto back = touchstone::read(touchstone::write(s), 4);
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_LT((back.matrices[i] - s.matrices[i]).cwiseAbs().maxCoeff(), 1e-8);
  const net::SweepSParams t{2, 50.0, {1e9, 2e9}, {thru(), thru()}};
  const auto bt = touchstone::read(touchstone::write(t), 2);
  EXPECT_LT((bt.matrices[1] - thru()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TouchstoneRead, FormatsUnitsAndComments)
{
  const std::string text = "! comment line\n"
                           "# GHz S MA R 50\n"
                           "1.0 0.5 90 1.0 0 1.0 0 0.5 -90 ! trailing\n";
  const auto s = touchstone::read(text, 2);
  EXPECT_DOUBLE_EQ(s.freqs[0], 1e9);
  EXPECT_NEAR(std::abs(s.matrices[0](0, 0) - cplx(0.0, 0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.matrices[0](1, 1) - cplx(0.0, -0.5)), 0.0, 1e-15);

  const auto d = touchstone::read("# MHz S DB R 50\n100 -6.0206 0\n", 1);
  EXPECT_DOUBLE_EQ(d.freqs[0], 1e8);
  EXPECT_NEAR(std::abs(d.matrices[0](0, 0)), 0.5, 1e-5);
}

TEST(TouchstoneRead, RejectsMalformedInput)
{
  EXPECT_THROW(touchstone::read("# Hz S RI R 50\n1e9 0 0 1\n", 2), parse_error);
  EXPECT_THROW(touchstone::read("# Hz S RI R 50\n2e9 0 0\n1e9 0 0\n", 1), parse_error);
  EXPECT_THROW(touchstone::read("# Hz S RI R 50\n1e9 x 0\n", 1), parse_error);
}

TEST(TouchstoneFile, ExtensionGivesPortCount)
{
  const auto dir = std::filesystem::temp_directory_path() / "mlab_touchstone_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "thru.s2p").string();
  const net::SweepSParams t{2, 50.0, {1e9, 2e9}, {thru(), thru()}};
  touchstone::write_file(t, path);
  const auto back = touchstone::read_file(path);
  EXPECT_EQ(back.ports, 2u);
  EXPECT_EQ(back.size(), 2u);
}
