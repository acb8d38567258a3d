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

// Network evaluation, exact gradients, training and the model file.

#include <gtest/gtest.h>

#include <mlab/dnn.hpp>

using namespace mlab;
using namespace mlab::dnn;

namespace
{
Batch random_batch(rng &r, int n)
{
  Batch b{MatrixXd(3, n), MatrixXd(2, n)};
  for (int c = 0; c < n; ++c)
  {
    b.x.col(c) << r.uniform(-0.3, 0.3), r.uniform(-0.3, 0.3), r.uniform(0.5, 0.9);
    b.y.col(c) << r.uniform(-0.3, 0.3), r.uniform(-0.3, 0.3);
  }
  return b;
}

Mlp random_net(rng &r, const std::vector<int> &widths, Activation act)
{
  Mlp m = Mlp::zeros(widths, act);
  for (auto &L : m.layers)
  {
    for (Eigen::Index i = 0; i < L.w.size(); ++i)
      L.w.data()[i] = r.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < L.b.size(); ++i)
      L.b(i) = r.uniform(-0.5, 0.5);
  }
  return m;
}

/// Copies (theta_el_hat, theta_az_hat) through a ReLU layer as
/// relu(x) - relu(-x).
Mlp identity_relu()
{
  Mlp m = Mlp::zeros({3, 4, 2}, Activation::relu);
  m.layers[0].w << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0;
  m.layers[1].w << 1, -1, 0, 0, 0, 0, 1, -1;
  return m;
}

/// Scan positions with estimates equal to the true angles.
std::vector<doa::DoASample> perfect_data(double distance)
{
  doa::Scenario s;
  s.distance = distance;
  auto d = doa::gen_dataset(s);
  for (auto &x : d)
  {
    x.az_est = x.az_true;
    x.el_est = x.el_true;
  }
  return d;
}
} // namespace

TEST(Forward, ZeroNetworkGivesZero)
{
  const Mlp m = Mlp::zeros();
  rng r(1);
  const Batch b = random_batch(r, 5);
  EXPECT_EQ(forward(m, b.x).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(predict(m, b.x).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Forward, IdentityLikeReluConstruction)
{
  rng r(2);
  const Batch b = random_batch(r, 20);
  EXPECT_LT((predict(identity_relu(), b.x) - b.x.topRows(2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Forward, DeterministicInitialisation)
{
  const Mlp a = Mlp::xavier(5), b = Mlp::xavier(5), c = Mlp::xavier(6);
  EXPECT_EQ(save(a), save(b));
  EXPECT_NE(save(a), save(c));
  EXPECT_EQ(a.parameter_count(), 3u * 20 + 20 + 20 * 50 + 50 + 50 * 10 + 10 + 10 * 2 + 2);
}

TEST(Loss, Examples)
{
  MatrixXd p(2, 1), t = MatrixXd::Zero(2, 1);
  p << 0.001, 0.002;
  EXPECT_NEAR(loss(p, t), 5e-6, 1e-18);
  EXPECT_EQ(loss(t, t), 0.0);
  MatrixXd p2(2, 2), t2 = MatrixXd::Zero(2, 2);
  p2 << 0.001, 0.001, 0.002, 0.002;
  EXPECT_NEAR(loss(p2, t2), loss(p, t), 1e-18);
  EXPECT_THROW(loss(MatrixXd(2, 0), MatrixXd(2, 0)), empty_batch);
  EXPECT_THROW(loss(p, MatrixXd::Zero(2, 2)), invalid_argument);
}

TEST(Gradient, MatchesCentralDifferences)
{
  rng r(3);
  const double h = 1e-5;
  for (int draw = 0; draw < 100; ++draw)
  {
    const Activation act = draw % 3 == 0 ? Activation::linear : Activation::tanh;
    Mlp m = random_net(r, {3, 5, 4, 2}, act);
    const Batch b = random_batch(r, 7);
    m.in = Scaler::fit(b.x);
    m.out = Scaler::fit(b.y);
    const Gradient g = gradient(m, b);
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < m.layers.size(); ++l)
    {
      auto probe = [&](double &p, double analytic) {
        const double keep = p;
        p = keep + h;
        const double up = loss(predict(m, b.x), b.y);
        p = keep - h;
        const double down = loss(predict(m, b.x), b.y);
        p = keep;
        const double fd = (up - down) / (2.0 * h);
        num += (fd - analytic) * (fd - analytic);
        den += analytic * analytic;
      };
      for (Eigen::Index i = 0; i < m.layers[l].w.size(); ++i)
        probe(m.layers[l].w.data()[i], g[l].w.data()[i]);
      for (Eigen::Index i = 0; i < m.layers[l].b.size(); ++i)
        probe(m.layers[l].b(i), g[l].b(i));
    }
    EXPECT_LT(std::sqrt(num / den), 1e-6) << "draw " << draw;
  }
}

TEST(Gradient, DuplicatedBatchGivesSameGradient)
{
  rng r(4);
  const Mlp m = random_net(r, default_widths(), Activation::tanh);
  const Batch b = random_batch(r, 9);
  Batch bb{MatrixXd(3, 18), MatrixXd(2, 18)};
  bb.x << b.x, b.x;
  bb.y << b.y, b.y;
  const Gradient g1 = gradient(m, b), g2 = gradient(m, bb);
  for (std::size_t l = 0; l < g1.size(); ++l)
  {
    EXPECT_LT((g1[l].w - g2[l].w).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((g1[l].b - g2[l].b).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Gradient, ZeroAtPerfectFit)
{
  rng r(5);
  Batch b = random_batch(r, 6);
  b.y = b.x.topRows(2);
  const Gradient g = gradient(identity_relu(), b);
  for (const auto &L : g)
  {
    EXPECT_LT(L.w.cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(L.b.cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(gradient(identity_relu(), Batch{MatrixXd(3, 0), MatrixXd(2, 0)}), empty_batch);
}

TEST(Scaler, RoundTrip)
{
  rng r(6);
  const Batch b = random_batch(r, 50);
  const Scaler s = Scaler::fit(b.x);
  const MatrixXd n = s.normalize(b.x);
  EXPECT_LE(n.maxCoeff(), 1.0 + 1e-15);
  EXPECT_GE(n.minCoeff(), -1.0 - 1e-15);
  EXPECT_LT((s.denormalize(n) - b.x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ModelFile, SaveLoadIsExact)
{
  rng r(7);
  Mlp m = random_net(r, default_widths(), Activation::tanh);
  const Batch b = random_batch(r, 10);
  m.in = Scaler::fit(b.x);
  m.out = Scaler::fit(b.y);
  const Mlp back = load(save(m));
  EXPECT_EQ(save(back), save(m));
  EXPECT_EQ(back.hidden, m.hidden);
  for (std::size_t l = 0; l < m.layers.size(); ++l)
  {
    EXPECT_EQ(back.layers[l].w, m.layers[l].w);
    EXPECT_EQ(back.layers[l].b, m.layers[l].b);
  }
  EXPECT_EQ(predict(back, b.x), predict(m, b.x));
}

TEST(ModelFile, RejectsDamage)
{
  const std::string good = save(Mlp::xavier(1));
  EXPECT_THROW(load("not a model\n"), parse_error);
  EXPECT_THROW(load(good.substr(0, good.size() / 2)), parse_error);
  std::string bad = good;
  bad.replace(bad.find("tanh"), 4, "sigm");
  EXPECT_THROW(load(bad), parse_error);
}

TEST(Split, DeterministicAndDisjoint)
{
  const auto d = perfect_data(0.62);
  const auto [a, b] = split_indices(d, 0.9, 3);
  const auto [c, e] = split_indices(d, 0.9, 3);
  EXPECT_EQ(a, c);
  EXPECT_EQ(b, e);
  EXPECT_EQ(a.size(), 130u);
  EXPECT_EQ(b.size(), 15u);
  std::vector<bool> seen(d.size(), false);
  for (auto i : a)
    seen[i] = true;
  for (auto i : b)
  {
    EXPECT_FALSE(seen[i]);
    seen[i] = true;
  }
}

TEST(Train, NeedsTenUsableSamples)
{
  auto d = perfect_data(0.62);
  d.resize(9);
  EXPECT_THROW(train(d, TrainConfig{}), empty_batch);
}

TEST(Train, SameSeedSameParameters)
{
  doa::Scenario s;
  s.impairments = doa::moderate_impairments(4);
  const auto d = doa::gen_dataset(s);
  TrainConfig cfg;
  cfg.iterations = 300;
  cfg.seed = 4;
  EXPECT_EQ(save(train(d, cfg).first), save(train(d, cfg).first));
  cfg.seed = 5;
  EXPECT_NE(save(train(d, cfg).first), save(train(d, TrainConfig{300}).first));
}

TEST(Train, StandardScenarioLearnsTheCorrection)
{
  doa::Scenario s;
  s.impairments = doa::moderate_impairments(1);
  const auto d = doa::gen_dataset(s);
  TrainConfig cfg;
  cfg.seed = 1;
  const auto [m, rep] = train(d, cfg);
  EXPECT_LE(rep.val_loss, 1e-4);
  EXPECT_LE(rep.val_loss, 0.2 * rep.val_loss_uncorrected);
  // Window-100 smoothed loss falls between iteration 100 and the end.
  auto smooth = [&](std::size_t end) {
    double a = 0.0;
    for (std::size_t i = end - 100; i < end; ++i)
      a += rep.train_loss[i];
    return a / 100.0;
  };
  ASSERT_EQ(rep.train_loss.size(), 20000u);
  EXPECT_LT(smooth(20000), smooth(100));
  EXPECT_NEAR(rep.position_error_m(), rep.mean_distance * std::sqrt(rep.val_loss), 1e-15);

  // A nearby range with fresh noise but the same receiver.
  doa::Scenario far = s;
  far.distance = 0.66;
  far.noise_stream = 1;
  const auto ev = evaluate(m, doa::gen_dataset(far), far.distance);
  EXPECT_LT(ev.rms_after(), ev.rms_before());
  EXPECT_NEAR(ev.position_before_m(),
              std::hypot(0.66 * std::tan(ev.rms_el_before), 0.66 * std::tan(ev.rms_az_before)), 1e-15);
}

TEST(Train, IdentityIsLearnableWithoutImpairments)
{
  const auto [m, rep] = train(perfect_data(0.62), TrainConfig{});
  EXPECT_EQ(rep.val_loss_uncorrected, 0.0);
  EXPECT_LE(rep.val_loss, 1e-8);
}

TEST(Evaluate, PerfectModelOnPerfectData)
{
  const auto ev = evaluate(identity_relu(), perfect_data(0.86), 0.86);
  EXPECT_EQ(ev.rms_before(), 0.0);
  EXPECT_LT(ev.rms_after(), 1e-15); // scaling round-off only
  EXPECT_LT(ev.position_after_m(), 1e-15);
  EXPECT_EQ(ev.index.size(), 145u);
}

TEST(Evaluate, NoUsableSamples)
{
  auto d = perfect_data(0.62);
  for (auto &s : d)
    s.flags = "sum_null";
  EXPECT_THROW(evaluate(identity_relu(), d, 0.62), empty_batch);
}
