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

// Small fully connected regression network trained with full-batch Adam.
// Maps estimated angles and range (theta_el_hat, theta_az_hat, D) to
// corrected angles (theta_el, theta_az). Angles in radians.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doa.hpp"
#include "rng.hpp"

namespace mlab::dnn
{

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Activation
{
  tanh,
  relu,
  linear
};

inline const char *to_string(Activation a)
{
  switch (a)
  {
  case Activation::tanh: return "tanh";
  case Activation::relu: return "relu";
  case Activation::linear: return "linear";
  }
  return "?";
}

inline Activation activation_from_string(const std::string &s)
{
  if (s == "tanh")
    return Activation::tanh;
  if (s == "relu")
    return Activation::relu;
  if (s == "linear")
    return Activation::linear;
  throw parse_error("unknown activation '" + s + "'");
}

inline const std::vector<int> &default_widths()
{
  static const std::vector<int> w{3, 20, 50, 10, 2};
  return w;
}

/// Per-feature min/max scaling to [-1, 1]. A constant feature maps to 0.
struct Scaler
{
  VectorXd lo, hi;

  static Scaler identity(int n) { return {VectorXd::Constant(n, -1.0), VectorXd::Constant(n, 1.0)}; }

  static Scaler fit(const MatrixXd &x) // features x samples
  {
    return {x.rowwise().minCoeff(), x.rowwise().maxCoeff()};
  }

  MatrixXd normalize(const MatrixXd &x) const
  {
    MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
    {
      const double span = hi(i) - lo(i);
      if (span > 0.0)
        out.row(i) = (2.0 * (x.row(i).array() - lo(i)) / span - 1.0).matrix();
      else
        out.row(i).setZero();
    }
    return out;
  }

  MatrixXd denormalize(const MatrixXd &y) const
  {
    MatrixXd out(y.rows(), y.cols());
    for (Eigen::Index i = 0; i < y.rows(); ++i)
      out.row(i) = ((y.row(i).array() + 1.0) * (0.5 * (hi(i) - lo(i))) + lo(i)).matrix();
    return out;
  }

  /// d(denormalized)/d(normalized) per feature.
  VectorXd slope() const { return 0.5 * (hi - lo); }
};

struct Layer
{
  MatrixXd w; // out x in
  VectorXd b;
};

struct Mlp
{
  std::vector<int> widths = default_widths();
  Activation hidden = Activation::tanh;
  std::vector<Layer> layers;
  Scaler in = Scaler::identity(3), out = Scaler::identity(2);

  static Mlp zeros(std::vector<int> widths = default_widths(), Activation act = Activation::tanh)
  {
    if (widths.size() < 2)
      throw invalid_argument("network needs at least an input and an output layer");
    Mlp m;
    m.widths = widths;
    m.hidden = act;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    {
      if (widths[l] < 1 || widths[l + 1] < 1)
        throw invalid_argument("layer widths must be positive");
      m.layers.push_back({MatrixXd::Zero(widths[l + 1], widths[l]), VectorXd::Zero(widths[l + 1])});
    }
    m.in = Scaler::identity(widths.front());
    m.out = Scaler::identity(widths.back());
    return m;
  }

  /// Uniform Xavier weights, zero biases.
  static Mlp xavier(std::uint64_t seed, std::vector<int> widths = default_widths(), Activation act = Activation::tanh)
  {
    Mlp m = zeros(std::move(widths), act);
    rng r(seed);
    for (auto &L : m.layers)
    {
      const double lim = std::sqrt(6.0 / static_cast<double>(L.w.rows() + L.w.cols()));
      for (Eigen::Index i = 0; i < L.w.rows(); ++i)
        for (Eigen::Index j = 0; j < L.w.cols(); ++j)
          L.w(i, j) = r.uniform(-lim, lim);
    }
    return m;
  }

  std::size_t parameter_count() const
  {
    std::size_t n = 0;
    for (const auto &L : layers)
      n += static_cast<std::size_t>(L.w.size() + L.b.size());
    return n;
  }

  void check() const
  {
    if (layers.size() + 1 != widths.size())
      throw invalid_argument("layer count does not match widths");
    for (std::size_t l = 0; l < layers.size(); ++l)
    {
      const auto &L = layers[l];
      if (L.w.rows() != widths[l + 1] || L.w.cols() != widths[l] || L.b.size() != widths[l + 1])
        throw invalid_argument("layer " + std::to_string(l) + " shape does not match widths");
      if (!L.w.allFinite() || !L.b.allFinite())
        throw invalid_argument("non-finite parameter in layer " + std::to_string(l));
    }
    if (in.lo.size() != widths.front() || out.lo.size() != widths.back())
      throw invalid_argument("scaler sizes do not match widths");
  }
};

namespace detail
{
inline MatrixXd activate(const MatrixXd &z, Activation a)
{
  switch (a)
  {
  case Activation::tanh: return z.array().tanh().matrix();
  case Activation::relu: return z.cwiseMax(0.0);
  case Activation::linear: return z;
  }
  return z;
}

// Derivative expressed through the activation output (and input for relu).
inline MatrixXd activate_grad(const MatrixXd &z, const MatrixXd &a, Activation act)
{
  switch (act)
  {
  case Activation::tanh: return (1.0 - a.array().square()).matrix();
  case Activation::relu: return (z.array() > 0.0).cast<double>().matrix();
  case Activation::linear: return MatrixXd::Ones(z.rows(), z.cols());
  }
  return a;
}
} // namespace detail

/// Network on normalized inputs (features x samples) to normalized outputs.
inline MatrixXd forward(const Mlp &m, const MatrixXd &xn)
{
  MatrixXd a = xn;
  for (std::size_t l = 0; l < m.layers.size(); ++l)
  {
    MatrixXd z = (m.layers[l].w * a).colwise() + m.layers[l].b;
    a = l + 1 < m.layers.size() ? detail::activate(z, m.hidden) : std::move(z);
  }
  return a;
}

/// Raw inputs to raw outputs through the stored scalers.
inline MatrixXd predict(const Mlp &m, const MatrixXd &x) { return m.out.denormalize(forward(m, m.in.normalize(x))); }

/// Mean over samples of the summed squared error across outputs.
inline double loss(const MatrixXd &pred, const MatrixXd &truth)
{
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw invalid_argument("prediction and truth shapes differ");
  if (pred.cols() == 0)
    throw empty_batch("loss of an empty batch");
  return (pred - truth).squaredNorm() / static_cast<double>(pred.cols());
}

struct Batch
{
  MatrixXd x; // raw inputs, features x samples
  MatrixXd y; // raw targets
  std::size_t size() const { return static_cast<std::size_t>(x.cols()); }
};

using Gradient = std::vector<Layer>;

/// Exact reverse-mode gradient of loss(predict(m, x), y) with respect to
/// every weight and bias. Returns the loss through `value` if given.
inline Gradient gradient(const Mlp &m, const Batch &b, double *value = nullptr)
{
  if (b.x.cols() == 0)
    throw empty_batch("gradient of an empty batch");
  const std::size_t nl = m.layers.size();
  std::vector<MatrixXd> zs(nl), as(nl + 1);
  as[0] = m.in.normalize(b.x);
  for (std::size_t l = 0; l < nl; ++l)
  {
    zs[l] = (m.layers[l].w * as[l]).colwise() + m.layers[l].b;
    as[l + 1] = l + 1 < nl ? detail::activate(zs[l], m.hidden) : zs[l];
  }
  const MatrixXd pred = m.out.denormalize(as[nl]);
  const double n = static_cast<double>(b.x.cols());
  if (value)
    *value = loss(pred, b.y);
  MatrixXd delta = ((2.0 / n) * (pred - b.y)).array().colwise() * m.out.slope().array();
  Gradient g(nl);
  for (std::size_t l = nl; l-- > 0;)
  {
    g[l].w = delta * as[l].transpose();
    g[l].b = delta.rowwise().sum();
    if (l > 0)
      delta = (m.layers[l].w.transpose() * delta).cwiseProduct(detail::activate_grad(zs[l - 1], as[l], m.hidden));
  }
  return g;
}

// ------------------------------------------------------------------------
// Training

struct TrainConfig
{
  std::size_t iterations = 20000;
  double lr = 1e-3, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double split = 0.9;
  std::uint64_t seed = 0;
  Activation hidden = Activation::tanh;
  std::vector<int> widths = default_widths();

  void check() const
  {
    if (!(split > 0.0 && split < 1.0))
      throw invalid_argument("split fraction must lie in (0, 1)");
    if (!(lr > 0.0))
      throw invalid_argument("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0))
      throw invalid_argument("invalid Adam constants");
    if (widths.size() < 2 || widths.front() != 3 || widths.back() != 2)
      throw invalid_argument("network must map 3 inputs to 2 outputs");
  }
};

struct TrainReport
{
  std::vector<double> train_loss;   // per iteration, rad^2, before the update
  double final_train_loss = 0.0;    // rad^2
  double val_loss = 0.0;            // rad^2, corrected
  double val_loss_uncorrected = 0.0;
  double mean_distance = 0.0;       // metres, over the validation set
  std::size_t n_train = 0, n_val = 0, n_flagged = 0;
  double seconds = 0.0;

  /// D * sqrt(validation loss): the root-sum-square over both axes of the
  /// RMS angular error, converted to a lateral offset at the mean range.
  double position_error_m() const { return mean_distance * std::sqrt(val_loss); }
};

/// Inputs (theta_el_hat, theta_az_hat, D) and targets (theta_el, theta_az)
/// of the unflagged samples.
inline Batch to_batch(const std::vector<doa::DoASample> &v, const std::vector<std::size_t> &idx)
{
  Batch b{MatrixXd(3, static_cast<Eigen::Index>(idx.size())), MatrixXd(2, static_cast<Eigen::Index>(idx.size()))};
  for (std::size_t k = 0; k < idx.size(); ++k)
  {
    const auto &s = v[idx[k]];
    const auto c = static_cast<Eigen::Index>(k);
    b.x.col(c) << s.el_est, s.az_est, s.distance;
    b.y.col(c) << s.el_true, s.az_true;
  }
  return b;
}

inline Batch to_batch(const std::vector<doa::DoASample> &v)
{
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].ok())
      idx.push_back(i);
  return to_batch(v, idx);
}

/// Uncorrected estimates laid out like a prediction.
inline MatrixXd passthrough(const Batch &b) { return b.x.topRows(2); }

/// Seeded shuffle of the unflagged samples; the first `split` fraction
/// trains, the rest validates.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(const std::vector<doa::DoASample> &v,
                                                                                   double split, std::uint64_t seed)
{
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].ok())
      idx.push_back(i);
  rng r(mix_seed(seed, 0x5bd1e995u));
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[r.next_u64() % i]);
  std::size_t nt = static_cast<std::size_t>(std::floor(split * static_cast<double>(idx.size())));
  nt = std::clamp<std::size_t>(nt, 1, idx.size() - 1);
  return {std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(nt)),
          std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(nt), idx.end())};
}

/// Runs `iterations` full-batch Adam steps on `m` in place.
inline std::vector<double> adam(Mlp &m, const Batch &b, const TrainConfig &cfg)
{
  std::vector<double> hist;
  hist.reserve(cfg.iterations);
  Gradient mo(m.layers.size()), ve(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l)
  {
    mo[l] = {MatrixXd::Zero(m.layers[l].w.rows(), m.layers[l].w.cols()), VectorXd::Zero(m.layers[l].b.size())};
    ve[l] = mo[l];
  }
  double p1 = 1.0, p2 = 1.0;
  for (std::size_t it = 0; it < cfg.iterations; ++it)
  {
    double value = 0.0;
    const Gradient g = gradient(m, b, &value);
    hist.push_back(value);
    p1 *= cfg.beta1;
    p2 *= cfg.beta2;
    const double c1 = 1.0 / (1.0 - p1), c2 = 1.0 / (1.0 - p2);
    auto step = [&](auto &param, auto &mm, auto &vv, const auto &gg) {
      mm = cfg.beta1 * mm + (1.0 - cfg.beta1) * gg;
      vv = cfg.beta2 * vv + (1.0 - cfg.beta2) * gg.cwiseAbs2();
      param.array() -= cfg.lr * (mm.array() * c1) / ((vv.array() * c2).sqrt() + cfg.eps);
    };
    for (std::size_t l = 0; l < m.layers.size(); ++l)
    {
      step(m.layers[l].w, mo[l].w, ve[l].w, g[l].w);
      step(m.layers[l].b, mo[l].b, ve[l].b, g[l].b);
    }
  }
  return hist;
}

inline std::pair<Mlp, TrainReport> train(const std::vector<doa::DoASample> &data, const TrainConfig &cfg)
{
  cfg.check();
  const auto t0 = std::chrono::steady_clock::now();
  TrainReport rep;
  for (const auto &s : data)
    rep.n_flagged += s.ok() ? 0 : 1;
  if (data.size() - rep.n_flagged < 10)
    throw empty_batch("training needs at least 10 usable samples");
  const auto [tr, va] = split_indices(data, cfg.split, cfg.seed);
  const Batch bt = to_batch(data, tr), bv = to_batch(data, va);
  rep.n_train = tr.size();
  rep.n_val = va.size();

  Mlp m = Mlp::xavier(mix_seed(cfg.seed, 1), cfg.widths, cfg.hidden);
  m.in = Scaler::fit(bt.x);
  m.out = Scaler::fit(bt.y);
  rep.train_loss = adam(m, bt, cfg);
  rep.final_train_loss = loss(predict(m, bt.x), bt.y);
  rep.val_loss = loss(predict(m, bv.x), bv.y);
  rep.val_loss_uncorrected = loss(passthrough(bv), bv.y);
  rep.mean_distance = bv.x.row(2).mean();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(m), std::move(rep)};
}

// ------------------------------------------------------------------------
// Evaluation

struct EvalReport
{
  std::vector<std::size_t> index;
  std::vector<double> el_corr, az_corr; // radians, per unflagged sample
  double rms_el_before = 0, rms_az_before = 0, rms_el_after = 0, rms_az_after = 0;
  double distance = 0;

  double rms_before() const { return std::hypot(rms_el_before, rms_az_before); }
  double rms_after() const { return std::hypot(rms_el_after, rms_az_after); }
  /// D * tan(rms error) per axis, root-sum-square.
  double position_before_m() const
  {
    return std::hypot(distance * std::tan(rms_el_before), distance * std::tan(rms_az_before));
  }
  double position_after_m() const
  {
    return std::hypot(distance * std::tan(rms_el_after), distance * std::tan(rms_az_after));
  }
};

inline EvalReport evaluate(const Mlp &m, const std::vector<doa::DoASample> &data, double distance)
{
  EvalReport r;
  r.distance = distance;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data[i].ok())
      r.index.push_back(i);
  if (r.index.empty())
    throw empty_batch("no usable samples to evaluate");
  const Batch b = to_batch(data, r.index);
  const MatrixXd p = predict(m, b.x);
  const double n = static_cast<double>(b.size());
  auto rms = [&](const MatrixXd &e, int row) { return std::sqrt(e.row(row).squaredNorm() / n); };
  const MatrixXd before = passthrough(b) - b.y, after = p - b.y;
  r.rms_el_before = rms(before, 0);
  r.rms_az_before = rms(before, 1);
  r.rms_el_after = rms(after, 0);
  r.rms_az_after = rms(after, 1);
  r.el_corr.resize(static_cast<std::size_t>(p.cols()));
  for (Eigen::Index c = 0; c < p.cols(); ++c)
  {
    r.el_corr[static_cast<std::size_t>(c)] = p(0, c);
    r.az_corr.push_back(p(1, c));
  }
  return r;
}

// ------------------------------------------------------------------------
// Files

inline std::string save(const Mlp &m)
{
  m.check();
  std::string s = "monopulse-lab mlp 1\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto vec = [&](const char *tag, const VectorXd &v) {
    s += tag;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      s += " " + num(v(i));
    s += "\n";
  };
  s += std::string("activation ") + to_string(m.hidden) + "\nwidths";
  for (int w : m.widths)
    s += " " + std::to_string(w);
  s += "\n";
  vec("in_min", m.in.lo);
  vec("in_max", m.in.hi);
  vec("out_min", m.out.lo);
  vec("out_max", m.out.hi);
  for (std::size_t l = 0; l < m.layers.size(); ++l)
  {
    const auto &L = m.layers[l];
    s += "layer " + std::to_string(l) + " " + std::to_string(L.w.rows()) + " " + std::to_string(L.w.cols()) + "\n";
    for (Eigen::Index i = 0; i < L.w.rows(); ++i)
      vec("w", L.w.row(i).transpose());
    vec("b", L.b);
  }
  s += "end\n";
  return s;
}

inline Mlp load(const std::string &text)
{
  std::istringstream in(text);
  std::string line;
  auto next = [&](const std::string &tag) {
    while (std::getline(in, line))
    {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (!line.empty())
        break;
    }
    std::istringstream ls(line);
    std::string t;
    ls >> t;
    if (t != tag)
      throw parse_error("model file: expected '" + tag + "', got '" + line + "'");
    std::vector<std::string> rest;
    for (std::string w; ls >> w;)
      rest.push_back(w);
    return rest;
  };
  auto nums = [](const std::vector<std::string> &v) {
    VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
    {
      std::size_t used = 0;
      try
      {
        out(static_cast<Eigen::Index>(i)) = std::stod(v[i], &used);
      }
      catch (const std::exception &)
      {
        used = 0;
      }
      if (used != v[i].size())
        throw parse_error("model file: bad number '" + v[i] + "'");
    }
    return out;
  };
  const auto head = next("monopulse-lab");
  if (head.size() != 2 || head[0] != "mlp" || head[1] != "1")
    throw parse_error("model file: unsupported header");
  const auto act = next("activation");
  if (act.size() != 1)
    throw parse_error("model file: bad activation line");
  const VectorXd wv = nums(next("widths"));
  std::vector<int> widths;
  for (Eigen::Index i = 0; i < wv.size(); ++i)
    widths.push_back(static_cast<int>(wv(i)));
  Mlp m = Mlp::zeros(widths, activation_from_string(act[0]));
  m.in = {nums(next("in_min")), nums(next("in_max"))};
  m.out = {nums(next("out_min")), nums(next("out_max"))};
  for (std::size_t l = 0; l < m.layers.size(); ++l)
  {
    auto &L = m.layers[l];
    const VectorXd h = nums(next("layer"));
    if (h.size() != 3 || h(0) != static_cast<double>(l) || h(1) != static_cast<double>(L.w.rows()) ||
        h(2) != static_cast<double>(L.w.cols()))
      throw parse_error("model file: layer header mismatch at layer " + std::to_string(l));
    for (Eigen::Index i = 0; i < L.w.rows(); ++i)
    {
      const VectorXd row = nums(next("w"));
      if (row.size() != L.w.cols())
        throw parse_error("model file: weight row has wrong length");
      L.w.row(i) = row.transpose();
    }
    L.b = nums(next("b"));
  }
  next("end");
  m.check();
  return m;
}

inline void save_file(const Mlp &m, const std::string &path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw error("cannot write " + path);
  f << save(m);
}

inline Mlp load_file(const std::string &path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw error("cannot open model file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return load(buf.str());
}

inline std::string loss_csv(const std::vector<double> &hist)
{
  std::string s = "iteration,train_loss_rad2\n";
  char buf[64];
  for (std::size_t i = 0; i < hist.size(); ++i)
  {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, hist[i]);
    s += buf;
  }
  return s;
}

} // namespace mlab::dnn
