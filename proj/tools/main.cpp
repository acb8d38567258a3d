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


// monopulse-lab: command-line front end. Every subcommand writes its
// outputs into --out and records them in a <command>.manifest.json.
// Exit status: 0 success, 1 usage or input error, 2 computation error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <mlab/mlab.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mlab;

namespace
{

/// Bad flag values or unreadable inputs; maps to exit status 1.
struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Run
{
  std::string command;
  fs::path out;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs, outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  fs::path path(const std::string &name) const { return out / name; }

  void write(const std::string &name, const std::string &content)
  {
    fs::create_directories(out);
    const fs::path p = path(name);
    std::ofstream f(p, std::ios::binary);
    if (!f)
      throw usage_error("--out: cannot write " + p.string());
    f << content;
    if (!f)
      throw usage_error("--out: write failed for " + p.string());
    outputs.push_back(p.string());
  }

  void finish()
  {
    json m;
    m["command"] = command;
    m["tool_version"] = MLAB_VERSION;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string name = command;
    for (auto &ch : name)
      if (ch == ' ')
        ch = '-';
    fs::create_directories(out);
    std::ofstream f(path(name + ".manifest.json"), std::ios::binary);
    f << m.dump(2) << "\n";
  }
};

/// Shared flag values. A flag given on the command line wins over the
/// config file, which wins over the built-in default.
struct Common
{
  std::string out = "out";
  std::string config_path;
  Config cfg;
  std::multimap<std::string, CLI::Option *> opts; // flag -> option, one per subcommand
  double f0 = 2e9, z0 = 50.0, fstart = 1.5e9, fstop = 2.5e9;
  std::size_t points = 1001;
  std::uint64_t seed = 0;
  double distance = 0.62, pitch = 0.03;
  std::size_t iters = 20000;

  void load_config(Run &run)
  {
    if (config_path.empty())
      return;
    if (!fs::exists(config_path))
      throw usage_error("--config: file not found: " + config_path);
    cfg = Config::load(config_path);
    run.inputs.push_back(config_path);
  }

  bool given(const std::string &flag) const
  {
    const auto [lo, hi] = opts.equal_range(flag);
    for (auto it = lo; it != hi; ++it)
      if (it->second->count() > 0)
        return true;
    return false;
  }

  double pick(const std::string &flag, double value, const std::string &key)
  {
    return given(flag) ? value : cfg.get(key, value);
  }

  void warn_unused() const
  {
    for (const auto &k : cfg.unused_keys())
      std::fprintf(stderr, "warning: config key '%s' is not used by this command\n", k.c_str());
  }
};

void add_out(CLI::App *c, Common &o)
{
  c->add_option("--out", o.out, "Output directory")->capture_default_str();
  c->add_option("--config", o.config_path, "key=value config file");
}

void add_rf(CLI::App *c, Common &o)
{
  o.opts.emplace("--f0", c->add_option("--f0", o.f0, "Design frequency [Hz]")->capture_default_str());
  o.opts.emplace("--z0", c->add_option("--z0", o.z0, "Reference impedance [ohm]")->capture_default_str());
}

void add_grid(CLI::App *c, Common &o)
{
  o.opts.emplace("--fstart", c->add_option("--fstart", o.fstart, "Sweep start [Hz]")->capture_default_str());
  o.opts.emplace("--fstop", c->add_option("--fstop", o.fstop, "Sweep stop [Hz]")->capture_default_str());
  o.opts.emplace("--points", c->add_option("--points", o.points, "Sweep points")->capture_default_str());
}

CLI::Option *add_seed(CLI::App *c, Common &o)
{
  auto *opt = c->add_option("--seed", o.seed, "Random seed")->required();
  o.opts.emplace("--seed", opt);
  return opt;
}

std::string fmt(const char *f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g17(double v) { return fmt("%.17g", v); }

std::string read_text(const std::string &path, const std::string &flag)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw usage_error(flag + ": cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

/// Resolves the RF parameters shared by the component commands.
struct RfParams
{
  double f0, z0, z_eta, loss;
  components::CrossoverParams xo;
  double fstart, fstop;
  std::size_t points;

  components::CouplerParams coupler() const
  {
    components::CouplerParams p;
    p.f0 = f0;
    p.z0 = z0;
    p.z_eta = z_eta;
    p.loss_db = loss;
    p.crossover = xo;
    return p;
  }

  net::FrequencyGrid grid() const { return {f0, fstart, fstop, points}; }

  void record(json &j) const
  {
    j["f0_hz"] = f0;
    j["z0_ohm"] = z0;
    j["z_eta_ohm"] = z_eta;
    j["loss_db_per_wavelength"] = loss;
    j["crossover"] = {{"z_x", xo.z_x}, {"z_y", xo.z_y}, {"theta_x_deg", xo.theta_x}, {"theta_y_deg", xo.theta_y}};
    j["f_start_hz"] = fstart;
    j["f_stop_hz"] = fstop;
    j["points"] = points;
  }
};

struct RfFlags
{
  double z_eta = 50.0, loss = 0.0;
  components::CrossoverParams xo;
};

void add_component_flags(CLI::App *c, Common &o, RfFlags &r)
{
  o.opts.emplace("--z-eta", c->add_option("--z-eta", r.z_eta, "Impedance of the relocated ring sections [ohm]")->capture_default_str());
  o.opts.emplace("--loss", c->add_option("--loss", r.loss, "Line loss [dB per wavelength]")->capture_default_str());
  o.opts.emplace("--zx", c->add_option("--zx", r.xo.z_x, "Crossover outer-branch impedance [ohm]")->capture_default_str());
  o.opts.emplace("--zy", c->add_option("--zy", r.xo.z_y, "Crossover inner-line impedance [ohm]")->capture_default_str());
  o.opts.emplace("--thetax", c->add_option("--thetax", r.xo.theta_x, "Crossover outer section length [deg]")->capture_default_str());
  o.opts.emplace("--thetay", c->add_option("--thetay", r.xo.theta_y, "Crossover inner line length [deg]")->capture_default_str());
}

RfParams resolve_rf(Common &o, const RfFlags &r)
{
  RfParams p;
  p.f0 = o.pick("--f0", o.f0, "f0");
  p.z0 = o.pick("--z0", o.z0, "z0");
  p.z_eta = o.pick("--z-eta", r.z_eta, "z_eta");
  p.loss = o.pick("--loss", r.loss, "loss_db");
  p.xo.z_x = o.pick("--zx", r.xo.z_x, "z_x");
  p.xo.z_y = o.pick("--zy", r.xo.z_y, "z_y");
  p.xo.theta_x = o.pick("--thetax", r.xo.theta_x, "theta_x");
  p.xo.theta_y = o.pick("--thetay", r.xo.theta_y, "theta_y");
  p.fstart = o.pick("--fstart", o.fstart, "f_start");
  p.fstop = o.pick("--fstop", o.fstop, "f_stop");
  p.points = static_cast<std::size_t>(o.given("--points") ? static_cast<std::int64_t>(o.points)
                                                          : o.cfg.get_int("points", static_cast<std::int64_t>(o.points)));
  try
  {
    p.coupler().check();
    if (p.points >= 2)
      p.grid().check();
  }
  catch (const invalid_argument &e)
  {
    throw usage_error(e.what());
  }
  return p;
}

components::Criteria comparator_criteria()
{
  components::Criteria c;
  c.min_return_loss_db = 10.0;
  c.min_isolation_db = 10.0;
  return c;
}

/// Grid that contains f0 exactly even when the requested points miss it.
net::SweepSParams sweep_with_f0(const netlist::NetworkGraph &g, const RfParams &p)
{
  std::vector<double> f = p.grid().frequencies();
  bool has = false;
  for (double v : f)
    has = has || std::abs(v - p.f0) <= 1e-9 * p.f0;
  if (!has && p.f0 > p.fstart && p.f0 < p.fstop)
  {
    f.push_back(p.f0);
    std::sort(f.begin(), f.end());
  }
  return sweep::run(g, f, p.f0, p.z0);
}

// ------------------------------------------------------------------------
// Subcommands

void cmd_component_gen(Run &run, Common &o, const RfFlags &rf, const std::string &kind)
{
  o.load_config(run);
  const RfParams p = resolve_rf(o, rf);
  p.record(run.config);
  run.config["kind"] = kind;
  netlist::NetworkGraph g;
  if (kind == "crossover")
    g = components::gen_crossover(p.xo, p.f0, p.z0, p.loss);
  else if (kind == "pt-coupler")
    g = components::gen_pt_coupler(p.coupler());
  else if (kind == "ratrace")
    g = components::gen_conventional_ratrace(p.f0, p.z0, p.loss);
  else if (kind == "comparator")
    g = components::gen_comparator(p.coupler());
  run.write(kind + ".net", netlist::serialize(g));
}

void cmd_netlist_sim(Run &run, Common &o, const std::string &file)
{
  o.load_config(run);
  RfFlags none;
  const RfParams p = resolve_rf(o, none);
  run.config["f0_hz"] = p.f0;
  run.config["z_ref_ohm"] = p.z0;
  run.config["f_start_hz"] = p.fstart;
  run.config["f_stop_hz"] = p.fstop;
  run.config["points"] = p.points;
  run.inputs.push_back(file);
  const auto res = netlist::parse(read_text(file, "netlist"));
  for (const auto &d : res.diagnostics)
    std::fprintf(stderr, "%s: %s\n", file.c_str(), d.str().c_str());
  if (!res.ok())
    throw usage_error("netlist " + file + " has errors");
  const auto s = sweep::run(*res.graph, p.grid(), p.z0);
  const std::string stem = fs::path(file).stem().string();
  run.write(stem + ".s" + std::to_string(s.ports) + "p", touchstone::write(s));
}

void cmd_crossover_solve(Run &run, Common &o, const RfFlags &rf)
{
  o.load_config(run);
  const RfParams p = resolve_rf(o, rf);
  run.config["f0_hz"] = p.f0;
  run.config["z0_ohm"] = p.z0;
  const auto cands = components::solve_crossover_conditions(p.z0);
  std::string csv = "z_x_ohm,z_y_ohm,theta_x_deg,theta_y_deg,thru_db,leakage_db\n";
  for (const auto &c : cands)
    csv += g17(c.params.z_x) + "," + g17(c.params.z_y) + "," + g17(c.params.theta_x) + "," + g17(c.params.theta_y) +
           "," + g17(c.verdict.thru_db) + "," + g17(c.verdict.leakage_db) + "\n";
  run.write("crossover_candidates.csv", csv);

  std::string rep;
  rep += "verified candidates: " + std::to_string(cands.size()) + "\n";
  const auto &first = cands.front();
  rep += "first: Zx=" + fmt("%.4f", first.params.z_x) + " Zy=" + fmt("%.4f", first.params.z_y) +
         " theta_x=" + fmt("%.4f", first.params.theta_x) + " theta_y=" + fmt("%.4f", first.params.theta_y) +
         " thru=" + fmt("%.6f", first.verdict.thru_db) + " dB leakage=" + fmt("%.2f", first.verdict.leakage_db) +
         " dB\n";
  rep += "first: accumulated thru phase at f0 = " +
         fmt("%.4f", components::accumulated_thru_phase_deg(first.params, p.f0, p.z0)) + " deg\n";
  const components::CrossoverParams ref = p.xo;
  const auto res = components::printed_condition_residuals(ref, p.z0);
  const auto ver = components::verify_crossover(ref, p.f0, p.z0);
  rep += "evaluated point: Zx=" + fmt("%g", ref.z_x) + " Zy=" + fmt("%g", ref.z_y) + " theta_x=" +
         fmt("%g", ref.theta_x) + " theta_y=" + fmt("%g", ref.theta_y) + "\n";
  rep += "  closed-form matching residual: " + fmt("%.6g", res.matching) + "\n";
  rep += "  closed-form isolation residual: " + fmt("%.6g", res.isolation) + "\n";
  rep += "  network model: thru=" + fmt("%.6f", ver.thru_db) + " dB leakage=" + fmt("%.2f", ver.leakage_db) +
         " dB verdict=" + (ver.pass ? "pass" : "fail") + "\n";
  rep += "  accumulated thru phase at f0 = " + fmt("%.4f", components::accumulated_thru_phase_deg(ref, p.f0, p.z0)) +
         " deg\n";
  run.write("crossover_report.txt", rep);
  std::fputs(rep.c_str(), stdout);
}

void cmd_comparator_report(Run &run, Common &o, const RfFlags &rf)
{
  o.load_config(run);
  const RfParams p = resolve_rf(o, rf);
  p.record(run.config);
  const auto s = sweep_with_f0(components::gen_comparator(p.coupler()), p);
  const auto crit = comparator_criteria();
  const auto rep = components::metrics(s, components::comparator_layout(), crit, p.f0);
  run.write("comparator.s8p", touchstone::write(s));
  run.write("comparator_metrics.csv", components::metrics_csv(rep));
  const std::string sum = components::metrics_summary(rep, crit);
  run.write("comparator_summary.txt", sum);
  std::fputs(sum.c_str(), stdout);
}

std::string cut_csv(const array::Cut &c)
{
  std::string s = "theta_deg,gain_db\n";
  for (std::size_t i = 0; i < c.theta_deg.size(); ++i)
    s += fmt("%.4f", c.theta_deg[i]) + "," + fmt("%.6f", std::max(c.gain_db[i], -300.0)) + "\n";
  return s;
}

struct PatternFlags
{
  std::string comparator = "ideal";
  double amp_imbalance = 0.0, phase_imbalance = 0.0;
};

/// Sum and difference cuts in both principal planes with their metrics.
void write_patterns(Run &run, Common &o, const PatternFlags &pf, const std::string &prefix)
{
  doa::Scenario base;
  const array::ArrayGeometry g = doa::scenario_from_config(o.cfg, base).geometry;
  run.config["f_op_hz"] = g.f_op;
  run.config["d_az_lambda"] = g.d_az / g.lambda();
  run.config["d_el_lambda"] = g.d_el / g.lambda();
  run.config["element"] = g.element == array::ElementModel::isotropic ? "isotropic" : "cosine";
  run.config["q"] = g.q;
  run.config["comparator"] = pf.comparator;
  array::Transfer t = array::ideal_transfer();
  if (pf.comparator == "network")
  {
    const double f0 = o.pick("--f0", o.f0, "f0");
    run.config["comparator_f0_hz"] = f0;
    const auto s = sweep::run(components::gen_comparator(f0, 50.0, 50.0, o.cfg.get("loss_db", 0.0)),
                              std::vector<double>{g.f_op}, f0, 50.0);
    t = array::comparator_transfer(s, g.f_op);
  }
  else if (pf.comparator != "ideal")
    throw usage_error("--comparator: expected ideal or network");
  if (pf.amp_imbalance > 0.0 || pf.phase_imbalance > 0.0)
  {
    if (!o.given("--seed"))
      throw usage_error("--seed: required when imbalance is injected");
    run.seed = o.seed;
    run.config["amp_imbalance_db"] = pf.amp_imbalance;
    run.config["phase_imbalance_deg"] = pf.phase_imbalance;
    rng r(o.seed);
    t = array::perturb_transfer(t, pf.amp_imbalance, pf.phase_imbalance, r);
  }
  const auto grid = array::theta_grid();
  std::string rep = "cut,channel,hpbw_deg,sll_db,null_depth_db,peak_theta_deg\n";
  struct Item
  {
    double phi;
    array::Channel ch;
    const char *name;
  };
  for (const Item it : {Item{0.0, array::Channel::sum, "sum"}, Item{0.0, array::Channel::az, "az"},
                        Item{90.0, array::Channel::sum, "sum"}, Item{90.0, array::Channel::el, "el"},
                        Item{0.0, array::Channel::del, "del"}, Item{90.0, array::Channel::del, "del"}})
  {
    const auto cut = array::cut_pattern(t, g, it.phi, it.ch, grid);
    const std::string tag = "phi" + fmt("%g", it.phi) + "_" + it.name;
    run.write(prefix + tag + ".csv", cut_csv(cut));
    const double nd = -array::level_at(cut.theta_deg, cut.gain_db, 0.0);
    if (it.ch == array::Channel::sum)
    {
      const auto m = array::pattern_metrics(cut);
      rep += tag + "," + it.name + "," + fmt("%.3f", m.hpbw_deg) + "," + fmt("%.3f", m.sll_db) + "," +
             fmt("%.3f", m.null_depth_db) + "," + fmt("%.3f", m.peak_theta_deg) + "\n";
    }
    else
      rep += tag + "," + it.name + ",,,"+ fmt("%.3f", std::min(nd, 300.0)) + ",\n";
  }
  run.write(prefix + "metrics.csv", rep);
  std::fputs(rep.c_str(), stdout);
}

doa::Scenario resolve_scenario(Run &run, Common &o)
{
  o.load_config(run);
  doa::Scenario base;
  base.impairments = doa::moderate_impairments(o.seed);
  doa::Scenario s;
  try
  {
    s = doa::scenario_from_config(o.cfg, base);
  }
  catch (const invalid_argument &e)
  {
    throw usage_error(std::string("--config: ") + e.what());
  }
  s.impairments.seed = o.seed; // the flag is mandatory, so it always wins
  if (o.given("--distance"))
    s.distance = o.distance;
  if (o.given("--pitch"))
    s.pitch = o.pitch;
  try
  {
    s.check();
  }
  catch (const invalid_argument &e)
  {
    throw usage_error(e.what());
  }
  run.seed = o.seed;
  auto &c = run.config;
  c["distance_m"] = s.distance;
  c["pitch_m"] = s.pitch;
  c["grid_n"] = s.grid_n;
  c["include_origin"] = s.include_origin;
  c["f_op_hz"] = s.geometry.f_op;
  c["d_az_lambda"] = s.geometry.d_az / s.geometry.lambda();
  c["d_el_lambda"] = s.geometry.d_el / s.geometry.lambda();
  c["element"] = s.geometry.element == array::ElementModel::isotropic ? "isotropic" : "cosine";
  c["q"] = s.geometry.q;
  const auto &m = s.impairments;
  c["sigma_amp_db"] = m.sigma_amp_db;
  c["sigma_phase_deg"] = m.sigma_phase_deg;
  c["snr_db"] = std::isinf(m.snr_db) ? json("inf") : json(m.snr_db);
  c["fixed_channel_errors"] = m.fixed_channel_errors;
  c["comparator"] = m.comparator ? "network" : "ideal";
  if (m.multipath)
    c["multipath"] = {{"amp", m.multipath->rel_amp},
                      {"excess_m", m.multipath->excess_path_m},
                      {"phase_deg", m.multipath->reflection_phase_deg}};
  else
    c["multipath"] = nullptr;
  return s;
}

void cmd_doa_dataset(Run &run, Common &o)
{
  const auto s = resolve_scenario(run, o);
  const auto ds = doa::gen_dataset(s);
  std::size_t flagged = 0;
  for (const auto &d : ds)
    flagged += d.ok() ? 0 : 1;
  run.config["samples"] = ds.size();
  run.config["flagged"] = flagged;
  run.write("dataset.csv", doa::dataset_csv(ds));
  std::printf("samples: %zu, flagged: %zu\n", ds.size(), flagged);
}

void cmd_doa_estimate(Run &run, Common &o, double az_deg, double el_deg)
{
  const auto s = resolve_scenario(run, o);
  run.config["theta_az_deg"] = az_deg;
  run.config["theta_el_deg"] = el_deg;
  rng r(mix_seed(o.seed, 0));
  std::string csv = "theta_az_true_deg,theta_el_true_deg,theta_az_est_deg,theta_el_est_deg,gamma_az,gamma_el,"
                    "quadrature_az,quadrature_el,flags\n";
  std::string row = g17(az_deg) + "," + g17(el_deg) + ",";
  try
  {
    const auto e = doa::estimate(s.geometry, deg2rad(az_deg), deg2rad(el_deg), s.impairments, r);
    row += g17(rad2deg(e.az)) + "," + g17(rad2deg(e.el)) + "," + g17(e.gamma_az) + "," + g17(e.gamma_el) + "," +
           g17(e.quad_az) + "," + g17(e.quad_el) + ",ok\n";
    std::printf("theta_az = %.6f deg, theta_el = %.6f deg\n", rad2deg(e.az), rad2deg(e.el));
  }
  catch (const sum_null &)
  {
    row += "nan,nan,nan,nan,nan,nan,sum_null\n";
  }
  catch (const out_of_unambiguous_range &)
  {
    row += "nan,nan,nan,nan,nan,nan,out_of_range\n";
  }
  run.write("estimate.csv", csv + row);
  if (row.find(",ok\n") == std::string::npos)
    throw out_of_unambiguous_range("estimate flagged: " + row.substr(row.rfind(',') + 1));
}

std::vector<doa::DoASample> load_dataset(Run &run, const std::string &path)
{
  run.inputs.push_back(path);
  try
  {
    return doa::parse_dataset_csv(read_text(path, "--data"));
  }
  catch (const parse_error &e)
  {
    throw usage_error(std::string("--data: ") + e.what());
  }
}

struct DnnFlags
{
  std::string data, model = "model.mlp";
  std::string activation = "tanh";
  double lr = 1e-3, split = 0.9;
};

dnn::TrainConfig resolve_train(Run &run, Common &o, const DnnFlags &f)
{
  dnn::TrainConfig c;
  c.seed = o.seed;
  c.iterations = static_cast<std::size_t>(o.given("--iters") ? static_cast<std::int64_t>(o.iters)
                                                             : o.cfg.get_int("iterations", static_cast<std::int64_t>(o.iters)));
  c.lr = o.pick("--lr", f.lr, "lr");
  c.split = o.pick("--split", f.split, "split");
  c.beta1 = o.cfg.get("beta1", c.beta1);
  c.beta2 = o.cfg.get("beta2", c.beta2);
  c.eps = o.cfg.get("eps", c.eps);
  try
  {
    c.hidden = dnn::activation_from_string(o.given("--activation") ? f.activation : o.cfg.get("activation", f.activation));
    c.check();
  }
  catch (const error &e)
  {
    throw usage_error(e.what());
  }
  run.seed = o.seed;
  run.config["iterations"] = c.iterations;
  run.config["lr"] = c.lr;
  run.config["beta1"] = c.beta1;
  run.config["beta2"] = c.beta2;
  run.config["eps"] = c.eps;
  run.config["split"] = c.split;
  run.config["activation"] = dnn::to_string(c.hidden);
  return c;
}

std::string train_report_text(const dnn::TrainReport &r)
{
  std::string s;
  s += "train samples: " + std::to_string(r.n_train) + "\n";
  s += "validation samples: " + std::to_string(r.n_val) + "\n";
  s += "flagged samples skipped: " + std::to_string(r.n_flagged) + "\n";
  s += "final training loss: " + fmt("%.6e", r.final_train_loss) + " rad^2\n";
  s += "validation loss (corrected): " + fmt("%.6e", r.val_loss) + " rad^2\n";
  s += "validation loss (uncorrected): " + fmt("%.6e", r.val_loss_uncorrected) + " rad^2\n";
  s += "position error D*sqrt(loss): " + fmt("%.4f", r.position_error_m() * 1e3) + " mm at D = " +
       fmt("%.4g", r.mean_distance) + " m\n";
  return s;
}

void cmd_dnn_train(Run &run, Common &o, const DnnFlags &f)
{
  std::vector<doa::DoASample> data;
  if (!f.data.empty())
  {
    o.load_config(run);
    data = load_dataset(run, f.data);
  }
  else
  {
    const auto s = resolve_scenario(run, o);
    data = doa::gen_dataset(s);
    run.config["dataset"] = "generated";
  }
  const auto cfg = resolve_train(run, o, f);
  auto [m, rep] = dnn::train(data, cfg);
  run.write(f.model, dnn::save(m));
  run.write("loss.csv", dnn::loss_csv(rep.train_loss));
  const std::string txt = train_report_text(rep);
  run.write("train_report.txt", txt);
  std::fputs(txt.c_str(), stdout);
  std::printf("training time: %.2f s\n", rep.seconds);
}

std::string eval_csv(const std::vector<doa::DoASample> &data, const dnn::EvalReport &r)
{
  std::string s = "index,x_m,y_m,D_m,theta_az_true_deg,theta_el_true_deg,theta_az_est_deg,theta_el_est_deg,"
                  "theta_az_dnn_deg,theta_el_dnn_deg,x_est_m,y_est_m,x_dnn_m,y_dnn_m\n";
  for (std::size_t k = 0; k < r.index.size(); ++k)
  {
    const auto &d = data[r.index[k]];
    s += std::to_string(d.index) + "," + g17(d.x) + "," + g17(d.y) + "," + g17(d.distance) + "," +
         g17(rad2deg(d.az_true)) + "," + g17(rad2deg(d.el_true)) + "," + g17(rad2deg(d.az_est)) + "," +
         g17(rad2deg(d.el_est)) + "," + g17(rad2deg(r.az_corr[k])) + "," + g17(rad2deg(r.el_corr[k])) + "," +
         g17(d.distance * std::tan(d.az_est)) + "," + g17(d.distance * std::tan(d.el_est)) + "," +
         g17(d.distance * std::tan(r.az_corr[k])) + "," + g17(d.distance * std::tan(r.el_corr[k])) + "\n";
  }
  return s;
}

std::string eval_report_text(const dnn::EvalReport &r)
{
  std::string s;
  s += "samples: " + std::to_string(r.index.size()) + "\n";
  s += "rms error before: az " + fmt("%.6f", rad2deg(r.rms_az_before)) + " deg, el " +
       fmt("%.6f", rad2deg(r.rms_el_before)) + " deg\n";
  s += "rms error after:  az " + fmt("%.6f", rad2deg(r.rms_az_after)) + " deg, el " +
       fmt("%.6f", rad2deg(r.rms_el_after)) + " deg\n";
  s += "position error before: " + fmt("%.4f", r.position_before_m() * 1e3) + " mm\n";
  s += "position error after:  " + fmt("%.4f", r.position_after_m() * 1e3) + " mm\n";
  return s;
}

void cmd_dnn_eval(Run &run, Common &o, const DnnFlags &f)
{
  o.load_config(run);
  if (f.data.empty())
    throw usage_error("--data: required");
  run.inputs.push_back(f.model);
  dnn::Mlp m;
  try
  {
    m = dnn::load(read_text(f.model, "--model"));
  }
  catch (const parse_error &e)
  {
    throw usage_error(std::string("--model: ") + e.what());
  }
  const auto data = load_dataset(run, f.data);
  const double dist = o.given("--distance") ? o.distance : (data.empty() ? o.distance : data.front().distance);
  run.config["distance_m"] = dist;
  const auto r = dnn::evaluate(m, data, dist);
  run.write("eval.csv", eval_csv(data, r));
  const std::string txt = eval_report_text(r);
  run.write("eval_report.txt", txt);
  std::fputs(txt.c_str(), stdout);
}

// ------------------------------------------------------------------------
// Figure data

void figure5(Run &run, Common &o, const RfFlags &rf)
{
  o.load_config(run);
  const RfParams p = resolve_rf(o, rf);
  p.record(run.config);
  const auto s = sweep_with_f0(components::gen_pt_coupler(p.coupler()), p);
  using namespace components::port;
  std::string mag = "freq_hz,S_aa_db,S_ba_db,S_ca_db,S_da_db,S_cc_db,S_bc_db,S_dc_db\n";
  std::string ph = "freq_hz,sum_drive_phase_d_minus_b_deg,difference_drive_phase_d_minus_b_deg\n";
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    const auto &m = s.matrices[i];
    const std::string f = fmt("%.9g", s.freqs[i]);
    auto db = [&](std::size_t r, std::size_t c) { return fmt("%.6f", std::max(mag_db(m(r, c)), -300.0)); };
    mag += f + "," + db(a, a) + "," + db(b, a) + "," + db(c, a) + "," + db(d, a) + "," + db(c, c) + "," + db(b, c) +
           "," + db(d, c) + "\n";
    ph += f + "," + fmt("%.6f", wrap_deg(phase_deg(m(d, a)) - phase_deg(m(b, a)))) + "," +
          fmt("%.6f", wrap_deg(phase_deg(m(d, c)) - phase_deg(m(b, c)))) + "\n";
  }
  run.write("fig5_magnitude.csv", mag);
  run.write("fig5_phase.csv", ph);
  run.write("pt_coupler.s4p", touchstone::write(s));
  components::Criteria crit;
  const auto rep = components::metrics(s, components::coupler_layout(), crit, p.f0);
  run.write("fig5_metrics.csv", components::metrics_csv(rep));
  const std::string sum = components::metrics_summary(rep, crit);
  run.write("fig5_summary.txt", sum);
  std::fputs(sum.c_str(), stdout);
}

void figure7(Run &run, Common &o, const RfFlags &rf)
{
  o.load_config(run);
  const RfParams p = resolve_rf(o, rf);
  p.record(run.config);
  const auto s = sweep_with_f0(components::gen_comparator(p.coupler()), p);
  const std::array<const char *, 4> in{"A", "B", "C", "D"}, out{"sum", "az", "el", "del"};
  std::string tx = "freq_hz", rl = "freq_hz", ph = "freq_hz";
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      tx += std::string(",") + out[r] + "_" + in[c] + "_db";
  for (const char *lab : components::comparator_ports)
    rl += std::string(",") + lab + "_db";
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 1; c < 4; ++c)
      ph += std::string(",") + out[r] + "_" + in[c] + "_minus_A_deg";
  tx += "\n";
  rl += "\n";
  ph += "\n";
  for (std::size_t i = 0; i < s.size(); ++i)
  {
    const auto &m = s.matrices[i];
    const std::string f = fmt("%.9g", s.freqs[i]);
    tx += f;
    rl += f;
    ph += f;
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c)
        tx += "," + fmt("%.6f", mag_db(m(4 + r, c)));
    for (Eigen::Index k = 0; k < 8; ++k)
      rl += "," + fmt("%.6f", std::max(mag_db(m(k, k)), -300.0));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 1; c < 4; ++c)
        ph += "," + fmt("%.6f", wrap_deg(phase_deg(m(4 + r, c)) - phase_deg(m(4 + r, 0))));
    tx += "\n";
    rl += "\n";
    ph += "\n";
  }
  run.write("fig7_transmission.csv", tx);
  run.write("fig7_return_loss.csv", rl);
  run.write("fig7_phase.csv", ph);
  run.write("comparator.s8p", touchstone::write(s));
  const auto crit = comparator_criteria();
  const auto rep = components::metrics(s, components::comparator_layout(), crit, p.f0);
  run.write("fig7_metrics.csv", components::metrics_csv(rep));
  const std::string sum = components::metrics_summary(rep, crit);
  run.write("fig7_summary.txt", sum);
  std::fputs(sum.c_str(), stdout);
}

void figure12(Run &run, Common &o, const DnnFlags &f)
{
  doa::Scenario s = resolve_scenario(run, o);
  const auto cfg = resolve_train(run, o, f);
  const std::vector<double> test_d{0.66, 0.86};
  run.config["test_distances_m"] = test_d;
  const auto train_set = doa::gen_dataset(s);
  auto [m, rep] = dnn::train(train_set, cfg);
  run.write("fig12_model.mlp", dnn::save(m));
  run.write("fig12_loss.csv", dnn::loss_csv(rep.train_loss));
  std::string txt = "training distance " + fmt("%.4g", s.distance) + " m\n" + train_report_text(rep);
  const auto ev0 = dnn::evaluate(m, train_set, s.distance);
  run.write("fig12_D" + fmt("%.2f", s.distance) + ".csv", eval_csv(train_set, ev0));
  txt += "\nD = " + fmt("%.2f", s.distance) + " m (training scenario)\n" + eval_report_text(ev0);
  for (std::size_t k = 0; k < test_d.size(); ++k)
  {
    doa::Scenario t = s;
    t.distance = test_d[k];
    t.noise_stream = k + 1;
    const auto data = doa::gen_dataset(t);
    const auto ev = dnn::evaluate(m, data, t.distance);
    run.write("fig12_D" + fmt("%.2f", t.distance) + ".csv", eval_csv(data, ev));
    txt += "\nD = " + fmt("%.2f", t.distance) + " m\n" + eval_report_text(ev);
  }
  run.write("fig12_report.txt", txt);
  std::fputs(txt.c_str(), stdout);
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"monopulse-lab: monopulse comparator, array and direction-finding workbench"};
  app.set_version_flag("--version", std::string(MLAB_VERSION));
  app.require_subcommand(1);
  Common o;
  RfFlags rf;
  PatternFlags pf;
  DnnFlags df;
  std::string kind, netfile;
  double az = 0.0, el = 0.0;
  int figure = 0;
  std::function<void(Run &)> action;
  std::string command;

  auto *comp = app.add_subcommand("component", "Component netlists")->require_subcommand(1);
  auto *gen = comp->add_subcommand("gen", "Write a component netlist");
  gen->add_option("kind", kind, "crossover | pt-coupler | ratrace | comparator")
      ->required()
      ->check(CLI::IsMember({"crossover", "pt-coupler", "ratrace", "comparator"}));
  add_out(gen, o);
  add_rf(gen, o);
  add_component_flags(gen, o, rf);
  gen->callback([&] {
    command = "component gen";
    action = [&](Run &r) { cmd_component_gen(r, o, rf, kind); };
  });

  auto *nl = app.add_subcommand("netlist", "Netlist simulation")->require_subcommand(1);
  auto *sim = nl->add_subcommand("sim", "Sweep a netlist and write Touchstone data");
  sim->add_option("file", netfile, "Netlist file")->required();
  add_out(sim, o);
  add_rf(sim, o);
  add_grid(sim, o);
  sim->callback([&] {
    command = "netlist sim";
    action = [&](Run &r) {
      if (!fs::exists(netfile))
        throw usage_error("netlist: file not found: " + netfile);
      cmd_netlist_sim(r, o, netfile);
    };
  });

  auto *xo = app.add_subcommand("crossover", "Crossover design")->require_subcommand(1);
  auto *solve = xo->add_subcommand("solve", "Scan for crossover designs and evaluate a given point");
  add_out(solve, o);
  add_rf(solve, o);
  add_component_flags(solve, o, rf);
  solve->callback([&] {
    command = "crossover solve";
    action = [&](Run &r) { cmd_crossover_solve(r, o, rf); };
  });

  auto *cmp = app.add_subcommand("comparator", "Comparator network")->require_subcommand(1);
  auto *report = cmp->add_subcommand("report", "Sweep the comparator and judge bandwidth");
  add_out(report, o);
  add_rf(report, o);
  add_grid(report, o);
  add_component_flags(report, o, rf);
  report->callback([&] {
    command = "comparator report";
    action = [&](Run &r) { cmd_comparator_report(r, o, rf); };
  });

  auto *arr = app.add_subcommand("array", "Array patterns")->require_subcommand(1);
  auto *pat = arr->add_subcommand("pattern", "Principal-plane cuts of the four channels");
  add_out(pat, o);
  o.opts.emplace("--f0", pat->add_option("--f0", o.f0, "Comparator design frequency [Hz] (network mode)"));
  pat->add_option("--comparator", pf.comparator, "ideal | network")->capture_default_str();
  pat->add_option("--amp-imbalance", pf.amp_imbalance, "Uniform amplitude error bound [dB]");
  pat->add_option("--phase-imbalance", pf.phase_imbalance, "Uniform phase error bound [deg]");
  o.opts.emplace("--seed", pat->add_option("--seed", o.seed, "Random seed (needed with imbalance)"));
  pat->callback([&] {
    command = "array pattern";
    action = [&](Run &r) {
      o.load_config(r);
      write_patterns(r, o, pf, "pattern_");
    };
  });

  auto *doa_cmd = app.add_subcommand("doa", "Direction finding")->require_subcommand(1);
  auto *ds = doa_cmd->add_subcommand("dataset", "Generate the target-scan dataset");
  auto *est = doa_cmd->add_subcommand("estimate", "Estimate one target direction");
  for (auto *c : {ds, est})
  {
    add_out(c, o);
    add_seed(c, o);
    o.opts.emplace("--distance", c->add_option("--distance", o.distance, "Target range [m]"));
    o.opts.emplace("--pitch", c->add_option("--pitch", o.pitch, "Grid pitch [m]"));
  }
  est->add_option("--az", az, "True azimuth [deg]")->required();
  est->add_option("--el", el, "True elevation [deg]")->required();
  ds->callback([&] {
    command = "doa dataset";
    action = [&](Run &r) { cmd_doa_dataset(r, o); };
  });
  est->callback([&] {
    command = "doa estimate";
    action = [&](Run &r) { cmd_doa_estimate(r, o, az, el); };
  });

  auto *dnn_cmd = app.add_subcommand("dnn", "Angle-correction network")->require_subcommand(1);
  auto *tr = dnn_cmd->add_subcommand("train", "Train on a dataset (generated from the seed when --data is absent)");
  auto *ev = dnn_cmd->add_subcommand("eval", "Evaluate a trained model on a dataset");
  add_out(tr, o);
  add_seed(tr, o);
  tr->add_option("--data", df.data, "Dataset CSV");
  tr->add_option("--model", df.model, "Model file name inside --out")->capture_default_str();
  o.opts.emplace("--iters", tr->add_option("--iters", o.iters, "Adam iterations")->capture_default_str());
  o.opts.emplace("--lr", tr->add_option("--lr", df.lr, "Learning rate")->capture_default_str());
  o.opts.emplace("--split", tr->add_option("--split", df.split, "Training fraction")->capture_default_str());
  o.opts.emplace("--activation", tr->add_option("--activation", df.activation, "tanh | relu")->capture_default_str());
  o.opts.emplace("--distance", tr->add_option("--distance", o.distance, "Target range when generating [m]"));
  o.opts.emplace("--pitch", tr->add_option("--pitch", o.pitch, "Grid pitch when generating [m]"));
  tr->callback([&] {
    command = "dnn train";
    action = [&](Run &r) { cmd_dnn_train(r, o, df); };
  });
  add_out(ev, o);
  ev->add_option("--model", df.model, "Model file")->required();
  ev->add_option("--data", df.data, "Dataset CSV")->required();
  o.opts.emplace("--distance", ev->add_option("--distance", o.distance, "Range for position errors [m]"));
  ev->callback([&] {
    command = "dnn eval";
    action = [&](Run &r) { cmd_dnn_eval(r, o, df); };
  });

  auto *rep = app.add_subcommand("repro", "Figure data")->require_subcommand(1);
  auto *fig = rep->add_subcommand("figure", "Write the data behind a figure: 5, 7, 10 or 12");
  fig->add_option("number", figure, "5 | 7 | 10 | 12")->required()->check(CLI::IsMember({5, 7, 10, 12}));
  add_out(fig, o);
  add_rf(fig, o);
  add_grid(fig, o);
  add_component_flags(fig, o, rf);
  o.opts.emplace("--seed", fig->add_option("--seed", o.seed, "Random seed (figure 12)"));
  o.opts.emplace("--distance", fig->add_option("--distance", o.distance, "Training range [m] (figure 12)"));
  o.opts.emplace("--pitch", fig->add_option("--pitch", o.pitch, "Grid pitch [m] (figure 12)"));
  o.opts.emplace("--iters", fig->add_option("--iters", o.iters, "Adam iterations (figure 12)"));
  fig->callback([&] {
    command = "repro figure";
    action = [&](Run &r) {
      r.config["figure"] = figure;
      switch (figure)
      {
      case 5: figure5(r, o, rf); break;
      case 7: figure7(r, o, rf); break;
      case 10:
        o.load_config(r);
        write_patterns(r, o, pf, "fig10_");
        break;
      case 12:
        if (!o.given("--seed"))
          throw usage_error("--seed: required for figure 12");
        figure12(r, o, df);
        break;
      }
    };
  });

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForVersion &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  }

  Run run;
  run.command = command;
  run.out = o.out;
  try
  {
    action(run);
    o.warn_unused();
    run.finish();
    return 0;
  }
  catch (const usage_error &e)
  {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  }
  catch (const parse_error &e)
  {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  }
  catch (const invalid_argument &e)
  {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
