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

// Line-oriented netlist language for transmission-line networks.
//
//   # comment
//   node <id> [<id> ...]
//   port <label> <node>
//   tline <id> <node1> <node2> z=<ohms> theta=<deg at f0> [loss=<dB per 360 deg>]
//   stub <id> <node> z=<ohms> theta=<deg at f0> term=open|short
//
// Identifiers are case-sensitive. Nodes, ports (by label) and components
// are kept in natural order ("P2" before "P10"); the port order is the
// port numbering of the simulated S-matrix.

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "netkernel.hpp"

namespace mlab::netlist
{

enum class ComponentKind
{
  tline,
  stub
};

struct Component
{
  std::string id;
  ComponentKind kind = ComponentKind::tline;
  net::TLineSection section;
  std::string node1;
  std::string node2; // empty for stubs
  net::Termination term = net::Termination::open;
  std::size_t line = 0; // source line, 0 when built in code

  bool operator==(const Component &o) const
  {
    return id == o.id && kind == o.kind && section == o.section && node1 == o.node1 && node2 == o.node2 &&
           (kind == ComponentKind::tline || term == o.term);
  }
};

struct Port
{
  std::string label;
  std::string node;
  std::size_t line = 0;

  bool operator==(const Port &o) const { return label == o.label && node == o.node; }
};

struct NodeDecl
{
  std::string id;
  std::size_t line = 0;

  bool operator==(const NodeDecl &o) const { return id == o.id; }
};

struct NetworkGraph
{
  std::vector<NodeDecl> nodes;
  std::vector<Port> ports;
  std::vector<Component> components;

  bool operator==(const NetworkGraph &) const = default;

  std::size_t port_count() const { return ports.size(); }

  // Index of a port label in S-matrix numbering.
  std::size_t port_index(std::string_view label) const
  {
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (ports[i].label == label)
        return i;
    throw port_out_of_range("no port labelled " + std::string(label));
  }
};

enum class Severity
{
  error,
  warning
};

struct Diagnostic
{
  std::size_t line = 1;
  Severity kind = Severity::error;
  std::string message;

  std::string str() const
  {
    return "line " + std::to_string(line) + ": " + (kind == Severity::error ? "error: " : "warning: ") + message;
  }
};

inline bool has_errors(const std::vector<Diagnostic> &d)
{
  return std::any_of(d.begin(), d.end(), [](const Diagnostic &x) { return x.kind == Severity::error; });
}

struct ParseResult
{
  std::optional<NetworkGraph> graph; // set when no errors were found
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return graph.has_value(); }
};

/// Natural ordering: digit runs compare numerically, the rest bytewise.
inline bool natural_less(std::string_view a, std::string_view b)
{
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size())
  {
    if (is_digit(a[i]) && is_digit(b[k]))
    {
      std::size_t i2 = i, k2 = k;
      while (i2 < a.size() && is_digit(a[i2]))
        ++i2;
      while (k2 < b.size() && is_digit(b[k2]))
        ++k2;
      auto da = a.substr(i, i2 - i), db = b.substr(k, k2 - k);
      while (da.size() > 1 && da.front() == '0')
        da.remove_prefix(1);
      while (db.size() > 1 && db.front() == '0')
        db.remove_prefix(1);
      if (da.size() != db.size())
        return da.size() < db.size();
      if (da != db)
        return da < db;
      if (i2 - i != k2 - k)
        return i2 - i < k2 - k; // fewer leading zeros first
      i = i2;
      k = k2;
      continue;
    }
    if (a[i] != b[k])
      return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[k]);
    ++i;
    ++k;
  }
  return a.size() - i < b.size() - k;
}

/// Sorts nodes, ports and components into canonical order.
inline void canonicalize(NetworkGraph &g)
{
  std::stable_sort(g.nodes.begin(), g.nodes.end(),
                   [](const NodeDecl &x, const NodeDecl &y) { return natural_less(x.id, y.id); });
  std::stable_sort(g.ports.begin(), g.ports.end(),
                   [](const Port &x, const Port &y) { return natural_less(x.label, y.label); });
  std::stable_sort(g.components.begin(), g.components.end(),
                   [](const Component &x, const Component &y) { return natural_less(x.id, y.id); });
}

/// Checks structural invariants. Errors make a graph unusable; warnings
/// flag open ends, unused nodes and islands unreachable from the ports.
inline std::vector<Diagnostic> validate(const NetworkGraph &g)
{
  std::vector<Diagnostic> out;
  auto at = [](std::size_t line) { return std::max<std::size_t>(line, 1); };
  auto err = [&](std::size_t line, std::string msg) { out.push_back({at(line), Severity::error, std::move(msg)}); };
  auto warn = [&](std::size_t line, std::string msg) {
    out.push_back({at(line), Severity::warning, std::move(msg)});
  };

  std::map<std::string, std::size_t> node_line;
  for (const auto &n : g.nodes)
    if (!node_line.emplace(n.id, n.line).second)
      err(n.line, "duplicate id: node '" + n.id + "'");

  std::set<std::string> labels;
  std::map<std::string, std::string> port_on_node;
  for (const auto &p : g.ports)
  {
    if (!labels.insert(p.label).second)
      err(p.line, "duplicate port label '" + p.label + "'");
    if (!node_line.count(p.node))
      err(p.line, "undeclared node '" + p.node + "' in port '" + p.label + "'");
    else if (auto [it, fresh] = port_on_node.emplace(p.node, p.label); !fresh)
      err(p.line, "ports '" + it->second + "' and '" + p.label + "' share node '" + p.node + "'");
  }
  if (g.ports.empty())
    err(1, "network has no external ports");

  std::set<std::string> ids;
  std::map<std::string, std::size_t> terminals;
  for (const auto &c : g.components)
  {
    if (!ids.insert(c.id).second)
      err(c.line, "duplicate id: component '" + c.id + "'");
    const auto &s = c.section;
    if (!(s.z_char > 0.0) || !std::isfinite(s.z_char))
      err(c.line, "component '" + c.id + "': z must be positive");
    if (!(s.theta0_deg > 0.0) || !std::isfinite(s.theta0_deg))
      err(c.line, "component '" + c.id + "': theta must be positive");
    if (!(s.loss_db >= 0.0) || !std::isfinite(s.loss_db))
      err(c.line, "component '" + c.id + "': loss must be non-negative");
    std::vector<const std::string *> ends{&c.node1};
    if (c.kind == ComponentKind::tline)
      ends.push_back(&c.node2);
    for (const auto *n : ends)
    {
      if (!node_line.count(*n))
        err(c.line, "undeclared node '" + *n + "' in component '" + c.id + "'");
      else
        ++terminals[*n];
    }
  }
  if (has_errors(out))
    return out;

  for (const auto &n : g.nodes)
  {
    const std::size_t t = terminals[n.id];
    const bool port = port_on_node.count(n.id) > 0;
    if (t == 0 && !port)
      warn(n.line, "unused node '" + n.id + "'");
    else if (t == 0 && port)
      warn(n.line, "port '" + port_on_node[n.id] + "' has nothing attached at node '" + n.id + "'");
    else if (t == 1 && !port)
      warn(n.line, "open end at node '" + n.id + "'");
  }

  // Connectivity through shared nodes.
  std::map<std::string, std::vector<std::size_t>> by_node;
  for (std::size_t i = 0; i < g.components.size(); ++i)
  {
    by_node[g.components[i].node1].push_back(i);
    if (g.components[i].kind == ComponentKind::tline)
      by_node[g.components[i].node2].push_back(i);
  }
  std::vector<int> island(g.components.size(), -1);
  std::map<std::string, int> node_island;
  int islands = 0;
  auto flood = [&](const std::string &start, int mark) {
    std::vector<std::string> todo{start};
    node_island[start] = mark;
    while (!todo.empty())
    {
      const std::string n = todo.back();
      todo.pop_back();
      for (std::size_t ci : by_node[n])
      {
        if (island[ci] != -1)
          continue;
        island[ci] = mark;
        for (const auto *m : {&g.components[ci].node1, &g.components[ci].node2})
          if (!m->empty() && !node_island.count(*m))
          {
            node_island[*m] = mark;
            todo.push_back(*m);
          }
      }
    }
  };
  for (const auto &p : g.ports)
    if (!node_island.count(p.node))
      flood(p.node, islands++);
  if (islands > 1)
    warn(g.ports.front().line, "external ports lie on " + std::to_string(islands) + " disconnected sub-networks");
  for (std::size_t i = 0; i < g.components.size(); ++i)
    if (island[i] == -1)
    {
      std::string name;
      std::vector<std::string> members;
      flood(g.components[i].node1, islands++);
      for (std::size_t k = 0; k < g.components.size(); ++k)
        if (island[k] == islands - 1)
          members.push_back(g.components[k].id);
      for (const auto &m : members)
        name += (name.empty() ? "" : ", ") + m;
      warn(g.components[i].line, "island not reachable from any port: " + name);
    }
  return out;
}

namespace detail
{
inline std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::optional<double> parse_number(const std::string &s)
{
  if (s.empty())
    return std::nullopt;
  try
  {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v))
      return std::nullopt;
    return v;
  }
  catch (const std::exception &)
  {
    return std::nullopt;
  }
}
} // namespace detail

inline ParseResult parse(std::string_view text)
{
  ParseResult res;
  NetworkGraph g;
  auto &diag = res.diagnostics;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size())
  {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos)
      eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;)
      tok.push_back(t);
    if (tok.empty())
    {
      if (eol == text.size())
        break;
      continue;
    }
    auto err = [&](std::string msg) { diag.push_back({lineno, Severity::error, std::move(msg)}); };
    auto warn = [&](std::string msg) { diag.push_back({lineno, Severity::warning, std::move(msg)}); };

    const std::string &kw = tok[0];
    if (kw == "node")
    {
      if (tok.size() < 2)
        err("node record needs an identifier");
      for (std::size_t i = 1; i < tok.size(); ++i)
        g.nodes.push_back({tok[i], lineno});
    }
    else if (kw == "port")
    {
      if (tok.size() != 3)
        err("port record needs: port <label> <node>");
      else
        g.ports.push_back({tok[1], tok[2], lineno});
    }
    else if (kw == "tline" || kw == "stub")
    {
      const bool is_line = kw == "tline";
      const std::size_t positional = is_line ? 4 : 3;
      Component c;
      c.kind = is_line ? ComponentKind::tline : ComponentKind::stub;
      c.line = lineno;
      std::size_t npos_seen = 0;
      std::map<std::string, std::string> attrs;
      bool bad = false;
      for (std::size_t i = 1; i < tok.size(); ++i)
      {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos)
        {
          if (++npos_seen >= positional)
          {
            err("unexpected token '" + tok[i] + "' in " + kw + " record");
            bad = true;
          }
          else if (npos_seen == 1)
            c.id = tok[i];
          else if (npos_seen == 2)
            c.node1 = tok[i];
          else
            c.node2 = tok[i];
          continue;
        }
        const std::string key = tok[i].substr(0, eq);
        if (!attrs.emplace(key, tok[i].substr(eq + 1)).second)
        {
          err("attribute '" + key + "' given twice");
          bad = true;
        }
      }
      if (npos_seen + 1 < positional)
      {
        err(kw + " record needs: " + (is_line ? "tline <id> <node1> <node2>" : "stub <id> <node>"));
        continue;
      }
      auto number = [&](const char *key, bool required, double fallback) {
        const auto it = attrs.find(key);
        if (it == attrs.end())
        {
          if (required)
          {
            err("missing attribute '" + std::string(key) + "' in " + kw + " '" + c.id + "'");
            bad = true;
          }
          return fallback;
        }
        const auto v = detail::parse_number(it->second);
        if (!v)
        {
          err("non-numeric value '" + it->second + "' for attribute '" + key + "'");
          bad = true;
          return fallback;
        }
        return *v;
      };
      c.section.z_char = number("z", true, 50.0);
      c.section.theta0_deg = number("theta", true, 90.0);
      c.section.loss_db = number("loss", false, 0.0);
      if (!is_line)
      {
        const auto it = attrs.find("term");
        if (it == attrs.end())
        {
          err("missing attribute 'term' in stub '" + c.id + "'");
          bad = true;
        }
        else if (it->second == "open")
          c.term = net::Termination::open;
        else if (it->second == "short")
          c.term = net::Termination::short_circuit;
        else
        {
          err("term must be open or short, got '" + it->second + "'");
          bad = true;
        }
      }
      for (const auto &[k, v] : attrs)
        if (k != "z" && k != "theta" && k != "loss" && !(k == "term" && !is_line))
          warn("unknown attribute '" + k + "' ignored");
      if (!bad)
        g.components.push_back(std::move(c));
    }
    else
      err("unknown record '" + kw + "'");
    if (eol == text.size())
      break;
  }

  auto checks = validate(g);
  if (!has_errors(diag))
    diag.insert(diag.end(), checks.begin(), checks.end());
  else
    for (auto &d : checks)
      if (d.message != "network has no external ports")
        diag.push_back(std::move(d));
  std::stable_sort(diag.begin(), diag.end(), [](const Diagnostic &a, const Diagnostic &b) { return a.line < b.line; });
  if (!has_errors(diag))
  {
    canonicalize(g);
    res.graph = std::move(g);
  }
  return res;
}

inline std::string serialize(const NetworkGraph &graph)
{
  NetworkGraph g = graph;
  canonicalize(g);
  std::string out = "# monopulse-lab netlist\n";
  for (const auto &n : g.nodes)
    out += "node " + n.id + "\n";
  for (const auto &p : g.ports)
    out += "port " + p.label + " " + p.node + "\n";
  for (const auto &c : g.components)
  {
    if (c.kind == ComponentKind::tline)
      out += "tline " + c.id + " " + c.node1 + " " + c.node2;
    else
      out += "stub " + c.id + " " + c.node1;
    out += " z=" + detail::format_number(c.section.z_char);
    out += " theta=" + detail::format_number(c.section.theta0_deg);
    if (c.section.loss_db != 0.0)
      out += " loss=" + detail::format_number(c.section.loss_db);
    if (c.kind == ComponentKind::stub)
      out += c.term == net::Termination::open ? " term=open" : " term=short";
    out += "\n";
  }
  return out;
}

/// Convenience builder used by the circuit generators.
class GraphBuilder
{
public:
  GraphBuilder &node(const std::string &id)
  {
    if (declared_.insert(id).second)
      g_.nodes.push_back({id, 0});
    return *this;
  }

  GraphBuilder &port(const std::string &label, const std::string &node_id)
  {
    node(node_id);
    g_.ports.push_back({label, node_id, 0});
    return *this;
  }

  GraphBuilder &tline(const std::string &id, const std::string &n1, const std::string &n2, net::TLineSection s)
  {
    node(n1);
    node(n2);
    Component c;
    c.id = id;
    c.kind = ComponentKind::tline;
    c.section = s;
    c.node1 = n1;
    c.node2 = n2;
    g_.components.push_back(std::move(c));
    return *this;
  }

  GraphBuilder &stub(const std::string &id, const std::string &n1, net::TLineSection s, net::Termination term)
  {
    node(n1);
    Component c;
    c.id = id;
    c.kind = ComponentKind::stub;
    c.section = s;
    c.node1 = n1;
    c.term = term;
    g_.components.push_back(std::move(c));
    return *this;
  }

  NetworkGraph build() const
  {
    NetworkGraph g = g_;
    canonicalize(g);
    return g;
  }

private:
  NetworkGraph g_;
  std::set<std::string> declared_;
};

} // namespace mlab::netlist
