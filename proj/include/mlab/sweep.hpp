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

// Frequency sweep of a netlist graph. Each component and each node with
// three or more connections becomes a small S-matrix element; elements are
// joined one at a time (sub-network growth) in breadth-first order from the
// first port, which keeps the intermediate networks small.

#include <deque>
#include <map>
#include <string>
#include <vector>

#include "netlist.hpp"
#include "parallel.hpp"

namespace mlab::sweep
{

namespace detail
{

struct EndRef
{
  std::size_t elem;
  std::size_t port;
};

enum class LinkKind
{
  partner,
  external,
  open
};

struct Link
{
  LinkKind kind = LinkKind::open;
  EndRef other{};
  std::size_t external = 0;
};

enum class ElemKind
{
  line,
  stub,
  junction,
  open_port
};

struct Element
{
  ElemKind kind;
  net::TLineSection section{};
  net::Termination term = net::Termination::open;
  std::size_t ports = 0;
  std::vector<Link> links;
};

struct Plan
{
  std::vector<Element> elems;
  std::vector<std::size_t> order; // elements reachable from a port
  std::size_t external_ports = 0;
};

inline Plan make_plan(const netlist::NetworkGraph &g)
{
  const auto diags = netlist::validate(g);
  if (netlist::has_errors(diags))
  {
    for (const auto &d : diags)
      if (d.kind == netlist::Severity::error)
        throw invalid_argument("invalid network: " + d.message);
  }

  Plan plan;
  std::map<std::string, std::vector<EndRef>> at_node;
  for (const auto &c : g.components)
  {
    Element e;
    e.section = c.section;
    if (c.kind == netlist::ComponentKind::tline)
    {
      e.kind = ElemKind::line;
      e.ports = 2;
    }
    else
    {
      e.kind = ElemKind::stub;
      e.term = c.term;
      e.ports = 1;
    }
    e.links.resize(e.ports);
    const std::size_t idx = plan.elems.size();
    plan.elems.push_back(std::move(e));
    at_node[c.node1].push_back({idx, 0});
    if (c.kind == netlist::ComponentKind::tline)
      at_node[c.node2].push_back({idx, 1});
  }

  std::map<std::string, std::size_t> port_of_node;
  for (std::size_t i = 0; i < g.ports.size(); ++i)
    port_of_node[g.ports[i].node] = i;
  plan.external_ports = g.ports.size();

  auto link_pair = [&](EndRef a, EndRef b) {
    plan.elems[a.elem].links[a.port] = {LinkKind::partner, b, 0};
    plan.elems[b.elem].links[b.port] = {LinkKind::partner, a, 0};
  };

  for (const auto &n : g.nodes)
  {
    const auto &ends = at_node[n.id];
    const auto pit = port_of_node.find(n.id);
    const bool has_port = pit != port_of_node.end();
    const std::size_t k = ends.size() + (has_port ? 1 : 0);
    if (k >= 3)
    {
      Element j;
      j.kind = ElemKind::junction;
      j.ports = k;
      j.links.resize(k);
      const std::size_t ji = plan.elems.size();
      plan.elems.push_back(std::move(j));
      for (std::size_t t = 0; t < ends.size(); ++t)
        link_pair(ends[t], {ji, t});
      if (has_port)
        plan.elems[ji].links[k - 1] = {LinkKind::external, {}, pit->second};
    }
    else if (ends.size() == 2)
      link_pair(ends[0], ends[1]);
    else if (ends.size() == 1 && has_port)
      plan.elems[ends[0].elem].links[ends[0].port] = {LinkKind::external, {}, pit->second};
    else if (ends.size() == 1)
      plan.elems[ends[0].elem].links[ends[0].port] = {LinkKind::open, {}, 0};
    else if (has_port)
    {
      Element o;
      o.kind = ElemKind::open_port;
      o.ports = 1;
      o.links = {{LinkKind::external, {}, pit->second}};
      plan.elems.push_back(std::move(o));
    }
  }

  // Breadth-first element order, seeded by the ports in order.
  std::vector<std::size_t> seed(g.ports.size(), plan.elems.size());
  for (std::size_t e = 0; e < plan.elems.size(); ++e)
    for (const auto &l : plan.elems[e].links)
      if (l.kind == LinkKind::external)
        seed[l.external] = e;
  std::vector<bool> seen(plan.elems.size(), false);
  for (std::size_t s : seed)
  {
    if (s >= plan.elems.size() || seen[s])
      continue;
    std::deque<std::size_t> q{s};
    seen[s] = true;
    while (!q.empty())
    {
      const std::size_t e = q.front();
      q.pop_front();
      plan.order.push_back(e);
      for (const auto &l : plan.elems[e].links)
        if (l.kind == LinkKind::partner && !seen[l.other.elem])
        {
          seen[l.other.elem] = true;
          q.push_back(l.other.elem);
        }
    }
  }
  return plan;
}

inline net::SMatrix element_s(const Element &e, double f, double f0, double z_ref)
{
  switch (e.kind)
  {
  case ElemKind::line:
    return net::tline_s(e.section, f, f0, z_ref);
  case ElemKind::stub:
    return net::SMatrix::Constant(1, 1, net::stub_reflection(e.section, e.term, f, f0, z_ref));
  case ElemKind::junction:
    return net::junction_s(e.ports);
  case ElemKind::open_port:
    return net::SMatrix::Constant(1, 1, cplx(1.0));
  }
  return {};
}

inline net::SMatrix evaluate(const Plan &plan, double f, double f0, double z_ref)
{
  net::SMatrix cur(0, 0);
  std::vector<EndRef> labels; // element end behind each port of cur
  std::vector<bool> added(plan.elems.size(), false);

  for (std::size_t e : plan.order)
  {
    const Element &el = plan.elems[e];
    net::SMatrix se = element_s(el, f, f0, z_ref);
    std::vector<std::size_t> local;
    for (std::size_t p = 0; p < el.ports; ++p)
      local.push_back(p);
    for (std::size_t p = el.ports; p-- > 0;)
      if (el.links[p].kind == LinkKind::open)
      {
        se = net::terminate(se, static_cast<Eigen::Index>(p), 1.0);
        local.erase(local.begin() + static_cast<std::ptrdiff_t>(p));
      }

    const std::size_t base = labels.size();
    std::vector<net::PortPair> pairs;
    for (std::size_t i = 0; i < local.size(); ++i)
    {
      const Link &l = el.links[local[i]];
      if (l.kind != LinkKind::partner)
        continue;
      if (l.other.elem == e)
      {
        // both ends on this element: pair once
        if (l.other.port > local[i])
          for (std::size_t k = 0; k < local.size(); ++k)
            if (local[k] == l.other.port)
              pairs.emplace_back(base + i, base + k);
        continue;
      }
      if (!added[l.other.elem])
        continue;
      for (std::size_t k = 0; k < base; ++k)
        if (labels[k].elem == l.other.elem && labels[k].port == l.other.port)
        {
          pairs.emplace_back(k, base + i);
          break;
        }
    }
    cur = net::interconnect(net::block_diagonal(cur, se), pairs);
    std::vector<bool> gone(base + local.size(), false);
    for (const auto &[a, b] : pairs)
      gone[a] = gone[b] = true;
    std::vector<EndRef> next;
    for (std::size_t k = 0; k < base; ++k)
      if (!gone[k])
        next.push_back(labels[k]);
    for (std::size_t i = 0; i < local.size(); ++i)
      if (!gone[base + i])
        next.push_back({e, local[i]});
    labels = std::move(next);
    added[e] = true;
  }

  // Reorder the surviving ends into external port numbering.
  const auto n = static_cast<Eigen::Index>(plan.external_ports);
  std::vector<Eigen::Index> where(plan.external_ports, -1);
  for (std::size_t k = 0; k < labels.size(); ++k)
  {
    const Link &l = plan.elems[labels[k].elem].links[labels[k].port];
    if (l.kind != LinkKind::external)
      throw degenerate_network("internal end left unconnected");
    where[l.external] = static_cast<Eigen::Index>(k);
  }
  net::SMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = where[static_cast<std::size_t>(r)] < 0 || where[static_cast<std::size_t>(c)] < 0
                      ? cplx(0.0)
                      : cur(where[static_cast<std::size_t>(r)], where[static_cast<std::size_t>(c)]);
  return out;
}

} // namespace detail

/// S-parameters of the graph at each frequency, ports numbered in the
/// graph's port order. Frequencies are evaluated independently (possibly
/// in parallel); results do not depend on the thread count.
inline net::SweepSParams run(const netlist::NetworkGraph &g, const std::vector<double> &freqs, double f0,
                             double z_ref = 50.0)
{
  if (!(f0 > 0.0) || !(z_ref > 0.0))
    throw invalid_argument("sweep needs positive f0 and reference impedance");
  const detail::Plan plan = detail::make_plan(g);
  net::SweepSParams out;
  out.ports = plan.external_ports;
  out.z_ref = z_ref;
  out.freqs = freqs;
  out.matrices.resize(freqs.size());
  parallel_for(freqs.size(), [&](std::size_t i) {
    try
    {
      out.matrices[i] = detail::evaluate(plan, freqs[i], f0, z_ref);
    }
    catch (const singular_junction &e)
    {
      throw singular_junction(e.reason, freqs[i], static_cast<std::ptrdiff_t>(i));
    }
    catch (const pole_at_frequency &e)
    {
      throw pole_at_frequency(e.reason, freqs[i], static_cast<std::ptrdiff_t>(i));
    }
  });
  return out;
}

inline net::SweepSParams run(const netlist::NetworkGraph &g, const net::FrequencyGrid &grid, double z_ref = 50.0)
{
  return run(g, grid.frequencies(), grid.f0, z_ref);
}

/// Single-frequency convenience.
inline net::SMatrix at(const netlist::NetworkGraph &g, double f, double f0, double z_ref = 50.0)
{
  return run(g, std::vector<double>{f}, f0, z_ref).matrices.front();
}

} // namespace mlab::sweep
