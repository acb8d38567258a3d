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

// Line-based key=value configuration files. '#' starts a comment; blank
// lines are ignored; keys are case-sensitive.

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace mlab
{

class Config
{
public:
  Config() = default;

  static Config parse(const std::string &text, const std::string &origin = "config")
  {
    Config c;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
      ++lineno;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos)
        continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw parse_error(origin + ":" + std::to_string(lineno) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw parse_error(origin + ":" + std::to_string(lineno) + ": empty key");
      if (c.values_.count(key))
        throw parse_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
      c.values_[key] = value;
    }
    return c;
  }

  static Config load(const std::string &path)
  {
    std::ifstream f(path, std::ios::binary);
    if (!f)
      throw error("cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str(), path);
  }

  bool has(const std::string &key) const { return values_.count(key) > 0; }

  void set(const std::string &key, const std::string &value) { values_[key] = value; }

  std::string get(const std::string &key, const std::string &fallback) const
  {
    used_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get(const std::string &key, double fallback) const
  {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end())
      return fallback;
    try
    {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size())
        throw std::invalid_argument(key);
      return v;
    }
    catch (const std::exception &)
    {
      throw parse_error("config key '" + key + "' needs a number, got '" + it->second + "'");
    }
  }

  std::int64_t get_int(const std::string &key, std::int64_t fallback) const
  {
    const double v = get(key, static_cast<double>(fallback));
    if (v != std::floor(v))
      throw parse_error("config key '" + key + "' needs an integer");
    return static_cast<std::int64_t>(v);
  }

  bool get_bool(const std::string &key, bool fallback) const
  {
    const std::string v = get(key, std::string(fallback ? "true" : "false"));
    if (v == "true" || v == "1" || v == "yes")
      return true;
    if (v == "false" || v == "0" || v == "no")
      return false;
    throw parse_error("config key '" + key + "' needs true or false");
  }

  // Keys present in the file that no getter has asked for.
  std::vector<std::string> unused_keys() const
  {
    std::vector<std::string> out;
    for (const auto &[k, v] : values_)
      if (!used_.count(k))
        out.push_back(k);
    return out;
  }

  const std::map<std::string, std::string> &values() const { return values_; }

private:
  static std::string trim(const std::string &s)
  {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
      return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

} // namespace mlab
