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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mlab
{

// Worker count: MONOPULSE_LAB_THREADS when set (>= 1), otherwise the
// hardware concurrency.
inline unsigned worker_count()
{
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("MONOPULSE_LAB_THREADS"))
  {
    try
    {
      const long v = std::stol(env);
      if (v >= 1)
        return static_cast<unsigned>(v);
    }
    catch (const std::exception &)
    {
    }
  }
  return hw;
}

// Runs body(i) for i in [0, n). Each index is handled exactly once and writes
// only its own slot, so results match sequential evaluation bit for bit. The
// exception from the lowest failing index is rethrown.
template <typename Body>
void parallel_for(std::size_t n, Body &&body)
{
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = n;
  std::exception_ptr err;

  auto run = [&] {
    for (;;)
    {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try
      {
        body(i);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < err_index)
        {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t)
    pool.emplace_back(run);
  run();
  for (auto &th : pool)
    th.join();
  if (err)
    std::rethrow_exception(err);
}

} // namespace mlab
