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

// Umbrella header.

#include "common.hpp"
#include "config.hpp"
#include "netkernel.hpp"
#include "touchstone.hpp"
#include "netlist.hpp"
#include "sweep.hpp"
#include "components.hpp"
#include "metrics.hpp"
#include "array.hpp"
#include "doa.hpp"
#include "dnn.hpp"
