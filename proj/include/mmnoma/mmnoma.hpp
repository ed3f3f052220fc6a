// SPDX-License-Identifier: Apache-2.0
//
// mmnoma: link-level simulator and outage analysis for clustered massive-MIMO-NOMA
// Copyright (C) 2026 The mmnoma authors
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

#ifndef MMNOMA_MMNOMA_HPP
#define MMNOMA_MMNOMA_HPP

#include "analysis.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "geometry.hpp"
#include "precoding.hpp"
#include "report.hpp"
#include "seeding.hpp"
#include "simulator.hpp"
#include "special.hpp"
#include "types.hpp"

#endif
