// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The gqsm-capacity Authors
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

#include <gqsm/ami_continuous.hpp>
#include <gqsm/ami_discrete.hpp>
#include <gqsm/ap_design.hpp>
#include <gqsm/core_model.hpp>
#include <gqsm/error.hpp>
#include <gqsm/harness/config.hpp>
#include <gqsm/harness/csv.hpp>
#include <gqsm/harness/plot.hpp>
#include <gqsm/harness/presets.hpp>
#include <gqsm/mc_error.hpp>
#include <gqsm/numerics.hpp>
#include <gqsm/parallel.hpp>
#include <gqsm/rng.hpp>
