// Copyright 2026 The altlearn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALTLEARN_ALTLEARN_HPP_
#define ALTLEARN_ALTLEARN_HPP_

#include "altlearn/baselines.hpp"
#include "altlearn/controller.hpp"
#include "altlearn/drift_sim.hpp"
#include "altlearn/elm.hpp"
#include "altlearn/experiment.hpp"
#include "altlearn/feature_map.hpp"
#include "altlearn/linear.hpp"
#include "altlearn/metrics.hpp"
#include "altlearn/numerics.hpp"
#include "altlearn/oselm.hpp"
#include "altlearn/sensitivity.hpp"

#endif  // ALTLEARN_ALTLEARN_HPP_
