// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSAMP_GSAMP_HPP_
#define GSAMP_GSAMP_HPP_

#include "gsamp/alpha.hpp"
#include "gsamp/bounds.hpp"
#include "gsamp/common.hpp"
#include "gsamp/experiment.hpp"
#include "gsamp/graph.hpp"
#include "gsamp/interp.hpp"
#include "gsamp/io.hpp"
#include "gsamp/kpca.hpp"
#include "gsamp/rng.hpp"
#include "gsamp/samplers.hpp"
#include "gsamp/signals.hpp"
#include "gsamp/spectral.hpp"

#endif  // GSAMP_GSAMP_HPP_
