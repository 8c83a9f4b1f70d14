/*
 Copyright 2026 The dfo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include <cstdint>

#include "dfo/lti_system.hpp"

namespace dfo {

struct RandomSystemOptions {
    int n = 3;
    int m = 1;
    int p = 1;
    int r = 1;
    /// A is rescaled so its spectral radius is uniform in this range;
    /// kept away from 1 so desk-scale experiments avoid near-marginal plants.
    double rho_min = 0.3;
    double rho_max = 0.9;
    /// Draw A as a scaled random orthogonal matrix instead of plain Gaussian.
    /// Orthogonal A gives P proportional to identity, which keeps the
    /// state-contraction constants of the tracking bound well conditioned.
    bool orthogonal_A = false;
};

/// Seeded generator for controllable, observable, Schur-stable test plants.
/// Entries are i.i.d. standard normal; A is rescaled per the options.
LtiSystem random_system(const RandomSystemOptions& opt, uint64_t seed);

/// Seeded i.i.d. uniform signal on [lo, hi]^dim, persistently exciting of
/// any feasible order with probability one.
Signal random_uniform_signal(int dim, int length, double lo, double hi,
                             uint64_t seed);

}  // namespace dfo
