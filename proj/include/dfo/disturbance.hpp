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

#include <Eigen/Dense>

#include "dfo/lti_system.hpp"

namespace dfo {

/**
 * Exogenous disturbance generator. All supported processes have compact
 * support, so every moment exists. Realizations are deterministic given the
 * seed; instances are immutable and safe to share across workers.
 */
class DisturbanceProcess {
public:
    enum class Kind {
        Constant,           ///< point mass at a fixed vector
        IidBounded,         ///< i.i.d. uniform draws from a box
        PiecewiseConstant,  ///< uniform draw from a box, held for a dwell
        Scripted            ///< explicit prerecorded sequence
    };

    static DisturbanceProcess constant(Eigen::VectorXd value);
    static DisturbanceProcess iid_bounded(Eigen::VectorXd lo,
                                          Eigen::VectorXd hi, uint64_t seed);
    static DisturbanceProcess piecewise_constant(Eigen::VectorXd lo,
                                                 Eigen::VectorXd hi, int dwell,
                                                 uint64_t seed);
    static DisturbanceProcess scripted(Signal sequence);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    /// r x horizon realization. Scripted sequences must cover the horizon.
    Signal realize(int horizon) const;

    /// Per-step distribution means, r x horizon. For constant, scripted and
    /// piecewise-constant processes the realization is deterministic given
    /// the seed, so the mean coincides with it; for i.i.d. boxes it is the
    /// box midpoint.
    Signal mean_sequence(int horizon) const;

    Eigen::VectorXd mean(int k) const { return mean_sequence(k + 1).col(k); }

    /// Half-widths of the support box around the mean (zero for point
    /// masses); used for conservative gradient-error bounds.
    Eigen::VectorXd support_half_width() const;

private:
    DisturbanceProcess() = default;

    Kind kind_ = Kind::Constant;
    int dim_ = 0;
    Eigen::VectorXd value_;  // Constant
    Eigen::VectorXd lo_, hi_;
    int dwell_ = 1;
    uint64_t seed_ = 0;
    Signal sequence_;  // Scripted
};

}  // namespace dfo
