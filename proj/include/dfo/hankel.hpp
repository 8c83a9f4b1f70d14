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

#include <string>

#include <Eigen/Dense>

#include "dfo/errors.hpp"
#include "dfo/lti_system.hpp"

namespace dfo {

/// Singular values below tau_rank * sigma_max count as zero in rank checks.
/// Data is exact at desk scale, so the tolerance only absorbs round-off.
inline constexpr double kRankTolerance = 1e-9;

/**
 * Block-Hankel view of a finite signal z (one column per sample, block
 * dimension sigma): entry block (i, j) is sample z_{i+j-2}, 1-indexed blocks.
 * The assembled matrix has size (sigma * depth) x width.
 */
class HankelMatrix {
public:
    HankelMatrix(const Signal& z, int depth, int width);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    int depth() const { return depth_; }
    int width() const { return width_; }
    int block_dim() const { return block_dim_; }

    /// i-th block row (1 <= i <= depth): [z_{i-1}, ..., z_{i+width-2}].
    Eigen::MatrixXd block_row(int i) const;

private:
    Eigen::MatrixXd matrix_;
    int depth_;
    int width_;
    int block_dim_;
};

/// Builds the depth x width block-Hankel matrix of z. The signal must
/// provide at least depth + width - 1 samples.
HankelMatrix build_hankel(const Signal& z, int depth, int width);

/// Same, with the maximal width T - depth + 1.
HankelMatrix build_hankel(const Signal& z, int depth);

struct PersistencyResult {
    bool excited = false;
    int achieved_rank = 0;
    int required_rank = 0;
    int width = 0;
    std::string diagnostic;  ///< empty when the order is satisfiable
};

/// Checks persistency of excitation of the given order: the depth-`order`
/// Hankel matrix at maximal width must have full row rank sigma * order.
PersistencyResult is_persistently_exciting(const Signal& z, int order,
                                           double rank_tol = kRankTolerance);

/// First differences: out_k = z_{k+1} - z_k; one sample shorter than z.
Signal difference_signal(const Signal& z);

}  // namespace dfo
