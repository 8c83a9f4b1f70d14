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

#include <Eigen/Dense>

#include "dfo/errors.hpp"

namespace dfo {

/// Closed convex constraint set with an orthogonal projection operator.
/// Projections are idempotent and non-expansive. A single halfspace projects
/// in closed form; intersections use cyclic Dykstra corrections, which
/// converge to the orthogonal projection for affine constraints.
class ConvexSet {
public:
    enum class Kind { WholeSpace, Box, NonnegativeOrthant, HalfspaceIntersection };

    /// Zero-dimensional placeholder; use the factories for real sets.
    ConvexSet() = default;

    static ConvexSet whole_space(int dim);
    static ConvexSet box(Eigen::VectorXd lo, Eigen::VectorXd hi);
    static ConvexSet nonnegative_orthant(int dim);
    /// { x : rows(i) . x <= offsets(i) for all i }
    static ConvexSet halfspace_intersection(Eigen::MatrixXd normals,
                                            Eigen::VectorXd offsets);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    Eigen::VectorXd project(const Eigen::VectorXd& z) const;
    bool contains(const Eigen::VectorXd& z, double tol = 1e-9) const;

    const Eigen::VectorXd& lower() const { return lo_; }
    const Eigen::VectorXd& upper() const { return hi_; }

private:
    Kind kind_ = Kind::WholeSpace;
    int dim_ = 0;
    Eigen::VectorXd lo_, hi_;      // Box
    Eigen::MatrixXd normals_;      // HalfspaceIntersection
    Eigen::VectorXd offsets_;
};

}  // namespace dfo
