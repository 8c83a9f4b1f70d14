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
#include "dfo/convex_set.hpp"

namespace dfo {

ConvexSet ConvexSet::whole_space(int dim) {
    if (dim < 1) throw DimensionError("set dimension must be >= 1");
    ConvexSet s;
    s.kind_ = Kind::WholeSpace;
    s.dim_ = dim;
    return s;
}

ConvexSet ConvexSet::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
    if (lo.size() != hi.size() || lo.size() == 0)
        throw DimensionError("box bounds must be non-empty and equal-sized");
    if ((hi - lo).minCoeff() < 0.0)
        throw ConfigError("box upper bound below lower bound");
    ConvexSet s;
    s.kind_ = Kind::Box;
    s.dim_ = static_cast<int>(lo.size());
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

ConvexSet ConvexSet::nonnegative_orthant(int dim) {
    if (dim < 1) throw DimensionError("set dimension must be >= 1");
    ConvexSet s;
    s.kind_ = Kind::NonnegativeOrthant;
    s.dim_ = dim;
    return s;
}

ConvexSet ConvexSet::halfspace_intersection(Eigen::MatrixXd normals,
                                            Eigen::VectorXd offsets) {
    if (normals.rows() != offsets.size() || normals.rows() == 0)
        throw DimensionError("halfspace rows must match offsets");
    for (long i = 0; i < normals.rows(); ++i)
        if (normals.row(i).norm() == 0.0)
            throw ConfigError("halfspace " + std::to_string(i) +
                              " has a zero normal");
    ConvexSet s;
    s.kind_ = Kind::HalfspaceIntersection;
    s.dim_ = static_cast<int>(normals.cols());
    s.normals_ = std::move(normals);
    s.offsets_ = std::move(offsets);
    return s;
}

Eigen::VectorXd ConvexSet::project(const Eigen::VectorXd& z) const {
    if (z.size() != dim_)
        throw DimensionError("point has size " + std::to_string(z.size()) +
                             ", set dimension is " + std::to_string(dim_));
    switch (kind_) {
        case Kind::WholeSpace:
            return z;
        case Kind::Box:
            return z.cwiseMax(lo_).cwiseMin(hi_);
        case Kind::NonnegativeOrthant:
            return z.cwiseMax(0.0);
        case Kind::HalfspaceIntersection: {
            // Dykstra's corrections over the halfspaces. One halfspace
            // finishes in a single pass; intersections iterate to tolerance.
            const long h = normals_.rows();
            Eigen::VectorXd x = z;
            Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(dim_, h);
            for (int sweep = 0; sweep < 1000; ++sweep) {
                double moved = 0.0;
                for (long i = 0; i < h; ++i) {
                    const Eigen::VectorXd y = x + corrections.col(i);
                    const Eigen::VectorXd a = normals_.row(i).transpose();
                    const double excess = a.dot(y) - offsets_(i);
                    Eigen::VectorXd projected = y;
                    if (excess > 0.0) projected -= (excess / a.squaredNorm()) * a;
                    corrections.col(i) = y - projected;
                    moved = std::max(moved, (projected - x).norm());
                    x = projected;
                }
                if (moved < 1e-13 || h == 1) break;
            }
            return x;
        }
    }
    throw Error("unreachable convex set kind");
}

bool ConvexSet::contains(const Eigen::VectorXd& z, double tol) const {
    if (z.size() != dim_) return false;
    switch (kind_) {
        case Kind::WholeSpace:
            return true;
        case Kind::Box:
            return (z - lo_).minCoeff() >= -tol && (hi_ - z).minCoeff() >= -tol;
        case Kind::NonnegativeOrthant:
            return z.minCoeff() >= -tol;
        case Kind::HalfspaceIntersection:
            return (normals_ * z - offsets_).maxCoeff() <= tol;
    }
    return false;
}

}  // namespace dfo
