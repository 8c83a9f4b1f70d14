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
#include "dfo/hankel.hpp"

#include <sstream>

namespace dfo {

HankelMatrix::HankelMatrix(const Signal& z, int depth, int width)
    : depth_(depth), width_(width), block_dim_(static_cast<int>(z.rows())) {
    if (depth < 1 || width < 1)
        throw DimensionError("Hankel depth and width must be >= 1");
    const long needed = depth + width - 1;
    if (z.cols() < needed) {
        std::ostringstream os;
        os << "signal has " << z.cols() << " samples, depth " << depth
           << " and width " << width << " require at least " << needed;
        throw DimensionError(os.str());
    }
    matrix_.resize(static_cast<long>(block_dim_) * depth, width);
    for (int i = 0; i < depth; ++i)
        matrix_.middleRows(static_cast<long>(i) * block_dim_, block_dim_) =
            z.middleCols(i, width);
}

Eigen::MatrixXd HankelMatrix::block_row(int i) const {
    if (i < 1 || i > depth_)
        throw DimensionError("block row index " + std::to_string(i) +
                             " out of range [1, " + std::to_string(depth_) +
                             "]");
    return matrix_.middleRows(static_cast<long>(i - 1) * block_dim_,
                              block_dim_);
}

HankelMatrix build_hankel(const Signal& z, int depth, int width) {
    return HankelMatrix(z, depth, width);
}

HankelMatrix build_hankel(const Signal& z, int depth) {
    const int width = static_cast<int>(z.cols()) - depth + 1;
    return HankelMatrix(z, depth, width);
}

PersistencyResult is_persistently_exciting(const Signal& z, int order,
                                           double rank_tol) {
    if (order < 1) throw DimensionError("excitation order must be >= 1");
    PersistencyResult res;
    const int sigma = static_cast<int>(z.rows());
    const int T = static_cast<int>(z.cols());
    res.required_rank = sigma * order;
    res.width = T - order + 1;
    if (res.width < res.required_rank) {
        std::ostringstream os;
        os << "width q = " << res.width << " < sigma * t = "
           << res.required_rank << "; signal too short for order " << order;
        res.diagnostic = os.str();
        return res;
    }

    const HankelMatrix H = build_hankel(z, order, res.width);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H.matrix());
    const auto& sv = svd.singularValues();
    const double thresh = sv.size() > 0 ? rank_tol * sv(0) : 0.0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++res.achieved_rank;
    res.excited = (res.achieved_rank == res.required_rank);
    return res;
}

Signal difference_signal(const Signal& z) {
    if (z.cols() < 2)
        throw DimensionError("difference signal needs at least 2 samples");
    return z.rightCols(z.cols() - 1) - z.leftCols(z.cols() - 1);
}

}  // namespace dfo
