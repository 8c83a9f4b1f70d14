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
#include "dfo/disturbance.hpp"

#include <random>

namespace dfo {

namespace {

void check_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (lo.size() != hi.size())
        throw DimensionError("box bounds have mismatched sizes");
    if (lo.size() == 0) throw DimensionError("box bounds are empty");
    if ((hi - lo).minCoeff() < 0.0)
        throw ConfigError("box upper bound below lower bound");
}

}  // namespace

DisturbanceProcess DisturbanceProcess::constant(Eigen::VectorXd value) {
    if (value.size() == 0) throw DimensionError("constant disturbance is empty");
    DisturbanceProcess p;
    p.kind_ = Kind::Constant;
    p.dim_ = static_cast<int>(value.size());
    p.value_ = std::move(value);
    return p;
}

DisturbanceProcess DisturbanceProcess::iid_bounded(Eigen::VectorXd lo,
                                                   Eigen::VectorXd hi,
                                                   uint64_t seed) {
    check_box(lo, hi);
    DisturbanceProcess p;
    p.kind_ = Kind::IidBounded;
    p.dim_ = static_cast<int>(lo.size());
    p.lo_ = std::move(lo);
    p.hi_ = std::move(hi);
    p.seed_ = seed;
    return p;
}

DisturbanceProcess DisturbanceProcess::piecewise_constant(Eigen::VectorXd lo,
                                                          Eigen::VectorXd hi,
                                                          int dwell,
                                                          uint64_t seed) {
    check_box(lo, hi);
    if (dwell < 1) throw ConfigError("dwell length must be >= 1");
    DisturbanceProcess p;
    p.kind_ = Kind::PiecewiseConstant;
    p.dim_ = static_cast<int>(lo.size());
    p.lo_ = std::move(lo);
    p.hi_ = std::move(hi);
    p.dwell_ = dwell;
    p.seed_ = seed;
    return p;
}

DisturbanceProcess DisturbanceProcess::scripted(Signal sequence) {
    if (sequence.rows() == 0 || sequence.cols() == 0)
        throw DimensionError("scripted disturbance sequence is empty");
    DisturbanceProcess p;
    p.kind_ = Kind::Scripted;
    p.dim_ = static_cast<int>(sequence.rows());
    p.sequence_ = std::move(sequence);
    return p;
}

Signal DisturbanceProcess::realize(int horizon) const {
    if (horizon < 1) throw DimensionError("horizon must be >= 1");
    Signal out(dim_, horizon);
    switch (kind_) {
        case Kind::Constant:
            out.colwise() = value_;
            break;
        case Kind::IidBounded: {
            std::mt19937_64 rng(seed_);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (int k = 0; k < horizon; ++k)
                for (int i = 0; i < dim_; ++i)
                    out(i, k) = lo_(i) + (hi_(i) - lo_(i)) * unit(rng);
            break;
        }
        case Kind::PiecewiseConstant: {
            std::mt19937_64 rng(seed_);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            Eigen::VectorXd level(dim_);
            for (int k = 0; k < horizon; ++k) {
                if (k % dwell_ == 0)
                    for (int i = 0; i < dim_; ++i)
                        level(i) = lo_(i) + (hi_(i) - lo_(i)) * unit(rng);
                out.col(k) = level;
            }
            break;
        }
        case Kind::Scripted:
            if (sequence_.cols() < horizon)
                throw DimensionError(
                    "scripted sequence has " + std::to_string(sequence_.cols()) +
                    " samples, requested horizon " + std::to_string(horizon));
            out = sequence_.leftCols(horizon);
            break;
    }
    return out;
}

Signal DisturbanceProcess::mean_sequence(int horizon) const {
    switch (kind_) {
        case Kind::IidBounded: {
            Signal out(dim_, horizon);
            out.colwise() = Eigen::VectorXd(0.5 * (lo_ + hi_));
            return out;
        }
        case Kind::Constant:
        case Kind::PiecewiseConstant:
        case Kind::Scripted:
            return realize(horizon);
    }
    throw Error("unreachable disturbance kind");
}

Eigen::VectorXd DisturbanceProcess::support_half_width() const {
    switch (kind_) {
        case Kind::IidBounded:
            return 0.5 * (hi_ - lo_);
        case Kind::Constant:
        case Kind::PiecewiseConstant:
        case Kind::Scripted:
            return Eigen::VectorXd::Zero(dim_);
    }
    throw Error("unreachable disturbance kind");
}

}  // namespace dfo
