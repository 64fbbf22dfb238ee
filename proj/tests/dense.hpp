#pragma once

#include "podles/operator.hpp"

#include <Eigen/Dense>

#include <random>

namespace testing_support {

using Dense = Eigen::MatrixXcd;

inline Dense to_dense(const podles::BandedOperator<double>& a)
{
    Dense m = Dense::Zero(static_cast<Eigen::Index>(a.out().size()), static_cast<Eigen::Index>(a.in().size()));
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (const auto& [r, v] : a.column(c)) m(r, static_cast<Eigen::Index>(c)) = {v.re, v.im};
    return m;
}

/// Random complex operator whose entries move l by at most `band` half-steps.
inline podles::BandedOperator<double> random_banded(const podles::BasisPtr& b, int band, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1, 1);
    podles::BandedOperator<double> a(b);
    for (std::size_t c = 0; c < b->size(); ++c)
        for (std::size_t r = 0; r < b->size(); ++r) {
            if (std::abs(b->at(r).l2 - b->at(c).l2) > 2 * band) continue;
            if (u(rng) < 0.3) continue;
            a.add(static_cast<int>(r), static_cast<int>(c), {u(rng), u(rng)});
        }
    return a;
}

} // namespace testing_support
