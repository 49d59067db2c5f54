#pragma once

#include "flr/fda.hpp"
#include "flr/rng.hpp"
#include "flr/simgen.hpp"

namespace flr::test {

/// Random dense dataset (Gaussian curves + responses), for algebraic checks.
inline FunctionalDataset random_dataset(int n, int m, std::uint64_t seed) {
    Rng rng(seed);
    FunctionalDataset d;
    d.grid = Grid::midpoints(m);
    d.y.resize(n);
    d.X.resize(n, m);
    for (int i = 0; i < n; ++i) {
        d.y[i] = rng.normal();
        for (int p = 0; p < m; ++p) d.X(i, p) = rng.normal();
    }
    return d;
}

/// Rank-1 design X_i = a_i * phi with unit-norm phi and y_i = a_i (no noise).
inline FunctionalDataset rank1_dataset(int n, int m, std::uint64_t seed) {
    Rng rng(seed);
    Grid grid = Grid::midpoints(m);
    Eigen::VectorXd phi = kl_basis(grid, 2).col(1);  // sqrt(2) cos(2 pi t)
    FunctionalDataset d;
    d.grid = grid;
    d.y.resize(n);
    d.X.resize(n, m);
    for (int i = 0; i < n; ++i) {
        const double a = rng.normal();
        d.y[i] = a;
        d.X.row(i) = a * phi.transpose();
    }
    return d;
}

inline SimDesign default_design(double alpha, Spacing spacing, BetaChoice beta, std::uint64_t seed,
                                int n = 100, int m = 50) {
    SimDesign d;
    d.alpha_decay = alpha;
    d.spacing = spacing;
    d.beta_choice = beta;
    d.n = n;
    d.m = m;
    d.seed = seed;
    return d;
}

}  // namespace flr::test
