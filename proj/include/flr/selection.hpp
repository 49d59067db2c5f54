#pragma once

#include <cstdint>
#include <vector>

#include "flr/estimators.hpp"

namespace flr {

struct SurfacePoint {
    int r = 0;
    double rho = 0.0;
    double score = 0.0;
};

struct SelectionResult {
    int r = 0;
    double rho = 0.0;
    double df_at_optimum = 0.0;
    std::vector<SurfacePoint> surface;  // full grid, no missing entries
};

/// Candidate grid. ST uses r_values only, TR rho_values only, HR the product.
struct ParamGrid {
    std::vector<int> r_values;
    std::vector<double> rho_values;
};

std::vector<double> log_spaced(double lo, double hi, int count);

/// Default rho grid: `count` log-spaced points on [1e-6, 10] * lambda_1.
std::vector<double> default_rho_grid(const CovSpectrum& spec, int count = 40);

/// r = sup{ j >= 1 : (lambda_1/lambda_j)^(1/2) <= L } over positive eigenvalues.
/// L = 30 is the usual well-posedness rule of thumb.
int select_r_condition(const CovSpectrum& spec, double L = 30.0);

/// GCV over rho with the unpenalised block size r held fixed:
///   GCV(rho) = n RSS(rho) / (n - df(rho))^2,
///   df(rho)  = 1 + r + sum_{j>r} lambda_j/(lambda_j + rho),
/// RSS from in-sample residuals of the hybrid fit. Candidates with df >= n
/// score +inf; ties go to the larger rho.
SelectionResult gcv_rho(const FunctionalDataset& data, const CovSpectrum& spec, int r,
                        const std::vector<double>& rho_grid);

/// Deterministic balanced fold assignment (sizes floor(n/K) or ceil(n/K)).
std::vector<int> make_folds(int n, int K, std::uint64_t seed);

/// K-fold CV: spectrum recomputed on each training fold, score = mean squared
/// prediction error on the held-out folds, argmin over the grid. With
/// repeats > 1 the score is averaged over that many independent fold
/// partitions (derived deterministically from the seed) before the argmin.
/// Ties break toward smaller r, then larger rho.
SelectionResult kfold_cv(const FunctionalDataset& data, Method method, const ParamGrid& grid, int K,
                         std::uint64_t seed, int repeats = 1);

/// Same, with an explicit fold assignment (test hook).
SelectionResult kfold_cv_with_folds(const FunctionalDataset& data, Method method, const ParamGrid& grid,
                                    const std::vector<int>& folds);

/// Exhaustive (r, rho) search over r in {0..r_max} x rho_grid with kfold_cv's score.
SelectionResult double_cv(const FunctionalDataset& data, int r_max, const std::vector<double>& rho_grid,
                          int K, std::uint64_t seed, int repeats = 1);

}  // namespace flr
