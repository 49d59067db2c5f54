#pragma once

#include <cstdint>

#include "flr/analytic_mse.hpp"
#include "flr/estimators.hpp"

namespace flr {

enum class Spacing { well_spaced, closely_spaced };
enum class BetaChoice { beta1, beta2, beta3, custom };
enum class GridKind { midpoint, endpoint };

/// One cell of the simulation design space: a Karhunen-Loeve covariate model
/// X = sum_j gamma_j Z_j phi_j with unit-variance uniform scores, a slope
/// function, Gaussian response noise, and optional per-gridpoint
/// measurement error on the observed curves.
struct SimDesign {
    double alpha_decay = 1.1;  // eigenvalue decay exponent, > 1
    Spacing spacing = Spacing::well_spaced;
    BetaChoice beta_choice = BetaChoice::beta1;
    Eigen::VectorXd custom_beta_coeffs;  // used when beta_choice == custom
    int n = 100;
    int m = 50;
    int J = 50;  // expansion length
    double noise_sd = 1.0;
    double measurement_error_sd = 0.0;
    std::uint64_t seed = 0;
    GridKind grid_kind = GridKind::midpoint;
};

Grid design_grid(const SimDesign& d);

/// phi_1 = 1, phi_j(t) = sqrt(2) cos(j pi t) for j >= 2, as columns (m x J).
Eigen::MatrixXd kl_basis(const Grid& grid, int J);

Eigen::VectorXd gamma_sequence(Spacing spacing, double alpha, int J);

/// b_1 = 1, b_j = 4 (-1)^{j+1} j^{-2}; beta1 keeps all, beta2 components
/// 1..5, beta3 components 6..J.
Eigen::VectorXd slope_coeffs(BetaChoice choice, int J);

struct DrawResult {
    FunctionalDataset data;
    Curve beta_true;
    OracleSplit truth;  // population split with r = 0; re-split with with_r()
};

/// Deterministic given (design, rep_index): replication substreams derive
/// from the design seed, so parallel and serial runs see identical data.
DrawResult draw_dataset(const SimDesign& design, std::uint64_t rep_index = 0);

/// W_i(t_p) = X_i(t_p) + sd * xi_ip with standard Gaussian xi; responses
/// unchanged. sd == 0 returns the input unchanged.
FunctionalDataset add_measurement_error(const FunctionalDataset& data, double sd, std::uint64_t seed);

/// Exact truncated population truth for the design on its grid (components
/// that vanish on the grid are dropped), with uniform-score kurtosis.
/// Requires J <= m; aliased designs have no per-component representation.
PopulationModel population_model(const SimDesign& design, int split_r = 0);

/// Spectrum of the discrete population covariance operator of the design,
/// as an r = 0 oracle split.
OracleSplit population_split(const SimDesign& design);

}  // namespace flr
