#pragma once

#include "flr/types.hpp"

namespace flr {

/// Finite-J population truth powering the closed-form oracle MSE formulas.
///
/// The formulas are exact for score distributions with independent
/// Karhunen-Loeve coefficients (Gaussian, or any independent-score model);
/// outside that validity domain they are approximations and the module makes
/// no attempt to extend them. They also describe the oracle estimators built
/// from the uncentered cross-covariance (1/n) sum y_i X_i; see
/// CrossCovMode::Uncentered.
struct PopulationModel {
    Eigen::VectorXd eigvals;         // strictly decreasing, positive
    Eigen::VectorXd beta_coeffs;     // <beta, phi_j>
    double sigma2 = 1.0;             // response noise variance
    Eigen::VectorXd coeff_kurtosis;  // Var(<X,phi_j>^2) / lambda_j^2 per component
    int split_r = 0;                 // oracle split index
    Eigen::MatrixXd eigfuns;         // optional (m x J), used to build OracleSplits

    int J() const { return static_cast<int>(eigvals.size()); }
};

/// Validates invariants (decreasing positive eigvals, kurtosis >= 0,
/// 0 <= split_r <= J, sigma2 > 0).
PopulationModel make_population_model(Eigen::VectorXd eigvals, Eigen::VectorXd beta_coeffs,
                                      double sigma2, Eigen::VectorXd coeff_kurtosis, int split_r,
                                      Eigen::MatrixXd eigfuns = {});

struct MseParts {
    double mse = 0.0;
    double bias2 = 0.0;
    double variance = 0.0;
};

/// Closed-form MSE of the oracle Tikhonov estimator:
///   n^{-1} sum_j (lam_j+rho)^{-2} [ b_j^2 (Var(<X,phi_j>^2) - lam_j^2)
///                                   + lam_j (<K beta, beta> + sigma^2) ]
///   + rho^2 sum_j (lam_j+rho)^{-2} b_j^2.
MseParts oracle_tr_mse(const PopulationModel& model, double rho, int n);

/// Same with the first split_r components unshrunk (lam_j^{-2} weights,
/// no bias contribution from the head block).
MseParts oracle_hr_mse(const PopulationModel& model, double rho, int n);

struct GapParts {
    double gap = 0.0;  // MSE(TR oracle) - MSE(HR oracle)
    double a1 = 0.0;   // coefficient of n^{-1}
    double a2 = 0.0;   // coefficient of rho^2
};

/// gap = n^{-1} A1(rho) + rho^2 A2(rho), with both terms from the head block.
GapParts domination_gap(const PopulationModel& model, double rho, int n);

/// Var(Z^2) for Z uniform on [-sqrt(3), sqrt(3)]: 4/5.
double uniform_score_kurtosis();
/// Var(Z^2) for Z standard Gaussian: 2.
double gaussian_score_kurtosis();

}  // namespace flr
