#pragma once

#include "flr/fda.hpp"

namespace flr {

enum class Method { ST, TR, HR, HR_oracle, TR_oracle };

const char* method_name(Method m);

/// An estimated slope function with intercept and fit metadata.
struct SlopeEstimate {
    Curve beta;
    Grid grid;
    double intercept = 0.0;
    Method method = Method::TR;
    int r = 0;                 // unpenalised block size (ST: truncation level)
    double rho = 0.0;          // ridge parameter; 0 for ST
    double df = 0.0;           // effective degrees of freedom incl. intercept
    Eigen::VectorXd coefs;     // basis coefficients of beta over the retained eigenfunctions
    bool tie_warning = false;  // lambda_r == lambda_{r+1} at the split
};

/// beta_ST = sum_{j<=r} lambda_j^{-1} <C,phi_j>_m phi_j.
SlopeEstimate fit_spectral_truncation(const FunctionalDataset& data, const CovSpectrum& spec, int r);

/// beta_TR = (K + rho I)^{-1} C over the retained spectrum. The component of
/// C orthogonal to all retained eigenfunctions is analytically zero and is
/// checked, not ridged.
SlopeEstimate fit_tikhonov(const FunctionalDataset& data, const CovSpectrum& spec, double rho);

/// beta_HR: first r coefficients unpenalised, remainder ridged with rho.
SlopeEstimate fit_hybrid(const FunctionalDataset& data, const CovSpectrum& spec, int r, double rho);

/// True spectral split revealed to the oracle estimators: the leading block
/// of projector_dim eigenpairs and the orthogonal tail.
struct OracleSplit {
    Grid grid;
    int r = 0;
    Eigen::VectorXd head_eigvals;  // r entries
    Eigen::MatrixXd head_eigfuns;  // m x r
    Eigen::VectorXd tail_eigvals;
    Eigen::MatrixXd tail_eigfuns;

    int total() const { return r + static_cast<int>(tail_eigvals.size()); }
    OracleSplit with_r(int new_r) const;
    Eigen::VectorXd all_eigvals() const;
    Eigen::MatrixXd all_eigfuns() const;
};

/// Validates ordering and <,>_m-orthonormality (within gram_tol).
OracleSplit make_oracle_split(const Grid& grid, const Eigen::VectorXd& eigvals,
                              const Eigen::MatrixXd& eigfuns, int r, double gram_tol = 1e-6);

/// Cross-covariance convention for the oracle estimators. Centered is the
/// definitional form; Uncentered drops the mean corrections, which is the
/// convention the closed-form MSE expansions in analytic_mse describe exactly.
enum class CrossCovMode { Centered, Uncentered };

SlopeEstimate fit_hybrid_oracle(const FunctionalDataset& data, const OracleSplit& split, double rho,
                                CrossCovMode mode = CrossCovMode::Centered);

SlopeEstimate fit_tikhonov_oracle(const FunctionalDataset& data, const OracleSplit& split, double rho,
                                  CrossCovMode mode = CrossCovMode::Centered);

/// alpha_hat + <x, beta_hat>_m.
double predict(const SlopeEstimate& est, const Curve& x);

/// (1/m) sum_p (beta_hat(t_p) - beta(t_p))^2.
double mse_against_truth(const SlopeEstimate& est, const Curve& beta_true);

}  // namespace flr
