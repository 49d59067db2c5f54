#pragma once

#include "flr/types.hpp"

namespace flr {

/// Spectrum of the grid-weighted empirical covariance operator of a
/// centered dataset, plus the empirical cross-covariance with the response.
///
/// The eigenproblem solved is (1/m) S v = lambda v with
/// S_pq = (1/n) sum_i (X_i(t_p) - Xbar(t_p)) (X_i(t_q) - Xbar(t_q)).
/// Eigenvectors are rescaled by sqrt(m) so the stored eigenfunctions are
/// orthonormal under <f,g>_m = (1/m) sum_p f_p g_p.
struct CovSpectrum {
    Grid grid;
    Eigen::VectorXd eigvals;   // q entries, nonincreasing, >= 0 (tiny ones clamped to 0)
    Eigen::MatrixXd eigfuns;   // m x q, columns <,>_m-orthonormal
    Curve mean_curve;          // Xbar
    double y_mean = 0.0;
    Curve cross_cov;           // Chat = (1/n) sum (y_i - ybar)(X_i - Xbar)
    double trace = 0.0;        // (1/m) sum_p S_pp
    int n = 0;                 // sample size the spectrum was computed from

    int q() const { return static_cast<int>(eigvals.size()); }
    /// Number of strictly positive eigenvalues; estimators sum over these.
    int positive_rank() const;
};

/// Discrete inner product <f,g>_m = (1/m) sum_p f(t_p) g(t_p).
double inner_product(const Curve& f, const Curve& g, const Grid& grid);
double norm_m(const Curve& f, const Grid& grid);

struct CenterResult {
    double y_mean = 0.0;
    Curve x_mean;
    FunctionalDataset centered;
};

/// Subtract ybar and Xbar; all estimators operate on centered data.
CenterResult center(const FunctionalDataset& data);

CovSpectrum empirical_spectrum(const FunctionalDataset& data);

/// First k projections (<c, phi_1>_m, ..., <c, phi_k>_m).
Eigen::VectorXd fourier_coeffs(const Curve& c, const CovSpectrum& spec, int k);

}  // namespace flr
