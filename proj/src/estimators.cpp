#include "flr/estimators.hpp"

#include <cmath>

namespace flr {

const char* method_name(Method m) {
    switch (m) {
        case Method::ST: return "ST";
        case Method::TR: return "TR";
        case Method::HR: return "HR";
        case Method::HR_oracle: return "HR_oracle";
        case Method::TR_oracle: return "TR_oracle";
    }
    return "?";
}

namespace {

// Shared ST/TR/HR assembly: weights applied to <C,phi_j>_m over the positive
// spectrum; TR and HR additionally ridge the unrepresented remainder of C.
SlopeEstimate assemble(const FunctionalDataset& data, const CovSpectrum& spec, Method method, int r,
                       double rho, bool ridge_tail) {
    const int rank = spec.positive_rank();
    const int m = spec.grid.m();
    SlopeEstimate est;
    est.grid = spec.grid;
    est.method = method;
    est.r = r;
    est.rho = rho;

    const Eigen::MatrixXd& phi = spec.eigfuns;
    Eigen::VectorXd c = phi.leftCols(rank).transpose() * spec.cross_cov.values / m;

    est.coefs.resize(rank);
    double df = 1.0 + r;
    for (int j = 0; j < rank; ++j) {
        if (j < r) {
            est.coefs[j] = c[j] / spec.eigvals[j];
        } else if (ridge_tail) {
            est.coefs[j] = c[j] / (spec.eigvals[j] + rho);
            df += spec.eigvals[j] / (spec.eigvals[j] + rho);
        } else {
            est.coefs[j] = 0.0;
        }
    }
    est.df = df;

    // The component of C outside the retained span would be ridged at weight
    // 1/rho, but it is analytically zero (C lies in the span of the centered
    // data); the identity suite asserts this instead of amplifying round-off.
    Eigen::VectorXd beta = phi.leftCols(rank) * est.coefs;
    est.beta = Curve(std::move(beta));
    est.intercept = data.y.mean() - inner_product(spec.mean_curve, est.beta, spec.grid);

    if (r >= 1 && r < rank) {
        const double a = spec.eigvals[r - 1], b = spec.eigvals[r];
        est.tie_warning = (a - b) <= 1e-12 * a;
    }
    return est;
}

void check_common(const FunctionalDataset& data, const CovSpectrum& spec) {
    if (data.grid.m() != spec.grid.m()) throw dimension_error("dataset and spectrum grids differ");
}

}  // namespace

SlopeEstimate fit_spectral_truncation(const FunctionalDataset& data, const CovSpectrum& spec, int r) {
    check_common(data, spec);
    if (r < 1 || r > spec.positive_rank())
        throw rank_error("spectral truncation: r outside the positive rank");
    return assemble(data, spec, Method::ST, r, 0.0, false);
}

SlopeEstimate fit_tikhonov(const FunctionalDataset& data, const CovSpectrum& spec, double rho) {
    check_common(data, spec);
    if (!(rho > 0.0)) throw std::domain_error("tikhonov: rho must be positive");
    return assemble(data, spec, Method::TR, 0, rho, true);
}

SlopeEstimate fit_hybrid(const FunctionalDataset& data, const CovSpectrum& spec, int r, double rho) {
    check_common(data, spec);
    if (!(rho > 0.0)) throw std::domain_error("hybrid: rho must be positive");
    if (r < 0 || r > spec.positive_rank()) throw rank_error("hybrid: r outside the positive rank");
    SlopeEstimate est = assemble(data, spec, Method::HR, r, rho, true);
    est.method = Method::HR;
    return est;
}

OracleSplit OracleSplit::with_r(int new_r) const {
    if (new_r < 0 || new_r > total()) throw rank_error("oracle split: r out of range");
    return make_oracle_split(grid, all_eigvals(), all_eigfuns(), new_r, 1e-6);
}

Eigen::VectorXd OracleSplit::all_eigvals() const {
    Eigen::VectorXd v(total());
    v.head(r) = head_eigvals;
    v.tail(total() - r) = tail_eigvals;
    return v;
}

Eigen::MatrixXd OracleSplit::all_eigfuns() const {
    Eigen::MatrixXd f(grid.m(), total());
    f.leftCols(r) = head_eigfuns;
    f.rightCols(total() - r) = tail_eigfuns;
    return f;
}

OracleSplit make_oracle_split(const Grid& grid, const Eigen::VectorXd& eigvals,
                              const Eigen::MatrixXd& eigfuns, int r, double gram_tol) {
    const int J = static_cast<int>(eigvals.size());
    if (eigfuns.cols() != J || eigfuns.rows() != grid.m())
        throw dimension_error("oracle split: eigenfunction matrix shape mismatch");
    if (r < 0 || r > J) throw rank_error("oracle split: r out of range");
    for (int j = 1; j < J; ++j)
        if (eigvals[j] > eigvals[j - 1]) throw rank_error("oracle split: eigenvalues must be nonincreasing");
    Eigen::MatrixXd gram = eigfuns.transpose() * eigfuns / grid.m();
    gram.diagonal().array() -= 1.0;
    if (gram.cwiseAbs().maxCoeff() > gram_tol)
        throw numeric_error("oracle split: eigenfunctions not orthonormal under <,>_m");

    OracleSplit s;
    s.grid = grid;
    s.r = r;
    s.head_eigvals = eigvals.head(r);
    s.head_eigfuns = eigfuns.leftCols(r);
    s.tail_eigvals = eigvals.tail(J - r);
    s.tail_eigfuns = eigfuns.rightCols(J - r);
    return s;
}

namespace {

SlopeEstimate oracle_fit(const FunctionalDataset& data, const OracleSplit& split, double rho,
                         CrossCovMode mode, bool unpenalised_head) {
    if (!(rho > 0.0)) throw std::domain_error("oracle fit: rho must be positive");
    if (data.grid.m() != split.grid.m()) throw dimension_error("oracle fit: grid mismatch");
    const int m = data.grid.m();
    const int n = data.n();
    const int r = unpenalised_head ? split.r : 0;
    for (int j = 0; j < split.r; ++j)
        if (!(split.head_eigvals[j] > 0.0)) throw rank_error("oracle fit: zero eigenvalue in head block");

    Eigen::VectorXd chat;
    if (mode == CrossCovMode::Centered) {
        Eigen::VectorXd yc = data.y.array() - data.y.mean();
        Eigen::MatrixXd Xc = data.X.rowwise() - data.X.colwise().mean();
        chat = (Xc.transpose() * yc) / n;
    } else {
        chat = (data.X.transpose() * data.y) / n;
    }

    const Eigen::MatrixXd phi = split.all_eigfuns();
    const Eigen::VectorXd lam = split.all_eigvals();
    const int J = split.total();
    Eigen::VectorXd c = phi.transpose() * chat / m;

    SlopeEstimate est;
    est.grid = data.grid;
    est.method = unpenalised_head ? Method::HR_oracle : Method::TR_oracle;
    est.r = r;
    est.rho = rho;
    est.coefs.resize(J);
    double df = 1.0 + r;
    for (int j = 0; j < J; ++j) {
        if (j < r) {
            est.coefs[j] = c[j] / lam[j];
        } else {
            est.coefs[j] = c[j] / (lam[j] + rho);
            df += lam[j] / (lam[j] + rho);
        }
    }
    est.df = df;
    est.beta = Curve(phi * est.coefs);
    Curve xbar(data.X.colwise().mean().transpose());
    est.intercept = data.y.mean() - inner_product(xbar, est.beta, data.grid);
    return est;
}

}  // namespace

SlopeEstimate fit_hybrid_oracle(const FunctionalDataset& data, const OracleSplit& split, double rho,
                                CrossCovMode mode) {
    return oracle_fit(data, split, rho, mode, true);
}

SlopeEstimate fit_tikhonov_oracle(const FunctionalDataset& data, const OracleSplit& split, double rho,
                                  CrossCovMode mode) {
    return oracle_fit(data, split, rho, mode, false);
}

double predict(const SlopeEstimate& est, const Curve& x) {
    if (x.size() != est.grid.m()) throw dimension_error("predict: curve not on the estimate's grid");
    return est.intercept + inner_product(x, est.beta, est.grid);
}

double mse_against_truth(const SlopeEstimate& est, const Curve& beta_true) {
    if (beta_true.size() != est.grid.m()) throw dimension_error("mse_against_truth: grid mismatch");
    Curve diff(est.beta.values - beta_true.values);
    return inner_product(diff, diff, est.grid);
}

}  // namespace flr
