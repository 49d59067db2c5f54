#include "flr/fda.hpp"

#include <Eigen/Dense>

#include <limits>

namespace flr {

namespace {
constexpr double kEigvalClamp = 1e-12;  // relative to lambda_1

// centering round-off alone can leave O(eps^2)-sized eigenvalues on exactly
// degenerate data; anything below this absolute floor is noise
double eigval_floor(const Eigen::MatrixXd& X) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = X.cwiseAbs().maxCoeff();
    return 256.0 * X.size() * eps * eps * scale * scale;
}
}

double inner_product(const Curve& f, const Curve& g, const Grid& grid) {
    const int m = grid.m();
    if (f.size() != m || g.size() != m)
        throw dimension_error("inner_product: curves not aligned with grid");
    return f.values.dot(g.values) / m;
}

double norm_m(const Curve& f, const Grid& grid) {
    return std::sqrt(inner_product(f, f, grid));
}

CenterResult center(const FunctionalDataset& data) {
    if (data.n() < 2) throw data_error("center: need at least 2 observations");
    CenterResult out;
    out.y_mean = data.y.mean();
    out.x_mean = Curve(data.X.colwise().mean().transpose());
    FunctionalDataset c;
    c.grid = data.grid;
    c.y = data.y.array() - out.y_mean;
    c.X = data.X.rowwise() - out.x_mean.values.transpose();
    out.centered = std::move(c);
    return out;
}

int CovSpectrum::positive_rank() const {
    int r = 0;
    while (r < eigvals.size() && eigvals[r] > 0.0) ++r;
    return r;
}

CovSpectrum empirical_spectrum(const FunctionalDataset& data) {
    if (!data.X.allFinite() || !data.y.allFinite())
        throw numeric_error("empirical_spectrum: non-finite input");
    const int n = data.n();
    const int m = data.grid.m();

    CovSpectrum spec;
    spec.grid = data.grid;
    spec.n = n;
    spec.y_mean = data.y.mean();
    spec.mean_curve = Curve(data.X.colwise().mean().transpose());

    Eigen::MatrixXd Xc = data.X.rowwise() - spec.mean_curve.values.transpose();
    Eigen::VectorXd yc = data.y.array() - spec.y_mean;
    spec.cross_cov = Curve((Xc.transpose() * yc) / n);

    Eigen::MatrixXd S = (Xc.transpose() * Xc) / n;
    spec.trace = S.trace() / m;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S / m);
    if (eig.info() != Eigen::Success) throw numeric_error("eigendecomposition failed");

    // Eigen returns ascending order; keep the top q = min(n-1, m).
    const int q = std::min(n - 1, m);
    Eigen::VectorXd vals(q);
    Eigen::MatrixXd funs(m, q);
    for (int j = 0; j < q; ++j) {
        vals[j] = eig.eigenvalues()[m - 1 - j];
        funs.col(j) = eig.eigenvectors().col(m - 1 - j) * std::sqrt(static_cast<double>(m));
    }

    const double lam1 = std::max(vals.size() > 0 ? vals[0] : 0.0, 0.0);
    const double floor = std::max(kEigvalClamp * lam1, eigval_floor(data.X));
    for (int j = 0; j < q; ++j) {
        if (vals[j] < floor) vals[j] = 0.0;
        // sign convention: entry of largest magnitude is positive
        int k = 0;
        funs.col(j).cwiseAbs().maxCoeff(&k);
        if (funs(k, j) < 0.0) funs.col(j) = -funs.col(j);
    }
    spec.eigvals = std::move(vals);
    spec.eigfuns = std::move(funs);
    return spec;
}

Eigen::VectorXd fourier_coeffs(const Curve& c, const CovSpectrum& spec, int k) {
    if (k < 0 || k > spec.q()) throw rank_error("fourier_coeffs: k out of range");
    if (c.size() != spec.grid.m()) throw dimension_error("fourier_coeffs: grid mismatch");
    return spec.eigfuns.leftCols(k).transpose() * c.values / spec.grid.m();
}

}  // namespace flr
