#include "flr/simgen.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "flr/fda.hpp"
#include "flr/rng.hpp"

namespace flr {

namespace {
constexpr std::uint64_t kSaltMeasurementError = 0x6d65ULL;

// <phi_j, phi_j>_m; zero-norm columns (e.g. frequency m on the midpoint grid)
// carry no information on the grid and are dropped from population truths.
constexpr double kDegenerateNorm = 1e-6;
}  // namespace

Grid design_grid(const SimDesign& d) {
    return d.grid_kind == GridKind::midpoint ? Grid::midpoints(d.m) : Grid::endpoints(d.m);
}

Eigen::MatrixXd kl_basis(const Grid& grid, int J) {
    if (J < 0) throw std::domain_error("kl_basis: J must be >= 0");
    const int m = grid.m();
    Eigen::MatrixXd phi(m, J);
    for (int j = 1; j <= J; ++j) {
        if (j == 1) {
            phi.col(0).setOnes();
        } else {
            for (int p = 0; p < m; ++p)
                phi(p, j - 1) = std::numbers::sqrt2 * std::cos(j * std::numbers::pi * grid.points[p]);
        }
    }
    return phi;
}

Eigen::VectorXd gamma_sequence(Spacing spacing, double alpha, int J) {
    if (J < 1) throw std::domain_error("gamma_sequence: J must be >= 1");
    Eigen::VectorXd g(J);
    if (spacing == Spacing::well_spaced) {
        for (int j = 1; j <= J; ++j) g[j - 1] = ((j % 2 == 1) ? 1.0 : -1.0) * std::pow(j, -alpha / 2.0);
        return g;
    }
    g[0] = 1.0;
    for (int j = 2; j <= std::min(J, 4); ++j)
        g[j - 1] = 0.2 * ((j % 2 == 1) ? 1.0 : -1.0) * (1.0 - 0.0001 * j);
    for (int j = 5; j <= J; ++j) {
        const int a = j / 5, k = j - 5 * a;
        g[j - 1] = 0.2 * ((j % 2 == 1) ? 1.0 : -1.0) * (std::pow(5.0 * a, -alpha / 2.0) - 0.0001 * k);
    }
    return g;
}

Eigen::VectorXd slope_coeffs(BetaChoice choice, int J) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(J);
    for (int j = 1; j <= J; ++j) {
        const double bj = (j == 1) ? 1.0 : 4.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::pow(j, -2.0);
        const bool keep = (choice == BetaChoice::beta1) || (choice == BetaChoice::beta2 && j <= 5) ||
                          (choice == BetaChoice::beta3 && j >= 6);
        if (keep) b[j - 1] = bj;
    }
    if (choice == BetaChoice::custom) throw config_error("slope_coeffs: custom choice carries its own coefficients");
    return b;
}

namespace {

Eigen::VectorXd design_beta_coeffs(const SimDesign& d) {
    if (d.beta_choice == BetaChoice::custom) {
        if (d.custom_beta_coeffs.size() != d.J)
            throw config_error("custom beta coefficients must have length J");
        return d.custom_beta_coeffs;
    }
    return slope_coeffs(d.beta_choice, d.J);
}

}  // namespace

DrawResult draw_dataset(const SimDesign& design, std::uint64_t rep_index) {
    if (design.n < 2 || design.m < 2) throw config_error("design: n, m must be >= 2");
    if (!(design.alpha_decay > 1.0)) throw config_error("design: alpha must exceed 1");
    const Grid grid = design_grid(design);
    const Eigen::MatrixXd phi = kl_basis(grid, design.J);
    const Eigen::VectorXd gam = gamma_sequence(design.spacing, design.alpha_decay, design.J);
    const Eigen::VectorXd b = design_beta_coeffs(design);

    Rng rng = Rng::substream(design.seed, rep_index);
    Eigen::MatrixXd Z(design.n, design.J);
    for (int i = 0; i < design.n; ++i)
        for (int j = 0; j < design.J; ++j) Z(i, j) = rng.uniform_score();
    Eigen::VectorXd eps(design.n);
    for (int i = 0; i < design.n; ++i) eps[i] = rng.normal();

    DrawResult out;
    out.data.grid = grid;
    out.data.X = (Z.array().rowwise() * gam.transpose().array()).matrix() * phi.transpose();
    out.beta_true = Curve(phi * b);
    out.data.y = out.data.X * out.beta_true.values / design.m + design.noise_sd * eps;

    if (design.measurement_error_sd > 0.0)
        out.data = add_measurement_error(out.data, design.measurement_error_sd,
                                         Rng::mix(design.seed, rep_index, kSaltMeasurementError));

    out.truth = population_split(design);
    return out;
}

// Exact spectrum of the discrete population covariance operator
// (1/m) Phi diag(gamma^2) Phi'. Handles grids where basis columns vanish or
// alias (J > m) by construction.
OracleSplit population_split(const SimDesign& design) {
    const Grid grid = design_grid(design);
    const Eigen::MatrixXd phi = kl_basis(grid, design.J);
    const Eigen::VectorXd gam = gamma_sequence(design.spacing, design.alpha_decay, design.J);
    Eigen::MatrixXd op =
        phi * gam.array().square().matrix().asDiagonal() * phi.transpose() / design.m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op);
    if (eig.info() != Eigen::Success) throw numeric_error("population spectrum failed");
    const int m = design.m;
    const double lam1 = eig.eigenvalues()[m - 1];
    int rank = 0;
    while (rank < m && eig.eigenvalues()[m - 1 - rank] > 1e-12 * lam1) ++rank;
    Eigen::VectorXd lam(rank);
    Eigen::MatrixXd funs(m, rank);
    for (int j = 0; j < rank; ++j) {
        lam[j] = eig.eigenvalues()[m - 1 - j];
        funs.col(j) = eig.eigenvectors().col(m - 1 - j) * std::sqrt(static_cast<double>(m));
        int k = 0;
        funs.col(j).cwiseAbs().maxCoeff(&k);
        if (funs(k, j) < 0.0) funs.col(j) = -funs.col(j);
    }
    return make_oracle_split(grid, lam, funs, 0, 1e-8);
}

FunctionalDataset add_measurement_error(const FunctionalDataset& data, double sd, std::uint64_t seed) {
    if (sd < 0.0) throw std::domain_error("add_measurement_error: sd must be >= 0");
    if (sd == 0.0) return data;
    FunctionalDataset out = data;
    Rng rng(seed);
    for (int i = 0; i < out.n(); ++i)
        for (int p = 0; p < out.grid.m(); ++p) out.X(i, p) += sd * rng.normal();
    return out;
}

PopulationModel population_model(const SimDesign& design, int split_r) {
    if (design.J > design.m)
        throw config_error("population_model: J > m aliases the cosine basis on the grid");
    const Grid grid = design_grid(design);
    const Eigen::MatrixXd phi = kl_basis(grid, design.J);
    const Eigen::VectorXd gam = gamma_sequence(design.spacing, design.alpha_decay, design.J);
    const Eigen::VectorXd b = design_beta_coeffs(design);

    std::vector<int> keep;
    for (int j = 0; j < design.J; ++j)
        if (phi.col(j).squaredNorm() / design.m > kDegenerateNorm * kDegenerateNorm) keep.push_back(j);
    Eigen::VectorXd lam(keep.size()), bc(keep.size()), kurt(keep.size());
    Eigen::MatrixXd funs(design.m, keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
        const int j = keep[k];
        const double nrm = std::sqrt(phi.col(j).squaredNorm() / design.m);
        lam[k] = gam[j] * gam[j] * nrm * nrm;
        bc[k] = b[j] * nrm;
        kurt[k] = uniform_score_kurtosis();
        funs.col(k) = phi.col(j) / nrm;
    }
    return make_population_model(std::move(lam), std::move(bc), design.noise_sd * design.noise_sd,
                                 std::move(kurt), split_r, std::move(funs));
}

}  // namespace flr
