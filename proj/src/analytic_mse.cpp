#include "flr/analytic_mse.hpp"

namespace flr {

PopulationModel make_population_model(Eigen::VectorXd eigvals, Eigen::VectorXd beta_coeffs,
                                      double sigma2, Eigen::VectorXd coeff_kurtosis, int split_r,
                                      Eigen::MatrixXd eigfuns) {
    const int J = static_cast<int>(eigvals.size());
    if (J < 1) throw rank_error("population model: empty spectrum");
    if (beta_coeffs.size() != J || coeff_kurtosis.size() != J)
        throw dimension_error("population model: coefficient vectors must have length J");
    for (int j = 0; j < J; ++j) {
        if (!(eigvals[j] > 0.0)) throw rank_error("population model: eigenvalues must be positive");
        if (j > 0 && !(eigvals[j] < eigvals[j - 1]))
            throw rank_error("population model: eigenvalues must be strictly decreasing");
        if (coeff_kurtosis[j] < 0.0) throw std::domain_error("population model: kurtosis must be >= 0");
    }
    if (!(sigma2 > 0.0)) throw std::domain_error("population model: sigma2 must be positive");
    if (split_r < 0 || split_r > J) throw std::domain_error("population model: split_r out of range");
    if (eigfuns.size() != 0 && eigfuns.cols() != J)
        throw dimension_error("population model: eigenfunction count mismatch");
    PopulationModel m;
    m.eigvals = std::move(eigvals);
    m.beta_coeffs = std::move(beta_coeffs);
    m.sigma2 = sigma2;
    m.coeff_kurtosis = std::move(coeff_kurtosis);
    m.split_r = split_r;
    m.eigfuns = std::move(eigfuns);
    return m;
}

namespace {

// b_j^2 {Var(<X,phi_j>^2) - lam_j^2} + lam_j {<K beta, beta> + sigma^2}
double bracket(const PopulationModel& mo, int j, double kbb) {
    const double lam = mo.eigvals[j];
    const double b2 = mo.beta_coeffs[j] * mo.beta_coeffs[j];
    const double var_sq = mo.coeff_kurtosis[j] * lam * lam;
    return b2 * (var_sq - lam * lam) + lam * (kbb + mo.sigma2);
}

double kbb_of(const PopulationModel& mo) {
    return (mo.eigvals.array() * mo.beta_coeffs.array().square()).sum();
}

MseParts mse_with_head(const PopulationModel& mo, double rho, int n, int r) {
    if (!(rho > 0.0)) throw std::domain_error("oracle mse: rho must be positive");
    if (n < 1) throw std::domain_error("oracle mse: n must be >= 1");
    const double kbb = kbb_of(mo);
    MseParts out;
    for (int j = 0; j < mo.J(); ++j) {
        const double lam = mo.eigvals[j];
        const double b2 = mo.beta_coeffs[j] * mo.beta_coeffs[j];
        const double denom = (j < r) ? lam * lam : (lam + rho) * (lam + rho);
        out.variance += bracket(mo, j, kbb) / denom / n;
        if (j >= r) out.bias2 += rho * rho * b2 / denom;
    }
    out.mse = out.variance + out.bias2;
    return out;
}

}  // namespace

MseParts oracle_tr_mse(const PopulationModel& model, double rho, int n) {
    return mse_with_head(model, rho, n, 0);
}

MseParts oracle_hr_mse(const PopulationModel& model, double rho, int n) {
    if (model.split_r > model.J()) throw std::domain_error("oracle_hr_mse: split_r exceeds J");
    return mse_with_head(model, rho, n, model.split_r);
}

GapParts domination_gap(const PopulationModel& model, double rho, int n) {
    const double kbb = kbb_of(model);
    GapParts out;
    for (int j = 0; j < model.split_r; ++j) {
        const double lam = model.eigvals[j];
        const double b2 = model.beta_coeffs[j] * model.beta_coeffs[j];
        const double shrunk = 1.0 / ((lam + rho) * (lam + rho));
        out.a1 += (shrunk - 1.0 / (lam * lam)) * bracket(model, j, kbb);
        out.a2 += shrunk * b2;
    }
    out.gap = oracle_tr_mse(model, rho, n).mse - oracle_hr_mse(model, rho, n).mse;
    return out;
}

double uniform_score_kurtosis() { return 0.8; }
double gaussian_score_kurtosis() { return 2.0; }

}  // namespace flr
