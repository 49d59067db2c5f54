#include "flr/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flr/rng.hpp"

namespace flr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw selection_error("bad log grid");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    return g;
}

std::vector<double> default_rho_grid(const CovSpectrum& spec, int count) {
    const double lam1 = spec.eigvals.size() > 0 ? spec.eigvals[0] : 0.0;
    if (!(lam1 > 0.0)) throw rank_error("default_rho_grid: zero spectrum");
    return log_spaced(1e-6 * lam1, 10.0 * lam1, count);
}

int select_r_condition(const CovSpectrum& spec, double L) {
    const int rank = spec.positive_rank();
    if (rank == 0) throw rank_error("select_r_condition: all eigenvalues are zero");
    if (L < 1.0) throw selection_error("select_r_condition: L must be >= 1");
    const double lam1 = spec.eigvals[0];
    int r = 0;
    for (int j = 0; j < rank; ++j) {
        if (std::sqrt(lam1 / spec.eigvals[j]) <= L) r = j + 1;
    }
    return r;
}

SelectionResult gcv_rho(const FunctionalDataset& data, const CovSpectrum& spec, int r,
                        const std::vector<double>& rho_grid) {
    if (rho_grid.empty()) throw selection_error("gcv_rho: empty grid");
    const int rank = spec.positive_rank();
    if (r < 0 || r > rank) throw rank_error("gcv_rho: r outside the positive rank");
    const int n = data.n();
    const int m = data.grid.m();

    Eigen::VectorXd yc = data.y.array() - data.y.mean();
    Eigen::MatrixXd Xc = data.X.rowwise() - spec.mean_curve.values.transpose();
    Eigen::MatrixXd S = Xc * spec.eigfuns.leftCols(rank) / m;  // n x rank scores
    Eigen::VectorXd c = (S.transpose() * yc) / n;              // <C, phi_j>_m

    SelectionResult out;
    out.surface.reserve(rho_grid.size());
    double best = kInf;
    for (double rho : rho_grid) {
        Eigen::VectorXd w(rank);
        double df = 1.0 + r;
        for (int j = 0; j < rank; ++j) {
            if (j < r) {
                w[j] = 1.0 / spec.eigvals[j];
            } else {
                w[j] = 1.0 / (spec.eigvals[j] + rho);
                df += spec.eigvals[j] / (spec.eigvals[j] + rho);
            }
        }
        double score = kInf;
        if (df < n) {
            const double rss = (yc - S * w.cwiseProduct(c)).squaredNorm();
            score = n * rss / ((n - df) * (n - df));
        }
        out.surface.push_back({r, rho, score});
        if (score <= best) {  // ties toward larger rho
            best = score;
            out.r = r;
            out.rho = rho;
            out.df_at_optimum = df;
        }
    }
    if (!(best < kInf)) throw selection_error("gcv_rho: all candidates have df >= n");
    return out;
}

std::vector<int> make_folds(int n, int K, std::uint64_t seed) {
    if (K < 2 || K > n) throw fold_error("make_folds: need 2 <= K <= n");
    Rng rng(seed);
    std::vector<int> perm = rng.permutation(n);
    std::vector<int> folds(n);
    const int base = n / K, rem = n % K;
    int idx = 0;
    for (int f = 0; f < K; ++f) {
        const int sz = base + (f < rem ? 1 : 0);
        for (int s = 0; s < sz; ++s) folds[perm[idx++]] = f;
    }
    return folds;
}

namespace {

struct Candidates {
    std::vector<int> r_values;      // sorted ascending
    std::vector<double> rho_values; // sorted ascending; empty for ST
    int count() const {
        return r_values.empty() ? static_cast<int>(rho_values.size())
                                : static_cast<int>(r_values.size()) *
                                      std::max<int>(1, static_cast<int>(rho_values.size()));
    }
};

Candidates build_candidates(Method method, const ParamGrid& grid) {
    Candidates c;
    switch (method) {
        case Method::ST:
            c.r_values = grid.r_values;
            break;
        case Method::TR:
            c.rho_values = grid.rho_values;
            c.r_values = {0};
            break;
        case Method::HR:
            c.r_values = grid.r_values;
            c.rho_values = grid.rho_values;
            break;
        default:
            throw selection_error("cv: oracle methods are not tuned");
    }
    if (c.r_values.empty() && method != Method::TR) throw selection_error("cv: empty r grid");
    if (c.rho_values.empty() && method != Method::ST) throw selection_error("cv: empty rho grid");
    std::sort(c.r_values.begin(), c.r_values.end());
    std::sort(c.rho_values.begin(), c.rho_values.end());
    for (int r : c.r_values)
        if (r < 0 || (method == Method::ST && r < 1)) throw rank_error("cv: invalid r in grid");
    for (double rho : c.rho_values)
        if (!(rho > 0.0)) throw std::domain_error("cv: rho grid must be positive");
    return c;
}

// Sum of squared held-out prediction errors for every candidate, one fold.
// Layout of `sse`: ST -> [i_r]; TR -> [i_rho]; HR -> [i_r * n_rho + i_rho].
void accumulate_fold(const FunctionalDataset& data, const std::vector<int>& folds, int fold,
                     Method method, const Candidates& cand, std::vector<double>& sse) {
    const int n = data.n();
    const int m = data.grid.m();
    std::vector<int> tr_idx, te_idx;
    for (int i = 0; i < n; ++i) (folds[i] == fold ? te_idx : tr_idx).push_back(i);
    if (static_cast<int>(tr_idx.size()) < 2) throw fold_error("cv: training fold has fewer than 2 observations");
    if (te_idx.empty()) return;

    FunctionalDataset train;
    train.grid = data.grid;
    train.y.resize(tr_idx.size());
    train.X.resize(tr_idx.size(), m);
    for (size_t i = 0; i < tr_idx.size(); ++i) {
        train.y[i] = data.y[tr_idx[i]];
        train.X.row(i) = data.X.row(tr_idx[i]);
    }
    CovSpectrum spec = empirical_spectrum(train);
    const int rank = spec.positive_rank();

    const int n_te = static_cast<int>(te_idx.size());
    Eigen::MatrixXd Xte(n_te, m);
    Eigen::VectorXd y0(n_te);
    for (int i = 0; i < n_te; ++i) {
        Xte.row(i) = data.X.row(te_idx[i]) - spec.mean_curve.values.transpose();
        y0[i] = data.y[te_idx[i]] - spec.y_mean;
    }
    Eigen::MatrixXd S = Xte * spec.eigfuns.leftCols(rank) / m;     // test scores
    Eigen::VectorXd c = spec.eigfuns.leftCols(rank).transpose() * spec.cross_cov.values / m;
    Eigen::MatrixXd P = S.array().rowwise() * c.transpose().array();  // n_te x rank

    // prefix head sums: H(:, r) = sum_{j<r} P(:,j)/lambda_j
    const int max_r = cand.r_values.empty() ? 0 : std::min(cand.r_values.back(), rank);
    Eigen::MatrixXd H(n_te, max_r + 1);
    H.col(0).setZero();
    for (int j = 0; j < max_r; ++j) H.col(j + 1) = H.col(j) + P.col(j) / spec.eigvals[j];

    if (method == Method::ST) {
        for (size_t ir = 0; ir < cand.r_values.size(); ++ir) {
            const int r = cand.r_values[ir];
            if (r > rank) {
                sse[ir] = kInf;
                continue;
            }
            sse[ir] += (y0 - H.col(r)).squaredNorm();
        }
        return;
    }

    const int n_rho = static_cast<int>(cand.rho_values.size());
    for (int irho = 0; irho < n_rho; ++irho) {
        const double rho = cand.rho_values[irho];
        // suffix tail sums from the back, emitting at every needed r
        Eigen::VectorXd tail = Eigen::VectorXd::Zero(n_te);
        int next = static_cast<int>(cand.r_values.size()) - 1;
        for (int j = rank - 1; j >= 0 && next >= 0; --j) {
            tail += P.col(j) / (spec.eigvals[j] + rho);
            while (next >= 0 && cand.r_values[next] == j) {
                const int r = cand.r_values[next];
                const size_t slot = (method == Method::TR) ? irho : next * n_rho + irho;
                if (r > rank) {
                    sse[slot] = kInf;
                } else {
                    sse[slot] += (y0 - H.col(std::min(r, max_r)) - tail).squaredNorm();
                }
                --next;
            }
        }
        // candidates with r >= rank: head only (tail empty at r = rank)
        while (next >= 0) {
            const int r = cand.r_values[next];
            const size_t slot = (method == Method::TR) ? irho : next * n_rho + irho;
            if (r > rank) {
                sse[slot] = kInf;
            } else {
                sse[slot] += (y0 - H.col(std::min(r, max_r))).squaredNorm();
            }
            --next;
        }
    }
}

SelectionResult pick(const FunctionalDataset& data, Method method, const Candidates& cand,
                     const std::vector<double>& score) {
    SelectionResult out;
    out.surface.reserve(score.size());
    const int n_rho = static_cast<int>(cand.rho_values.size());
    double best = kInf;
    bool found = false;
    for (size_t ir = 0; ir < cand.r_values.size(); ++ir) {
        double row_best = kInf;
        int row_irho = -1;
        if (method == Method::ST) {
            row_best = score[ir];
        } else {
            for (int irho = 0; irho < n_rho; ++irho) {
                const size_t slot = (method == Method::TR) ? irho : ir * n_rho + irho;
                const double s = score[slot];
                out.surface.push_back({cand.r_values[ir], cand.rho_values[irho], s});
                if (s <= row_best) {  // ties toward larger rho
                    row_best = s;
                    row_irho = irho;
                }
            }
        }
        if (method == Method::ST) out.surface.push_back({cand.r_values[ir], 0.0, row_best});
        if (row_best < best) {  // ties toward smaller r
            best = row_best;
            out.r = cand.r_values[ir];
            out.rho = row_irho >= 0 ? cand.rho_values[row_irho] : 0.0;
            found = true;
        }
    }
    if (!found || !(best < kInf)) throw selection_error("cv: no finite candidate score");

    // effective df of the selected fit on the full data
    CovSpectrum spec = empirical_spectrum(data);
    const int rank = spec.positive_rank();
    double df = 1.0 + std::min(out.r, rank);
    if (method != Method::ST)
        for (int j = out.r; j < rank; ++j) df += spec.eigvals[j] / (spec.eigvals[j] + out.rho);
    out.df_at_optimum = df;
    return out;
}

}  // namespace

SelectionResult kfold_cv_with_folds(const FunctionalDataset& data, Method method, const ParamGrid& grid,
                                    const std::vector<int>& folds) {
    if (static_cast<int>(folds.size()) != data.n()) throw fold_error("cv: fold assignment length mismatch");
    const int K = *std::max_element(folds.begin(), folds.end()) + 1;
    Candidates cand = build_candidates(method, grid);
    std::vector<double> sse(cand.count(), 0.0);
    for (int f = 0; f < K; ++f) accumulate_fold(data, folds, f, method, cand, sse);
    for (double& s : sse) s /= data.n();
    return pick(data, method, cand, sse);
}

SelectionResult kfold_cv(const FunctionalDataset& data, Method method, const ParamGrid& grid, int K,
                         std::uint64_t seed, int repeats) {
    if (repeats < 1) throw selection_error("cv: repeats must be >= 1");
    Candidates cand = build_candidates(method, grid);
    std::vector<double> acc(cand.count(), 0.0);
    for (int t = 0; t < repeats; ++t) {
        std::vector<int> folds = make_folds(data.n(), K, Rng::mix(seed, static_cast<std::uint64_t>(t)));
        std::vector<double> sse(cand.count(), 0.0);
        for (int f = 0; f < K; ++f) accumulate_fold(data, folds, f, method, cand, sse);
        for (size_t i = 0; i < sse.size(); ++i) acc[i] += sse[i] / data.n();
    }
    for (double& s : acc) s /= repeats;
    return pick(data, Method::ST == method ? Method::ST : method, cand, acc);
}

SelectionResult double_cv(const FunctionalDataset& data, int r_max, const std::vector<double>& rho_grid,
                          int K, std::uint64_t seed, int repeats) {
    if (r_max < 0) throw rank_error("double_cv: r_max must be >= 0");
    ParamGrid grid;
    grid.r_values.resize(r_max + 1);
    for (int r = 0; r <= r_max; ++r) grid.r_values[r] = r;
    grid.rho_values = rho_grid;
    return kfold_cv(data, Method::HR, grid, K, seed, repeats);
}

}  // namespace flr
