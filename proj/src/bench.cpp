#include "flr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "flr/fda.hpp"
#include "flr/rng.hpp"

namespace flr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kSaltCv = 0xCFULL;

int method_salt(Method m) { return static_cast<int>(m) + 1; }
}  // namespace

const char* selection_name(SelectionMode s) {
    switch (s) {
        case SelectionMode::fixed: return "fixed";
        case SelectionMode::gcv: return "gcv";
        case SelectionMode::kfold: return "kfold";
        case SelectionMode::double_cv: return "double_cv";
        case SelectionMode::oracle_best: return "oracle_best";
    }
    return "?";
}

SelectionMode selection_from_string(const std::string& s) {
    if (s == "fixed") return SelectionMode::fixed;
    if (s == "gcv") return SelectionMode::gcv;
    if (s == "kfold") return SelectionMode::kfold;
    if (s == "double_cv") return SelectionMode::double_cv;
    if (s == "oracle_best") return SelectionMode::oracle_best;
    throw config_error("unknown selection mode: " + s);
}

const char* beta_label(const SimDesign& d) {
    switch (d.beta_choice) {
        case BetaChoice::beta1: return "beta1";
        case BetaChoice::beta2: return "beta2";
        case BetaChoice::beta3: return "beta3";
        case BetaChoice::custom: return "custom";
    }
    return "?";
}

namespace {

const TuningSpec& tuning_for(const ExperimentConfig& cfg, Method m) {
    switch (m) {
        case Method::ST: return cfg.st;
        case Method::TR: return cfg.tr;
        case Method::HR: return cfg.hr;
        default: throw config_error("bench: oracle methods are not benchmark methods");
    }
}

std::vector<int> effective_r_values(const TuningSpec& t, Method m) {
    if (!t.r_values.empty()) return t.r_values;
    std::vector<int> r;
    if (m == Method::ST)
        for (int j = 1; j <= 20; ++j) r.push_back(j);
    else
        for (int j = 0; j <= 5; ++j) r.push_back(j);
    return r;
}

std::vector<double> cv_rho_grid(const TuningSpec& t, const CovSpectrum& spec) {
    if (!t.rho_values.empty()) return t.rho_values;
    const double scale = t.rho_relative ? spec.eigvals[0] : 1.0;
    return log_spaced(t.rho_lo * scale, t.rho_hi * scale, t.rho_count);
}

std::vector<double> absolute_rho_grid(const TuningSpec& t) {
    if (!t.rho_values.empty()) return t.rho_values;
    // oracle_best aggregates per grid point across replications, so the grid
    // must not depend on per-dataset quantities
    return log_spaced(t.rho_lo, t.rho_hi, t.rho_count);
}

// GCV over the truncation level for ST: df = 1 + r, ties toward smaller r.
int gcv_select_st_r(const FunctionalDataset& data, const CovSpectrum& spec, const std::vector<int>& r_values) {
    const int rank = spec.positive_rank();
    const int n = data.n();
    const int m = data.grid.m();
    Eigen::VectorXd yc = data.y.array() - data.y.mean();
    Eigen::MatrixXd S = (data.X.rowwise() - spec.mean_curve.values.transpose()) *
                        spec.eigfuns.leftCols(rank) / m;
    Eigen::VectorXd c = (S.transpose() * yc) / n;
    double best = kInf;
    int best_r = -1;
    for (int r : r_values) {
        if (r < 1 || r > rank) continue;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(rank);
        for (int j = 0; j < r; ++j) w[j] = 1.0 / spec.eigvals[j];
        const double df = 1.0 + r;
        if (df >= n) continue;
        const double rss = (yc - S * w.cwiseProduct(c)).squaredNorm();
        const double score = n * rss / ((n - df) * (n - df));
        if (score < best) {
            best = score;
            best_r = r;
        }
    }
    if (best_r < 0) throw selection_error("gcv: no admissible truncation level");
    return best_r;
}

struct CellEval {
    double mse = 0.0;
    int r = 0;
    double rho = 0.0;
    bool failed = false;
};

// Estimation MSE against the truth at every grid point, coefficient route.
struct GridEval {
    std::vector<double> st;              // by r index
    std::vector<double> tr;              // by rho index
    std::vector<double> hr;              // r-major by rho
};

GridEval eval_grids(const CovSpectrum& spec, const Curve& beta_true, const std::vector<int>& st_r,
                    const std::vector<double>& tr_rho, const std::vector<int>& hr_r,
                    const std::vector<double>& hr_rho) {
    const int rank = spec.positive_rank();
    const int m = spec.grid.m();
    Eigen::VectorXd c = spec.eigfuns.leftCols(rank).transpose() * spec.cross_cov.values / m;
    Eigen::VectorXd bt = spec.eigfuns.leftCols(rank).transpose() * beta_true.values / m;
    const double extra =
        (beta_true.values - spec.eigfuns.leftCols(rank) * bt).squaredNorm() / m;

    GridEval out;
    out.st.reserve(st_r.size());
    for (int r : st_r) {
        if (r < 1 || r > rank) {
            out.st.push_back(kInf);
            continue;
        }
        double acc = extra;
        for (int j = 0; j < rank; ++j) {
            const double coef = j < r ? c[j] / spec.eigvals[j] : 0.0;
            const double d = coef - bt[j];
            acc += d * d;
        }
        out.st.push_back(acc);
    }
    auto hybrid_mse = [&](int r, double rho) {
        double acc = extra;
        for (int j = 0; j < rank; ++j) {
            const double coef = j < r ? c[j] / spec.eigvals[j] : c[j] / (spec.eigvals[j] + rho);
            const double d = coef - bt[j];
            acc += d * d;
        }
        return acc;
    };
    out.tr.reserve(tr_rho.size());
    for (double rho : tr_rho) out.tr.push_back(hybrid_mse(0, rho));
    out.hr.reserve(hr_r.size() * hr_rho.size());
    for (int r : hr_r) {
        for (double rho : hr_rho) {
            out.hr.push_back(r > rank ? kInf : hybrid_mse(r, rho));
        }
    }
    return out;
}

struct RepOutcome {
    std::vector<CellEval> cells;           // one per configured method
    std::vector<std::vector<double>> grid; // oracle_best methods only
};

void parallel_reps(int reps, int workers, const std::function<void(int)>& body) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, reps));
    if (workers == 1) {
        for (int k = 0; k < reps; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto drain = [&] {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= reps) return;
            try {
                body(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

MseTable run_mc_study(const ExperimentConfig& config) {
    if (config.replications < 1) throw config_error("run_mc_study: replications must be >= 1");
    if (config.methods.empty()) throw config_error("run_mc_study: no methods configured");
    SimDesign design = config.design;
    design.seed = config.seed;

    const int reps = config.replications;
    const int n_methods = static_cast<int>(config.methods.size());

    // absolute grids for oracle_best aggregation
    std::vector<std::vector<int>> ob_r(n_methods);
    std::vector<std::vector<double>> ob_rho(n_methods);
    for (int im = 0; im < n_methods; ++im) {
        const Method m = config.methods[im];
        const TuningSpec& t = tuning_for(config, m);
        if (t.selection == SelectionMode::oracle_best) {
            ob_r[im] = effective_r_values(t, m);
            if (m != Method::ST) ob_rho[im] = absolute_rho_grid(t);
        }
    }

    std::vector<RepOutcome> results(reps);
    parallel_reps(reps, config.workers, [&](int k) {
        RepOutcome& out = results[k];
        out.cells.resize(n_methods);
        out.grid.resize(n_methods);
        DrawResult dr = draw_dataset(design, static_cast<std::uint64_t>(k));
        CovSpectrum spec = empirical_spectrum(dr.data);
        for (int im = 0; im < n_methods; ++im) {
            const Method m = config.methods[im];
            const TuningSpec& t = tuning_for(config, m);
            CellEval& cell = out.cells[im];
            try {
                if (t.selection == SelectionMode::oracle_best) {
                    GridEval g =
                        eval_grids(spec, dr.beta_true, m == Method::ST ? ob_r[im] : std::vector<int>{},
                                   m == Method::TR ? ob_rho[im] : std::vector<double>{},
                                   m == Method::HR ? ob_r[im] : std::vector<int>{},
                                   m == Method::HR ? ob_rho[im] : std::vector<double>{});
                    out.grid[im] = m == Method::ST ? g.st : (m == Method::TR ? g.tr : g.hr);
                    continue;
                }
                SlopeEstimate est;
                const std::uint64_t cv_seed =
                    Rng::mix(config.seed, static_cast<std::uint64_t>(k), kSaltCv + method_salt(m));
                switch (t.selection) {
                    case SelectionMode::fixed:
                        if (m == Method::ST)
                            est = fit_spectral_truncation(dr.data, spec, t.fixed_r);
                        else if (m == Method::TR)
                            est = fit_tikhonov(dr.data, spec, t.fixed_rho);
                        else
                            est = fit_hybrid(dr.data, spec, t.fixed_r, t.fixed_rho);
                        break;
                    case SelectionMode::gcv: {
                        if (m == Method::ST) {
                            const int r = gcv_select_st_r(dr.data, spec, effective_r_values(t, m));
                            est = fit_spectral_truncation(dr.data, spec, r);
                        } else {
                            const int r = (m == Method::TR)
                                              ? 0
                                              : std::min(select_r_condition(spec, t.condition_L),
                                                         spec.positive_rank());
                            SelectionResult sel = gcv_rho(dr.data, spec, r, cv_rho_grid(t, spec));
                            est = (m == Method::TR) ? fit_tikhonov(dr.data, spec, sel.rho)
                                                    : fit_hybrid(dr.data, spec, r, sel.rho);
                        }
                        break;
                    }
                    case SelectionMode::kfold: {
                        ParamGrid grid;
                        grid.r_values = effective_r_values(t, m);
                        if (m != Method::ST) grid.rho_values = cv_rho_grid(t, spec);
                        SelectionResult sel =
                            kfold_cv(dr.data, m, grid, t.cv_folds, cv_seed, t.cv_repeats);
                        if (m == Method::ST)
                            est = fit_spectral_truncation(dr.data, spec, sel.r);
                        else if (m == Method::TR)
                            est = fit_tikhonov(dr.data, spec, sel.rho);
                        else
                            est = fit_hybrid(dr.data, spec, sel.r, sel.rho);
                        break;
                    }
                    case SelectionMode::double_cv: {
                        if (m != Method::HR) throw config_error("double_cv applies to HR only");
                        const auto rv = effective_r_values(t, m);
                        const int r_max = *std::max_element(rv.begin(), rv.end());
                        SelectionResult sel = double_cv(dr.data, r_max, cv_rho_grid(t, spec),
                                                        t.cv_folds, cv_seed, t.cv_repeats);
                        est = fit_hybrid(dr.data, spec, sel.r, sel.rho);
                        break;
                    }
                    case SelectionMode::oracle_best:
                        break;  // handled above
                }
                cell.mse = mse_against_truth(est, dr.beta_true);
                cell.r = est.r;
                cell.rho = est.rho;
            } catch (const std::exception&) {
                cell.failed = true;
            }
        }
    });

    // deterministic ordered reduction
    MseTable table;
    for (int im = 0; im < n_methods; ++im) {
        const Method m = config.methods[im];
        const TuningSpec& t = tuning_for(config, m);
        MseRow row;
        row.beta = beta_label(design);
        row.alpha = design.alpha_decay;
        row.method = method_name(m);
        row.selection = selection_name(t.selection);
        row.n_reps = reps;

        if (t.selection == SelectionMode::oracle_best) {
            size_t n_points = 0;
            for (int k = 0; k < reps; ++k)
                if (!results[k].cells[im].failed) n_points = std::max(n_points, results[k].grid[im].size());
            std::vector<double> sum(n_points, 0.0), sumsq(n_points, 0.0);
            int used = 0;
            for (int k = 0; k < reps; ++k) {
                if (results[k].cells[im].failed) continue;
                const auto& g = results[k].grid[im];
                for (size_t p = 0; p < n_points; ++p) {
                    sum[p] += g[p];
                    sumsq[p] += g[p] * g[p];
                }
                ++used;
            }
            row.n_failed = reps - used;
            if (used == 0 || n_points == 0) throw run_error("oracle_best: no successful replication");
            size_t best = 0;
            for (size_t p = 1; p < n_points; ++p)
                if (sum[p] < sum[best]) best = p;
            row.mean_mse = sum[best] / used;
            const double var =
                used > 1 ? (sumsq[best] - sum[best] * sum[best] / used) / (used - 1) : 0.0;
            row.mc_se = used > 1 ? std::sqrt(std::max(var, 0.0) / used) : 0.0;
            if (m == Method::ST) {
                row.mean_r = ob_r[im][best];
            } else if (m == Method::TR) {
                row.mean_rho = ob_rho[im][best];
            } else {
                row.mean_r = ob_r[im][best / ob_rho[im].size()];
                row.mean_rho = ob_rho[im][best % ob_rho[im].size()];
            }
            if (config.dump_replications) {
                for (int k = 0; k < reps; ++k) {
                    if (results[k].cells[im].failed) continue;
                    table.replications.push_back({k, row.method, row.selection,
                                                  results[k].grid[im][best],
                                                  static_cast<int>(row.mean_r), row.mean_rho});
                }
            }
        } else {
            double sum = 0.0, sumsq = 0.0, rsum = 0.0, rhosum = 0.0;
            int used = 0;
            for (int k = 0; k < reps; ++k) {
                const CellEval& cell = results[k].cells[im];
                if (cell.failed) continue;
                sum += cell.mse;
                sumsq += cell.mse * cell.mse;
                rsum += cell.r;
                rhosum += cell.rho;
                ++used;
                if (config.dump_replications)
                    table.replications.push_back({k, row.method, row.selection, cell.mse, cell.r, cell.rho});
            }
            row.n_failed = reps - used;
            if (used == 0) throw run_error("run_mc_study: all replications failed for " + row.method);
            row.mean_mse = sum / used;
            const double var = used > 1 ? (sumsq - sum * sum / used) / (used - 1) : 0.0;
            row.mc_se = used > 1 ? std::sqrt(std::max(var, 0.0) / used) : 0.0;
            row.mean_r = rsum / used;
            row.mean_rho = rhosum / used;
        }
        if (row.n_failed * 100 > reps)
            throw run_error("run_mc_study: failure budget exceeded for " + row.method);
        table.rows.push_back(std::move(row));
    }
    return table;
}

SweepTable run_rho_sweep(const ExperimentConfig& config, const std::vector<int>& r_values,
                         const std::vector<double>& rho_grid) {
    if (rho_grid.empty()) throw config_error("run_rho_sweep: empty rho grid");
    SimDesign design = config.design;
    design.seed = config.seed;
    const int reps = config.replications;
    const size_t n_rho = rho_grid.size();
    const size_t n_cells = n_rho * (1 + r_values.size());

    std::vector<std::vector<double>> per_rep(reps);
    parallel_reps(reps, config.workers, [&](int k) {
        DrawResult dr = draw_dataset(design, static_cast<std::uint64_t>(k));
        CovSpectrum spec = empirical_spectrum(dr.data);
        GridEval g = eval_grids(spec, dr.beta_true, {}, rho_grid, r_values, rho_grid);
        std::vector<double> row;
        row.reserve(n_cells);
        for (double v : g.tr) row.push_back(v);
        for (double v : g.hr) row.push_back(v);
        per_rep[k] = std::move(row);
    });

    std::vector<double> sum(n_cells, 0.0), sumsq(n_cells, 0.0);
    for (int k = 0; k < reps; ++k)
        for (size_t p = 0; p < n_cells; ++p) {
            sum[p] += per_rep[k][p];
            sumsq[p] += per_rep[k][p] * per_rep[k][p];
        }

    SweepTable table;
    auto push_curve = [&](const std::string& method, int r, size_t offset) {
        size_t best = 0;
        for (size_t i = 1; i < n_rho; ++i)
            if (sum[offset + i] < sum[offset + best]) best = i;
        for (size_t i = 0; i < n_rho; ++i) {
            SweepRow row;
            row.method = method;
            row.r = r;
            row.rho = rho_grid[i];
            row.mean_mse = sum[offset + i] / reps;
            const double var =
                reps > 1 ? (sumsq[offset + i] - sum[offset + i] * sum[offset + i] / reps) / (reps - 1) : 0.0;
            row.mc_se = reps > 1 ? std::sqrt(std::max(var, 0.0) / reps) : 0.0;
            row.is_min = (i == best);
            table.rows.push_back(std::move(row));
        }
    };
    push_curve("TR", 0, 0);
    for (size_t ir = 0; ir < r_values.size(); ++ir)
        push_curve("HR", r_values[ir], n_rho * (1 + ir));
    return table;
}

SplitTable run_split_prediction(const FunctionalDataset& data, const ExperimentConfig& config) {
    const int n = data.n();
    const int n_train = std::clamp(static_cast<int>(std::lround(config.train_frac * n)), 2, n - 1);
    const int reps = config.replications;
    const int n_methods = static_cast<int>(config.methods.size());

    std::vector<std::vector<double>> per_rep(reps);
    parallel_reps(reps, config.workers, [&](int k) {
        Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(k));
        std::vector<int> perm = rng.permutation(n);
        FunctionalDataset train, test;
        train.grid = test.grid = data.grid;
        train.y.resize(n_train);
        train.X.resize(n_train, data.grid.m());
        test.y.resize(n - n_train);
        test.X.resize(n - n_train, data.grid.m());
        for (int i = 0; i < n_train; ++i) {
            train.y[i] = data.y[perm[i]];
            train.X.row(i) = data.X.row(perm[i]);
        }
        for (int i = n_train; i < n; ++i) {
            test.y[i - n_train] = data.y[perm[i]];
            test.X.row(i - n_train) = data.X.row(perm[i]);
        }
        CovSpectrum spec = empirical_spectrum(train);
        std::vector<double> errs(n_methods, kInf);
        for (int im = 0; im < n_methods; ++im) {
            const Method m = config.methods[im];
            const TuningSpec& t = tuning_for(config, m);
            const std::uint64_t cv_seed =
                Rng::mix(config.seed, static_cast<std::uint64_t>(k), kSaltCv + method_salt(m));
            SlopeEstimate est;
            switch (t.selection) {
                case SelectionMode::fixed:
                    if (m == Method::ST)
                        est = fit_spectral_truncation(train, spec, t.fixed_r);
                    else if (m == Method::TR)
                        est = fit_tikhonov(train, spec, t.fixed_rho);
                    else
                        est = fit_hybrid(train, spec, t.fixed_r, t.fixed_rho);
                    break;
                case SelectionMode::gcv: {
                    if (m == Method::ST) {
                        est = fit_spectral_truncation(train, spec,
                                                      gcv_select_st_r(train, spec, effective_r_values(t, m)));
                    } else {
                        const int r = (m == Method::TR)
                                          ? 0
                                          : std::min(select_r_condition(spec, t.condition_L),
                                                     spec.positive_rank());
                        SelectionResult sel = gcv_rho(train, spec, r, cv_rho_grid(t, spec));
                        est = (m == Method::TR) ? fit_tikhonov(train, spec, sel.rho)
                                                : fit_hybrid(train, spec, r, sel.rho);
                    }
                    break;
                }
                case SelectionMode::kfold:
                case SelectionMode::double_cv: {
                    ParamGrid grid;
                    grid.r_values = effective_r_values(t, m);
                    if (m != Method::ST) grid.rho_values = cv_rho_grid(t, spec);
                    SelectionResult sel = kfold_cv(train, m, grid, t.cv_folds, cv_seed, t.cv_repeats);
                    if (m == Method::ST)
                        est = fit_spectral_truncation(train, spec, sel.r);
                    else if (m == Method::TR)
                        est = fit_tikhonov(train, spec, sel.rho);
                    else
                        est = fit_hybrid(train, spec, sel.r, sel.rho);
                    break;
                }
                case SelectionMode::oracle_best:
                    throw config_error("predict-split: oracle_best needs the unknown truth");
            }
            double sse = 0.0;
            for (int i = 0; i < test.n(); ++i) {
                const double e = test.y[i] - predict(est, test.curve(i));
                sse += e * e;
            }
            errs[im] = sse / test.n();
        }
        per_rep[k] = std::move(errs);
    });

    SplitTable table;
    for (int im = 0; im < n_methods; ++im) {
        double sum = 0.0, sumsq = 0.0;
        for (int k = 0; k < reps; ++k) {
            sum += per_rep[k][im];
            sumsq += per_rep[k][im] * per_rep[k][im];
        }
        SplitRow row;
        row.method = method_name(config.methods[im]);
        row.n_splits = reps;
        row.mean_pred_error = sum / reps;
        const double var = reps > 1 ? (sumsq - sum * sum / reps) / (reps - 1) : 0.0;
        row.mc_se = reps > 1 ? std::sqrt(std::max(var, 0.0) / reps) : 0.0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace flr
