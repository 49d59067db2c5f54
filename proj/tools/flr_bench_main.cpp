#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flr/bench.hpp"
#include "flr/fda.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format;
    long long seed = -1;
    int reps = -1;
    int workers = -1;
    bool dump_replications = false;
    double train_frac = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config (JSON)");
    cmd->add_option("--out", o.out_path, "output path");
    cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "root seed (overrides config)");
    cmd->add_option("--reps", o.reps, "replications (overrides config)");
    cmd->add_option("--workers", o.workers, "worker threads, 0 = hardware");
    cmd->add_flag("--dump-replications", o.dump_replications, "also write per-replication values");
    cmd->add_option("--train-frac", o.train_frac, "training fraction for predict-split");
}

flr::ExperimentConfig load_config(const CommonOpts& o) {
    flr::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = flr::config_from_json_file(o.config_path);
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (o.reps >= 0) cfg.replications = o.reps;
    if (o.workers >= 0) cfg.workers = o.workers;
    if (!o.out_path.empty()) cfg.output.path = o.out_path;
    if (!o.format.empty()) cfg.output.format = o.format;
    if (o.dump_replications) cfg.dump_replications = true;
    if (o.train_frac > 0.0) cfg.train_frac = o.train_frac;
    if (cfg.output.path.empty()) throw flr::config_error("an output path is required (--out)");
    return cfg;
}

flr::FunctionalDataset load_data(const flr::ExperimentConfig& cfg, const std::string& cli_data) {
    std::string path = cli_data;
    if (path.empty() && cfg.data_file) path = *cfg.data_file;
    if (path.empty()) throw flr::config_error("a dataset file is required (--data or config data_file)");
    const flr::CsvLayout layout = cfg.data_layout == "two_file" ? flr::CsvLayout::two_file
                                                                : flr::CsvLayout::response_first;
    return flr::ingest_csv(path, layout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for regularised scalar-on-function regression"};
    app.require_subcommand(1);

    CommonOpts sim_o, fit_o, mc_o, sweep_o, split_o;
    std::string fit_data, split_data, fit_method = "HR";
    int fit_r = -1;
    double fit_rho = -1.0;
    std::vector<int> sweep_r{1, 2, 3, 4, 5};
    double sweep_lo = 1e-4, sweep_hi = 10.0;
    int sweep_count = 40;

    CLI::App* sim = app.add_subcommand("simulate", "draw one dataset from a design and write it as CSV");
    add_common(sim, sim_o);

    CLI::App* fit = app.add_subcommand("fit", "fit one method on one dataset, write the slope curve");
    add_common(fit, fit_o);
    fit->add_option("--data", fit_data, "dataset CSV (response_first layout)");
    fit->add_option("--method", fit_method, "ST|TR|HR")->check(CLI::IsMember({"ST", "TR", "HR"}));
    fit->add_option("--r", fit_r, "fixed r (overrides tuning)");
    fit->add_option("--rho", fit_rho, "fixed rho (overrides tuning)");

    CLI::App* mc = app.add_subcommand("mc-bench", "Monte-Carlo estimation-MSE study");
    add_common(mc, mc_o);

    CLI::App* sweep = app.add_subcommand("rho-sweep", "MC-mean MSE curves over a rho grid");
    add_common(sweep, sweep_o);
    sweep->add_option("--r-values", sweep_r, "hybrid split sizes");
    sweep->add_option("--rho-lo", sweep_lo, "grid lower end");
    sweep->add_option("--rho-hi", sweep_hi, "grid upper end");
    sweep->add_option("--rho-count", sweep_count, "grid size");

    CLI::App* split = app.add_subcommand("predict-split", "random-split prediction error on a dataset");
    add_common(split, split_o);
    split->add_option("--data", split_data, "dataset CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = std::chrono::steady_clock::now();
        if (sim->parsed()) {
            flr::ExperimentConfig cfg = load_config(sim_o);
            flr::SimDesign design = cfg.design;
            design.seed = cfg.seed;
            flr::DrawResult dr = flr::draw_dataset(design, 0);
            flr::emit_dataset_csv(dr.data, cfg.output.path);
            std::printf("wrote %d curves on %d points to %s\n", dr.data.n(), dr.data.grid.m(),
                        cfg.output.path.c_str());
        } else if (fit->parsed()) {
            flr::ExperimentConfig cfg = load_config(fit_o);
            flr::FunctionalDataset data = load_data(cfg, fit_data);
            flr::CovSpectrum spec = flr::empirical_spectrum(data);
            flr::SlopeEstimate est;
            if (fit_method == "ST") {
                const int r = fit_r > 0 ? fit_r : cfg.st.fixed_r;
                est = flr::fit_spectral_truncation(data, spec, r);
            } else if (fit_method == "TR") {
                const double rho = fit_rho > 0 ? fit_rho : cfg.tr.fixed_rho;
                est = flr::fit_tikhonov(data, spec, rho);
            } else {
                const int r = fit_r >= 0 ? fit_r : cfg.hr.fixed_r;
                const double rho = fit_rho > 0 ? fit_rho : cfg.hr.fixed_rho;
                est = flr::fit_hybrid(data, spec, r, rho);
            }
            std::string out = "t,beta\n";
            char buf[64];
            for (int p = 0; p < est.grid.m(); ++p) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", est.grid.points[p], est.beta.values[p]);
                out += buf;
            }
            std::ofstream f(cfg.output.path, std::ios::binary);
            f << out;
            std::printf("%s fit: intercept=%.6g r=%d rho=%.6g df=%.3f -> %s\n", fit_method.c_str(),
                        est.intercept, est.r, est.rho, est.df, cfg.output.path.c_str());
        } else if (mc->parsed()) {
            flr::ExperimentConfig cfg = load_config(mc_o);
            flr::MseTable table = flr::run_mc_study(cfg);
            if (cfg.output.format == "json")
                flr::emit_mse_json(table, cfg.output.path, cfg, seconds_since(t0));
            else
                flr::emit_mse_csv(table, cfg.output.path);
            if (cfg.dump_replications) flr::emit_replications_csv(table, cfg.output.path + ".reps.csv");
            for (const auto& r : table.rows)
                std::printf("%s/%s: mean_mse=%.4f se=%.4f (failed %d/%d)\n", r.method.c_str(),
                            r.selection.c_str(), r.mean_mse, r.mc_se, r.n_failed, r.n_reps);
        } else if (sweep->parsed()) {
            flr::ExperimentConfig cfg = load_config(sweep_o);
            flr::SweepTable table =
                flr::run_rho_sweep(cfg, sweep_r, flr::log_spaced(sweep_lo, sweep_hi, sweep_count));
            if (cfg.output.format == "json")
                flr::emit_sweep_json(table, cfg.output.path, cfg, seconds_since(t0));
            else
                flr::emit_sweep_csv(table, cfg.output.path);
            std::printf("wrote %zu sweep rows to %s\n", table.rows.size(), cfg.output.path.c_str());
        } else if (split->parsed()) {
            flr::ExperimentConfig cfg = load_config(split_o);
            flr::FunctionalDataset data = load_data(cfg, split_data);
            flr::SplitTable table = flr::run_split_prediction(data, cfg);
            if (cfg.output.format == "json")
                flr::emit_split_json(table, cfg.output.path, cfg, seconds_since(t0));
            else
                flr::emit_split_csv(table, cfg.output.path);
            for (const auto& r : table.rows)
                std::printf("%s: pred_error=%.4f se=%.4f over %d splits\n", r.method.c_str(),
                            r.mean_pred_error, r.mc_se, r.n_splits);
        }
    } catch (const flr::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const flr::data_error& e) {
        std::fprintf(stderr, "ingestion error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run error: %s\n", e.what());
        return 4;
    }
    return 0;
}
