#pragma once

#include <optional>
#include <string>

#include "flr/selection.hpp"
#include "flr/simgen.hpp"

namespace flr {

enum class SelectionMode { fixed, gcv, kfold, double_cv, oracle_best };

const char* selection_name(SelectionMode s);
SelectionMode selection_from_string(const std::string& s);

/// Tuning-parameter search space and selection settings for one method.
struct TuningSpec {
    SelectionMode selection = SelectionMode::kfold;
    std::vector<int> r_values;        // ST truncation levels / HR split sizes
    double rho_lo = 1e-2;             // CV rho grid, relative to lambda_1_hat
    double rho_hi = 10.0;
    int rho_count = 40;
    bool rho_relative = true;         // false: rho grid is absolute
    std::vector<double> rho_values;   // explicit absolute grid (overrides lo/hi)
    int fixed_r = 1;
    double fixed_rho = 0.1;
    int cv_folds = 2;
    int cv_repeats = 20;
    double condition_L = 30.0;        // r rule for SelectionMode::gcv
};

struct OutputSpec {
    std::string path;
    std::string format = "csv";  // csv | json
};

struct ExperimentConfig {
    SimDesign design;
    std::vector<Method> methods = {Method::ST, Method::TR, Method::HR};
    TuningSpec st, tr, hr;
    int replications = 1000;
    std::uint64_t seed = 1;
    int workers = 0;  // 0: hardware concurrency
    OutputSpec output;
    bool dump_replications = false;
    double train_frac = 0.5;  // predict-split protocol
    std::optional<std::string> data_file;
    std::string data_layout = "response_first";  // or "two_file" with y:<path>
};

ExperimentConfig config_from_json_file(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct MseRow {
    std::string beta;
    double alpha = 0.0;
    std::string method;
    std::string selection;
    double mean_mse = 0.0;
    double mc_se = 0.0;
    double mean_r = 0.0;
    double mean_rho = 0.0;
    int n_reps = 0;
    int n_failed = 0;
};

struct ReplicationRecord {
    int rep = 0;
    std::string method;
    std::string selection;
    double mse = 0.0;
    int r = 0;
    double rho = 0.0;
};

struct MseTable {
    std::vector<MseRow> rows;
    std::vector<ReplicationRecord> replications;  // filled when dumping
};

struct SweepRow {
    std::string method;
    int r = 0;
    double rho = 0.0;
    double mean_mse = 0.0;
    double mc_se = 0.0;
    bool is_min = false;  // per-curve minimum
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

struct SplitRow {
    std::string method;
    double mean_pred_error = 0.0;
    double mc_se = 0.0;
    int n_splits = 0;
};

struct SplitTable {
    std::vector<SplitRow> rows;
};

/// Monte-Carlo estimation-MSE study over config.replications datasets.
/// Deterministic for a fixed (config, seed) at any worker count. Replications
/// whose fits fail are excluded and counted; more than 1% failures aborts.
MseTable run_mc_study(const ExperimentConfig& config);

/// MC-mean MSE at every grid point for TR and for HR at each r in r_values.
SweepTable run_rho_sweep(const ExperimentConfig& config, const std::vector<int>& r_values,
                         const std::vector<double>& rho_grid);

/// Random-split prediction error on a fixed dataset: tuning on the training
/// part only, mean squared prediction error on the held-out part, averaged
/// over config.replications splits.
SplitTable run_split_prediction(const FunctionalDataset& data, const ExperimentConfig& config);

enum class CsvLayout { response_first, two_file };

/// response_first: column 1 = y, columns 2..m+1 = curve values; an optional
/// first line "t:0.1,0.5,..." supplies grid points. two_file is handled by
/// ingest_csv_two.
FunctionalDataset ingest_csv(const std::string& path, CsvLayout layout = CsvLayout::response_first);
FunctionalDataset ingest_csv_two(const std::string& y_path, const std::string& x_path);

void emit_mse_csv(const MseTable& table, const std::string& path);
void emit_mse_json(const MseTable& table, const std::string& path, const ExperimentConfig& cfg,
                   double wall_seconds);
MseTable parse_mse_json(const std::string& path);
void emit_replications_csv(const MseTable& table, const std::string& path);
void emit_sweep_csv(const SweepTable& table, const std::string& path);
void emit_sweep_json(const SweepTable& table, const std::string& path, const ExperimentConfig& cfg,
                     double wall_seconds);
void emit_split_csv(const SplitTable& table, const std::string& path);
void emit_split_json(const SplitTable& table, const std::string& path, const ExperimentConfig& cfg,
                     double wall_seconds);
void emit_dataset_csv(const FunctionalDataset& data, const std::string& path);

const char* beta_label(const SimDesign& d);

}  // namespace flr
