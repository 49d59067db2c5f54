#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "flr/bench.hpp"
#include "flr/fda.hpp"
#include "support.hpp"

using namespace flr;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("flr_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("ingest: toy response-first file") {
    TempFile f("toy.csv");
    write_text(f.path, "1,0,0,0\n3,1,1,1\n");
    FunctionalDataset d = ingest_csv(f.path);
    CHECK(d.n() == 2);
    CHECK(d.grid.m() == 3);
    CHECK(d.y[0] == 1.0);
    CHECK(d.y[1] == 3.0);
    CHECK(d.X(1, 2) == 1.0);
}

TEST_CASE("ingest: grid points from a header row") {
    TempFile f("hdr.csv");
    write_text(f.path, "t:0.1,0.5,0.9\n1,0,0,0\n3,1,1,1\n");
    FunctionalDataset d = ingest_csv(f.path);
    CHECK(d.grid.points[0] == 0.1);
    CHECK(d.grid.points[2] == 0.9);
}

TEST_CASE("ingest: diagnostics for bad files") {
    TempFile empty("empty.csv");
    write_text(empty.path, "");
    CHECK_THROWS_AS(ingest_csv(empty.path), data_error);

    TempFile ragged("ragged.csv");
    write_text(ragged.path, "1,0,0,0\n3,1,1\n");
    CHECK_THROWS_WITH_AS(ingest_csv(ragged.path), doctest::Contains("line 2"), data_error);

    TempFile alpha("alpha.csv");
    write_text(alpha.path, "1,0,zz,0\n3,1,1,1\n");
    CHECK_THROWS_WITH_AS(ingest_csv(alpha.path), doctest::Contains("column 3"), data_error);

    TempFile single("single.csv");
    write_text(single.path, "1,0,0,0\n");
    CHECK_THROWS_AS(ingest_csv(single.path), data_error);
}

TEST_CASE("ingest: two-file layout") {
    TempFile fy("y.csv"), fx("x.csv");
    write_text(fy.path, "1\n2\n3\n");
    write_text(fx.path, "0,0\n1,1\n2,2\n");
    FunctionalDataset d = ingest_csv_two(fy.path, fx.path);
    CHECK(d.n() == 3);
    CHECK(d.grid.m() == 2);
    CHECK(d.y[2] == 3.0);
    FunctionalDataset d2 = ingest_csv(fy.path + ":" + fx.path, CsvLayout::two_file);
    CHECK(d2.X == d.X);
}

TEST_CASE("dataset round-trip through simulate-style CSV") {
    SimDesign design = test::default_design(2.0, Spacing::well_spaced, BetaChoice::beta2, 5, 8, 6);
    DrawResult dr = draw_dataset(design, 0);
    TempFile f("sim.csv");
    emit_dataset_csv(dr.data, f.path);
    FunctionalDataset back = ingest_csv(f.path);
    CHECK(back.n() == dr.data.n());
    CHECK((back.X - dr.data.X).cwiseAbs().maxCoeff() == 0.0);  // shortest round-trip formatting
    CHECK((back.y - dr.data.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.grid.points - dr.data.grid.points).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("emit: stable CSV header and JSON round-trip") {
    MseTable table;
    table.rows.push_back({"beta1", 1.1, "HR", "double_cv", 0.3461234567890123, 0.0123, 2.5, 0.07, 100, 1});
    table.rows.push_back({"beta2", 2.0, "TR", "kfold", 0.7, 0.02, 0.0, 0.3, 100, 0});

    TempFile fcsv("t.csv"), fjson("t.json");
    emit_mse_csv(table, fcsv.path);
    const std::string csv = read_text(fcsv.path);
    CHECK(csv.rfind("beta,alpha,method,selection,mean_mse,mc_se,mean_r,mean_rho,n_reps,n_failed\n", 0) == 0);

    ExperimentConfig cfg;
    emit_mse_json(table, fjson.path, cfg, 1.5);
    MseTable back = parse_mse_json(fjson.path);
    REQUIRE(back.rows.size() == table.rows.size());
    for (size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(back.rows[i].beta == table.rows[i].beta);
        CHECK(back.rows[i].mean_mse == table.rows[i].mean_mse);  // exact double round-trip
        CHECK(back.rows[i].mc_se == table.rows[i].mc_se);
        CHECK(back.rows[i].n_failed == table.rows[i].n_failed);
    }

    MseTable empty_table;
    emit_mse_csv(empty_table, fcsv.path);
    CHECK(read_text(fcsv.path) ==
          "beta,alpha,method,selection,mean_mse,mc_se,mean_r,mean_rho,n_reps,n_failed\n");
}

TEST_CASE("config: json round-trip and validation") {
    ExperimentConfig cfg;
    cfg.design.alpha_decay = 2.0;
    cfg.design.spacing = Spacing::closely_spaced;
    cfg.design.beta_choice = BetaChoice::beta2;
    cfg.hr.selection = SelectionMode::double_cv;
    cfg.hr.r_values = {0, 1, 2, 3};
    cfg.replications = 7;
    cfg.seed = 99;
    cfg.output.path = "out.csv";
    ExperimentConfig back = config_from_json_text(config_to_json(cfg));
    CHECK(back.design.alpha_decay == 2.0);
    CHECK(back.design.spacing == Spacing::closely_spaced);
    CHECK(back.hr.r_values == cfg.hr.r_values);
    CHECK(back.replications == 7);
    CHECK(back.seed == 99);

    CHECK_THROWS_AS(config_from_json_text("{nope"), config_error);
    CHECK_THROWS_AS(config_from_json_text(R"({"replications": 0})"), config_error);
    CHECK_THROWS_AS(config_from_json_text(R"({"design": {"spacing": "diagonal"}})"), config_error);
}

TEST_CASE("run_mc_study: single noiseless replication equals the direct fit") {
    ExperimentConfig cfg;
    cfg.design = test::default_design(2.0, Spacing::well_spaced, BetaChoice::beta2, 0, 300, 20);
    cfg.design.J = 20;
    cfg.design.noise_sd = 0.0;
    cfg.methods = {Method::ST};
    cfg.st.selection = SelectionMode::fixed;
    cfg.st.fixed_r = 5;
    cfg.replications = 1;
    cfg.seed = 314;
    cfg.workers = 1;
    MseTable table = run_mc_study(cfg);
    REQUIRE(table.rows.size() == 1);

    SimDesign design = cfg.design;
    design.seed = cfg.seed;
    DrawResult dr = draw_dataset(design, 0);
    CovSpectrum s = empirical_spectrum(dr.data);
    const double direct = mse_against_truth(fit_spectral_truncation(dr.data, s, 5), dr.beta_true);
    CHECK(table.rows[0].mean_mse == direct);
    CHECK(table.rows[0].mean_mse < 0.05);
    CHECK(table.rows[0].n_failed == 0);
}

TEST_CASE("run_mc_study: identical tables at different worker counts") {
    ExperimentConfig cfg;
    cfg.design = test::default_design(2.0, Spacing::well_spaced, BetaChoice::beta1, 0, 30, 16);
    cfg.design.J = 16;
    cfg.methods = {Method::ST, Method::TR, Method::HR};
    cfg.st.selection = SelectionMode::kfold;
    cfg.st.r_values = {1, 2, 3, 4};
    cfg.st.cv_folds = 2;
    cfg.st.cv_repeats = 2;
    cfg.tr.selection = SelectionMode::kfold;
    cfg.tr.rho_count = 8;
    cfg.tr.cv_folds = 2;
    cfg.tr.cv_repeats = 2;
    cfg.hr.selection = SelectionMode::double_cv;
    cfg.hr.r_values = {0, 1, 2};
    cfg.hr.rho_count = 8;
    cfg.hr.cv_folds = 2;
    cfg.hr.cv_repeats = 2;
    cfg.replications = 24;
    cfg.seed = 2718;

    cfg.workers = 1;
    MseTable a = run_mc_study(cfg);
    cfg.workers = 4;
    MseTable b = run_mc_study(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mean_mse == b.rows[i].mean_mse);
        CHECK(a.rows[i].mc_se == b.rows[i].mc_se);
        CHECK(a.rows[i].mean_r == b.rows[i].mean_r);
        CHECK(a.rows[i].mean_rho == b.rows[i].mean_rho);
    }

    TempFile fa("wa.csv"), fb("wb.csv");
    emit_mse_csv(a, fa.path);
    emit_mse_csv(b, fb.path);
    CHECK(read_text(fa.path) == read_text(fb.path));
}

TEST_CASE("run_mc_study: dumped replications reproduce the emitted mean") {
    ExperimentConfig cfg;
    cfg.design = test::default_design(1.1, Spacing::well_spaced, BetaChoice::beta1, 0, 25, 12);
    cfg.design.J = 12;
    cfg.methods = {Method::TR};
    cfg.tr.selection = SelectionMode::fixed;
    cfg.tr.fixed_rho = 0.1;
    cfg.replications = 19;
    cfg.seed = 11;
    cfg.dump_replications = true;
    MseTable table = run_mc_study(cfg);
    REQUIRE(table.replications.size() == 19);
    double sum = 0.0;
    for (const auto& r : table.replications) sum += r.mse;
    CHECK(table.rows[0].mean_mse == doctest::Approx(sum / 19).epsilon(1e-15));
}

TEST_CASE("run_rho_sweep: degenerate single-cell table matches a TR point") {
    ExperimentConfig cfg;
    cfg.design = test::default_design(1.1, Spacing::well_spaced, BetaChoice::beta2, 0, 30, 12);
    cfg.design.J = 12;
    cfg.replications = 5;
    cfg.seed = 21;
    SweepTable sweep = run_rho_sweep(cfg, {}, {0.3});
    REQUIRE(sweep.rows.size() == 1);
    CHECK(sweep.rows[0].method == "TR");
    CHECK(sweep.rows[0].is_min);

    double acc = 0.0;
    SimDesign design = cfg.design;
    design.seed = cfg.seed;
    for (int k = 0; k < 5; ++k) {
        DrawResult dr = draw_dataset(design, k);
        CovSpectrum s = empirical_spectrum(dr.data);
        acc += mse_against_truth(fit_tikhonov(dr.data, s, 0.3), dr.beta_true);
    }
    CHECK(sweep.rows[0].mean_mse == doctest::Approx(acc / 5).epsilon(1e-9));
}

TEST_CASE("run_split_prediction: exact rank-5 model predicts perfectly") {
    SimDesign design = test::default_design(1.1, Spacing::well_spaced, BetaChoice::beta2, 33, 60, 30);
    design.J = 5;
    design.noise_sd = 0.0;
    DrawResult dr = draw_dataset(design, 0);

    ExperimentConfig cfg;
    cfg.methods = {Method::ST};
    cfg.st.selection = SelectionMode::fixed;
    cfg.st.fixed_r = 5;
    cfg.replications = 20;
    cfg.seed = 500;
    SplitTable table = run_split_prediction(dr.data, cfg);
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].mean_pred_error < 1e-6);

    SplitTable again = run_split_prediction(dr.data, cfg);
    CHECK(table.rows[0].mean_pred_error == again.rows[0].mean_pred_error);  // split determinism
}
