#include <charconv>
#include <fstream>
#include <sstream>

#include "flr/bench.hpp"

#include <json.hpp>

namespace flr {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_cell(const std::string& tok, int line, int col) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t' || *(e - 1) == '\r')) --e;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
        throw data_error("ingest: non-numeric cell at line " + std::to_string(line) + ", column " +
                         std::to_string(col));
    return v;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

struct RawCsv {
    std::optional<Eigen::VectorXd> grid_points;
    std::vector<std::vector<double>> rows;
};

RawCsv read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("ingest: cannot open " + path);
    RawCsv out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("t:", 0) == 0) {
            if (lineno != 1) throw data_error("ingest: grid header allowed on line 1 only");
            auto toks = split_commas(line.substr(2));
            Eigen::VectorXd pts(toks.size());
            for (size_t i = 0; i < toks.size(); ++i)
                pts[i] = parse_cell(toks[i], lineno, static_cast<int>(i) + 1);
            out.grid_points = std::move(pts);
            continue;
        }
        auto toks = split_commas(line);
        std::vector<double> vals;
        vals.reserve(toks.size());
        for (size_t i = 0; i < toks.size(); ++i)
            vals.push_back(parse_cell(toks[i], lineno, static_cast<int>(i) + 1));
        if (!out.rows.empty() && vals.size() != out.rows.front().size())
            throw data_error("ingest: ragged row at line " + std::to_string(lineno) + " (" +
                             std::to_string(vals.size()) + " cells, expected " +
                             std::to_string(out.rows.front().size()) + ")");
        out.rows.push_back(std::move(vals));
    }
    if (out.rows.empty()) throw data_error("ingest: no data rows in " + path);
    return out;
}

Grid grid_from(const std::optional<Eigen::VectorXd>& pts, int m) {
    if (pts) {
        if (pts->size() != m)
            throw data_error("ingest: grid header has " + std::to_string(pts->size()) +
                             " points, curves have " + std::to_string(m));
        return Grid(*pts);
    }
    return Grid::midpoints(m);
}

}  // namespace

FunctionalDataset ingest_csv(const std::string& path, CsvLayout layout) {
    if (layout == CsvLayout::two_file) {
        const auto sep = path.find(':');
        if (sep == std::string::npos)
            throw data_error("ingest: two_file layout expects \"<y_path>:<x_path>\"");
        return ingest_csv_two(path.substr(0, sep), path.substr(sep + 1));
    }
    RawCsv raw = read_numeric_csv(path);
    const int n = static_cast<int>(raw.rows.size());
    const int m = static_cast<int>(raw.rows.front().size()) - 1;
    if (m < 2) throw data_error("ingest: rows must carry a response plus at least 2 curve values");
    if (n < 2) throw data_error("ingest: need at least 2 observations");
    FunctionalDataset data;
    data.grid = grid_from(raw.grid_points, m);
    data.y.resize(n);
    data.X.resize(n, m);
    for (int i = 0; i < n; ++i) {
        data.y[i] = raw.rows[i][0];
        for (int p = 0; p < m; ++p) data.X(i, p) = raw.rows[i][p + 1];
    }
    return FunctionalDataset(data.grid, data.y, data.X);  // re-validate
}

FunctionalDataset ingest_csv_two(const std::string& y_path, const std::string& x_path) {
    RawCsv yraw = read_numeric_csv(y_path);
    RawCsv xraw = read_numeric_csv(x_path);
    const int n = static_cast<int>(xraw.rows.size());
    const int m = static_cast<int>(xraw.rows.front().size());
    if (static_cast<int>(yraw.rows.size()) != n)
        throw data_error("ingest: response file has " + std::to_string(yraw.rows.size()) +
                         " rows, curve file has " + std::to_string(n));
    FunctionalDataset data;
    data.grid = grid_from(xraw.grid_points, m);
    data.y.resize(n);
    data.X.resize(n, m);
    for (int i = 0; i < n; ++i) {
        if (yraw.rows[i].size() != 1) throw data_error("ingest: response file must have one column");
        data.y[i] = yraw.rows[i][0];
        for (int p = 0; p < m; ++p) data.X(i, p) = xraw.rows[i][p];
    }
    return FunctionalDataset(data.grid, data.y, data.X);
}

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("emit: cannot open " + path + " for writing");
    out << text;
    if (!out) throw data_error("emit: write failure on " + path);
}

json design_to_json(const SimDesign& d) {
    json j;
    j["alpha"] = d.alpha_decay;
    j["spacing"] = d.spacing == Spacing::well_spaced ? "well_spaced" : "closely_spaced";
    j["beta"] = beta_label(d);
    if (d.beta_choice == BetaChoice::custom) {
        j["beta_coeffs"] = std::vector<double>(d.custom_beta_coeffs.begin(), d.custom_beta_coeffs.end());
    }
    j["n"] = d.n;
    j["m"] = d.m;
    j["J"] = d.J;
    j["noise_sd"] = d.noise_sd;
    j["measurement_error_sd"] = d.measurement_error_sd;
    j["grid"] = d.grid_kind == GridKind::midpoint ? "midpoint" : "endpoint";
    return j;
}

json tuning_to_json(const TuningSpec& t) {
    json j;
    j["selection"] = selection_name(t.selection);
    if (!t.r_values.empty()) j["r_values"] = t.r_values;
    j["rho_lo"] = t.rho_lo;
    j["rho_hi"] = t.rho_hi;
    j["rho_count"] = t.rho_count;
    j["rho_relative"] = t.rho_relative;
    if (!t.rho_values.empty()) j["rho_values"] = t.rho_values;
    j["fixed_r"] = t.fixed_r;
    j["fixed_rho"] = t.fixed_rho;
    j["folds"] = t.cv_folds;
    j["repeats"] = t.cv_repeats;
    j["condition_L"] = t.condition_L;
    return j;
}

void tuning_from_json(const json& j, TuningSpec& t) {
    if (j.contains("selection")) t.selection = selection_from_string(j.at("selection").get<std::string>());
    if (j.contains("r_values")) t.r_values = j.at("r_values").get<std::vector<int>>();
    if (j.contains("rho_lo")) t.rho_lo = j.at("rho_lo").get<double>();
    if (j.contains("rho_hi")) t.rho_hi = j.at("rho_hi").get<double>();
    if (j.contains("rho_count")) t.rho_count = j.at("rho_count").get<int>();
    if (j.contains("rho_relative")) t.rho_relative = j.at("rho_relative").get<bool>();
    if (j.contains("rho_values")) t.rho_values = j.at("rho_values").get<std::vector<double>>();
    if (j.contains("fixed_r")) t.fixed_r = j.at("fixed_r").get<int>();
    if (j.contains("fixed_rho")) t.fixed_rho = j.at("fixed_rho").get<double>();
    if (j.contains("folds")) t.cv_folds = j.at("folds").get<int>();
    if (j.contains("repeats")) t.cv_repeats = j.at("repeats").get<int>();
    if (j.contains("condition_L")) t.condition_L = j.at("condition_L").get<double>();
}

Method method_from_string(const std::string& s) {
    if (s == "ST") return Method::ST;
    if (s == "TR") return Method::TR;
    if (s == "HR") return Method::HR;
    throw config_error("unknown method: " + s);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["design"] = design_to_json(cfg.design);
    std::vector<std::string> methods;
    for (Method m : cfg.methods) methods.emplace_back(method_name(m));
    j["methods"] = methods;
    j["tuning"]["ST"] = tuning_to_json(cfg.st);
    j["tuning"]["TR"] = tuning_to_json(cfg.tr);
    j["tuning"]["HR"] = tuning_to_json(cfg.hr);
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
    j["dump_replications"] = cfg.dump_replications;
    j["train_frac"] = cfg.train_frac;
    if (cfg.data_file) j["data_file"] = *cfg.data_file;
    j["data_layout"] = cfg.data_layout;
    return j.dump(2);
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (j.contains("design")) {
            const json& d = j.at("design");
            if (d.contains("alpha")) cfg.design.alpha_decay = d.at("alpha").get<double>();
            if (d.contains("spacing")) {
                const std::string s = d.at("spacing").get<std::string>();
                if (s == "well_spaced" || s == "well")
                    cfg.design.spacing = Spacing::well_spaced;
                else if (s == "closely_spaced" || s == "close")
                    cfg.design.spacing = Spacing::closely_spaced;
                else
                    throw config_error("config: unknown spacing " + s);
            }
            if (d.contains("beta")) {
                const std::string b = d.at("beta").get<std::string>();
                if (b == "beta1")
                    cfg.design.beta_choice = BetaChoice::beta1;
                else if (b == "beta2")
                    cfg.design.beta_choice = BetaChoice::beta2;
                else if (b == "beta3")
                    cfg.design.beta_choice = BetaChoice::beta3;
                else if (b == "custom")
                    cfg.design.beta_choice = BetaChoice::custom;
                else
                    throw config_error("config: unknown beta " + b);
            }
            if (d.contains("beta_coeffs")) {
                auto v = d.at("beta_coeffs").get<std::vector<double>>();
                cfg.design.custom_beta_coeffs = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
            }
            if (d.contains("n")) cfg.design.n = d.at("n").get<int>();
            if (d.contains("m")) cfg.design.m = d.at("m").get<int>();
            if (d.contains("J")) cfg.design.J = d.at("J").get<int>();
            if (d.contains("noise_sd")) cfg.design.noise_sd = d.at("noise_sd").get<double>();
            if (d.contains("measurement_error_sd"))
                cfg.design.measurement_error_sd = d.at("measurement_error_sd").get<double>();
            if (d.contains("grid")) {
                const std::string g = d.at("grid").get<std::string>();
                if (g == "midpoint")
                    cfg.design.grid_kind = GridKind::midpoint;
                else if (g == "endpoint")
                    cfg.design.grid_kind = GridKind::endpoint;
                else
                    throw config_error("config: unknown grid kind " + g);
            }
        }
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& s : j.at("methods")) cfg.methods.push_back(method_from_string(s.get<std::string>()));
        }
        if (j.contains("tuning")) {
            const json& t = j.at("tuning");
            if (t.contains("ST")) tuning_from_json(t.at("ST"), cfg.st);
            if (t.contains("TR")) tuning_from_json(t.at("TR"), cfg.tr);
            if (t.contains("HR")) tuning_from_json(t.at("HR"), cfg.hr);
        }
        if (j.contains("replications")) cfg.replications = j.at("replications").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
        if (j.contains("output")) {
            cfg.output.path = j.at("output").value("path", "");
            cfg.output.format = j.at("output").value("format", "csv");
        }
        if (j.contains("dump_replications")) cfg.dump_replications = j.at("dump_replications").get<bool>();
        if (j.contains("train_frac")) cfg.train_frac = j.at("train_frac").get<double>();
        if (j.contains("data_file")) cfg.data_file = j.at("data_file").get<std::string>();
        if (j.contains("data_layout")) cfg.data_layout = j.at("data_layout").get<std::string>();
    } catch (const json::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw config_error("config: format must be csv or json");
    if (cfg.replications < 1) throw config_error("config: replications must be >= 1");
    if (cfg.methods.empty()) throw config_error("config: at least one method required");
    if (!(cfg.train_frac > 0.0 && cfg.train_frac < 1.0))
        throw config_error("config: train_frac must be in (0,1)");
    return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

namespace {

json mse_row_to_json(const MseRow& r) {
    return json{{"beta", r.beta},         {"alpha", r.alpha},   {"method", r.method},
                {"selection", r.selection}, {"mean_mse", r.mean_mse}, {"mc_se", r.mc_se},
                {"mean_r", r.mean_r},     {"mean_rho", r.mean_rho}, {"n_reps", r.n_reps},
                {"n_failed", r.n_failed}};
}

}  // namespace

void emit_mse_csv(const MseTable& table, const std::string& path) {
    std::string out = "beta,alpha,method,selection,mean_mse,mc_se,mean_r,mean_rho,n_reps,n_failed\n";
    for (const MseRow& r : table.rows) {
        out += r.beta + ',' + fmt(r.alpha) + ',' + r.method + ',' + r.selection + ',' +
               fmt(r.mean_mse) + ',' + fmt(r.mc_se) + ',' + fmt(r.mean_r) + ',' + fmt(r.mean_rho) +
               ',' + std::to_string(r.n_reps) + ',' + std::to_string(r.n_failed) + '\n';
    }
    write_file(path, out);
}

void emit_mse_json(const MseTable& table, const std::string& path, const ExperimentConfig& cfg,
                   double wall_seconds) {
    json j;
    j["records"] = json::array();
    for (const MseRow& r : table.rows) j["records"].push_back(mse_row_to_json(r));
    j["metadata"] = {{"config", json::parse(config_to_json(cfg))},
                     {"seed", cfg.seed},
                     {"version", "0.1.0"},
                     {"wall_seconds", wall_seconds}};
    write_file(path, j.dump(2) + "\n");
}

MseTable parse_mse_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("parse: cannot open " + path);
    json j = json::parse(in, nullptr, true);
    MseTable table;
    for (const auto& rec : j.at("records")) {
        MseRow r;
        r.beta = rec.at("beta").get<std::string>();
        r.alpha = rec.at("alpha").get<double>();
        r.method = rec.at("method").get<std::string>();
        r.selection = rec.at("selection").get<std::string>();
        r.mean_mse = rec.at("mean_mse").get<double>();
        r.mc_se = rec.at("mc_se").get<double>();
        r.mean_r = rec.at("mean_r").get<double>();
        r.mean_rho = rec.at("mean_rho").get<double>();
        r.n_reps = rec.at("n_reps").get<int>();
        r.n_failed = rec.at("n_failed").get<int>();
        table.rows.push_back(std::move(r));
    }
    return table;
}

void emit_replications_csv(const MseTable& table, const std::string& path) {
    std::string out = "rep,method,selection,mse,r,rho\n";
    for (const ReplicationRecord& r : table.replications) {
        out += std::to_string(r.rep) + ',' + r.method + ',' + r.selection + ',' + fmt(r.mse) + ',' +
               std::to_string(r.r) + ',' + fmt(r.rho) + '\n';
    }
    write_file(path, out);
}

void emit_sweep_csv(const SweepTable& table, const std::string& path) {
    std::string out = "method,r,rho,mean_mse,mc_se,is_min\n";
    for (const SweepRow& r : table.rows) {
        out += r.method + ',' + std::to_string(r.r) + ',' + fmt(r.rho) + ',' + fmt(r.mean_mse) +
               ',' + fmt(r.mc_se) + ',' + (r.is_min ? "1" : "0") + '\n';
    }
    write_file(path, out);
}

void emit_sweep_json(const SweepTable& table, const std::string& path, const ExperimentConfig& cfg,
                     double wall_seconds) {
    json j;
    j["records"] = json::array();
    for (const SweepRow& r : table.rows)
        j["records"].push_back(json{{"method", r.method},
                                    {"r", r.r},
                                    {"rho", r.rho},
                                    {"mean_mse", r.mean_mse},
                                    {"mc_se", r.mc_se},
                                    {"is_min", r.is_min}});
    j["metadata"] = {{"config", json::parse(config_to_json(cfg))},
                     {"seed", cfg.seed},
                     {"version", "0.1.0"},
                     {"wall_seconds", wall_seconds}};
    write_file(path, j.dump(2) + "\n");
}

void emit_split_csv(const SplitTable& table, const std::string& path) {
    std::string out = "method,mean_pred_error,mc_se,n_splits\n";
    for (const SplitRow& r : table.rows) {
        out += r.method + ',' + fmt(r.mean_pred_error) + ',' + fmt(r.mc_se) + ',' +
               std::to_string(r.n_splits) + '\n';
    }
    write_file(path, out);
}

void emit_split_json(const SplitTable& table, const std::string& path, const ExperimentConfig& cfg,
                     double wall_seconds) {
    json j;
    j["records"] = json::array();
    for (const SplitRow& r : table.rows)
        j["records"].push_back(json{{"method", r.method},
                                    {"mean_pred_error", r.mean_pred_error},
                                    {"mc_se", r.mc_se},
                                    {"n_splits", r.n_splits}});
    j["metadata"] = {{"config", json::parse(config_to_json(cfg))},
                     {"seed", cfg.seed},
                     {"version", "0.1.0"},
                     {"wall_seconds", wall_seconds}};
    write_file(path, j.dump(2) + "\n");
}

void emit_dataset_csv(const FunctionalDataset& data, const std::string& path) {
    std::string out = "t:";
    for (int p = 0; p < data.grid.m(); ++p) {
        if (p) out += ',';
        out += fmt(data.grid.points[p]);
    }
    out += '\n';
    for (int i = 0; i < data.n(); ++i) {
        out += fmt(data.y[i]);
        for (int p = 0; p < data.grid.m(); ++p) {
            out += ',';
            out += fmt(data.X(i, p));
        }
        out += '\n';
    }
    write_file(path, out);
}

}  // namespace flr
