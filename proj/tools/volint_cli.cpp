#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "volint/harness.hpp"

namespace fs = std::filesystem;
using namespace volint;

namespace {

struct CommonFlags {
    std::string model;
    std::string config_path;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<double> alpha;
    std::optional<double> lambda;
    std::optional<int> window;
    std::optional<int> refit_every;
    std::optional<unsigned> threads;
    std::string out = "out";
    bool full_scale = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "Flat JSON config applied before the flags");
    cmd->add_option("--reps", f.reps, "Number of replications");
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--alpha", f.alpha, "VaR level for the exceedance ratio");
    cmd->add_option("--lambda", f.lambda, "Smoothing parameter of the ES estimator");
    cmd->add_option("--window", f.window, "ES window n (also the Hist window)");
    cmd->add_option("--refit-every", f.refit_every, "Steps between state-domain refits");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware)");
    cmd->add_option("--out", f.out, "Output directory");
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("cannot open " + path);
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

StudyConfig build_config(const CommonFlags& f, StudyModel fallback) {
    StudyModel model = f.model.empty() ? fallback : parse_model(f.model);
    StudyConfig cfg = default_config(model);
    if (!f.config_path.empty()) {
        cfg = config_from_json(read_file(f.config_path), cfg);
        if (!f.model.empty()) {
            cfg.model = model;
        }
    }
    if (f.full_scale) cfg.n_reps = kFullScaleReps;
    if (f.reps) cfg.n_reps = *f.reps;
    if (f.seed) cfg.seed = *f.seed;
    if (f.alpha) cfg.alpha = *f.alpha;
    if (f.lambda) cfg.es.lambda = *f.lambda;
    if (f.window) {
        cfg.es.n = *f.window;
        cfg.hist_window = *f.window;
    }
    if (f.refit_every) cfg.state_refit_every = *f.refit_every;
    if (f.threads) cfg.threads = *f.threads;
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) {
        throw std::runtime_error("cannot write " + (dir / name).string());
    }
    return os;
}

void write_common(const fs::path& dir, const MeasureReport& report, const MeasureTable& table,
                  std::span<const std::size_t> rep_ids, const std::string& title) {
    auto csv = open_out(dir, "report.csv");
    write_report_csv(csv, report);
    auto txt = open_out(dir, "report.txt");
    write_report_table(txt, report, title);
    auto per = open_out(dir, "per_rep.csv");
    write_per_rep_csv(per, table, rep_ids);
}

int run_simulate(const CommonFlags& f) {
    const StudyConfig cfg = build_config(f, StudyModel::CIR);
    fs::create_directories(f.out);
    const auto t0 = std::chrono::steady_clock::now();
    const StudyResult res = run_simulation_study(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream title;
    title << "model=" << to_string(cfg.model) << " reps=" << cfg.n_reps << " seed=" << cfg.seed
          << " lambda=" << cfg.es.lambda << " n=" << cfg.es.n;
    const fs::path dir(f.out);
    write_common(dir, res.report, res.per_rep, res.rep_ids, title.str());
    auto curve = open_out(dir, "fig2_curve.csv");
    write_curve_csv(curve, res.per_rep.estimator_ids, res.curve);

    write_report_table(std::cout, res.report, title.str());
    for (const auto& failure : res.failures) {
        std::cerr << "replication failed: " << failure << '\n';
    }
    std::fprintf(stderr, "%zu replications in %.1f s; outputs in %s\n", res.rep_ids.size(), secs,
                 f.out.c_str());
    return 0;
}

struct BacktestFlags {
    std::string data;
    std::optional<std::size_t> in_sample;
    std::string in_sample_end;
    double delta = 1.0 / 52.0;
    bool forward_fill = false;
    std::string returns;
    std::optional<std::size_t> residual_window;
};

int run_backtest_cmd(const CommonFlags& f, const BacktestFlags& b) {
    StudyConfig cfg = build_config(f, StudyModel::ExternalCsv);
    if (!b.returns.empty()) {
        if (b.returns == "log") {
            cfg.returns = ReturnKind::Log;
        } else if (b.returns == "scaled_diff") {
            cfg.returns = ReturnKind::ScaledDiff;
        } else {
            throw std::invalid_argument("--returns must be log or scaled_diff");
        }
    }
    if (b.residual_window) cfg.residual_window = *b.residual_window;

    std::ifstream is(b.data);
    if (!is) {
        throw std::runtime_error("cannot open " + b.data);
    }
    BacktestDataset data =
        load_backtest_csv(is, fs::path(b.data).stem().string(), CsvOptions{b.forward_fill});
    data.delta = b.delta;
    if (b.in_sample) {
        data.in_sample_len = *b.in_sample;
    } else if (!b.in_sample_end.empty()) {
        data.in_sample_len = rows_before(data, b.in_sample_end);
    } else {
        data.in_sample_len = data.levels.size() * 3 / 4;
    }
    if (data.filled_rows > 0) {
        std::cerr << "forward-filled " << data.filled_rows << " missing rows\n";
    }

    fs::create_directories(f.out);
    const BacktestResult res = run_backtest(data, cfg);
    std::ostringstream title;
    title << data.name << ": " << data.levels.size() << " obs, in-sample " << data.in_sample_len;
    const std::size_t rep0[] = {0};
    write_common(fs::path(f.out), res.report, res.per_rep, rep0, title.str());
    write_report_table(std::cout, res.report, title.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volatility forecasting by integrating time- and state-domain estimators"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    auto* sim = app.add_subcommand("simulate", "Simulation study with IMADE/MADE/RADE/ER/PE");
    add_common(sim, sim_flags);
    sim->add_option("--model", sim_flags.model, "cir, sv or gbm")->default_str("cir");
    sim->add_flag("--full-scale", sim_flags.full_scale, "Use 600 replications");

    CommonFlags bt_flags;
    BacktestFlags bt;
    auto* back = app.add_subcommand("backtest", "Backtest on a date,value CSV of levels");
    add_common(back, bt_flags);
    back->add_option("--data", bt.data, "CSV file with header date,value")->required();
    back->add_option("--in-sample", bt.in_sample, "Number of in-sample rows");
    back->add_option("--in-sample-end", bt.in_sample_end, "First out-sample date (YYYY-MM-DD)");
    back->add_option("--delta", bt.delta, "Sampling interval in years");
    back->add_option("--returns", bt.returns, "log or scaled_diff");
    back->add_option("--residual-window", bt.residual_window, "Residual window for the quantile");
    back->add_flag("--forward-fill", bt.forward_fill, "Fill missing values with the last level");

    CommonFlags cfg_flags;
    bool dump = false;
    auto* config = app.add_subcommand("config", "Configuration utilities");
    config->add_flag("--dump", dump, "Print the default configuration as JSON");
    config->add_option("--model", cfg_flags.model, "cir, sv, gbm or csv");
    config->add_option("--config", cfg_flags.config_path, "Merge this file before printing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            return run_simulate(sim_flags);
        }
        if (*back) {
            return run_backtest_cmd(bt_flags, bt);
        }
        if (*config) {
            if (!dump) {
                std::cerr << "config: nothing to do (use --dump)\n";
                return 2;
            }
            StudyConfig cfg =
                default_config(cfg_flags.model.empty() ? StudyModel::CIR : parse_model(cfg_flags.model));
            if (!cfg_flags.config_path.empty()) {
                cfg = config_from_json(read_file(cfg_flags.config_path), cfg);
            }
            std::cout << config_to_json(cfg);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
