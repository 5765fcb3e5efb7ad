#include "volint/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "volint/errors.hpp"
#include "volint/format.hpp"
#include "volint/integration.hpp"

namespace volint {

std::string_view to_string(EstimatorId id) {
    switch (id) {
    case EstimatorId::Hist: return "Hist";
    case EstimatorId::RiskM: return "RiskM";
    case EstimatorId::SemiProxy: return "SemiProxy";
    case EstimatorId::NonBay: return "NonBay";
    case EstimatorId::Integ: return "Integ";
    }
    return "?";
}

EstimatorId parse_estimator(std::string_view name) {
    for (EstimatorId id : kAllEstimators) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown estimator: " + std::string(name));
}

std::string_view to_string(StudyModel model) {
    switch (model) {
    case StudyModel::CIR: return "cir";
    case StudyModel::SV: return "sv";
    case StudyModel::GBM: return "gbm";
    case StudyModel::ExternalCsv: return "csv";
    }
    return "?";
}

StudyModel parse_model(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (StudyModel m : {StudyModel::CIR, StudyModel::SV, StudyModel::GBM, StudyModel::ExternalCsv}) {
        if (to_string(m) == lower) {
            return m;
        }
    }
    throw std::invalid_argument("unknown model: " + std::string(name));
}

void StudyConfig::validate() const {
    es.validate();
    if (!(delta > 0.0)) {
        throw std::invalid_argument("delta must be positive");
    }
    if (model != StudyModel::ExternalCsv) {
        if (in_sample_len < 2 || in_sample_len >= series_len) {
            throw std::invalid_argument("need 2 <= in_sample_len < series_len");
        }
    }
    if (n_reps < 1) {
        throw std::invalid_argument("n_reps must be >= 1");
    }
    if (state_refit_every < 1) {
        throw std::invalid_argument("state_refit_every must be >= 1");
    }
    if (hist_window < 1 || max_lag < 1) {
        throw std::invalid_argument("hist_window and max_lag must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (!(trim_upper >= 0.0 && trim_upper < 1.0)) {
        throw std::invalid_argument("trim_upper must lie in [0, 1)");
    }
    if (estimators.empty()) {
        throw std::invalid_argument("no estimators selected");
    }
    if (semi_grid.empty()) {
        throw std::invalid_argument("semi_grid is empty");
    }
    for (double l : semi_grid) {
        EsConfig{l, es.n}.validate();
    }
    if (effective_semi_window() < 2 * es.n) {
        throw std::invalid_argument("semi_window must be at least 2n");
    }
}

StudyConfig default_config(StudyModel model) {
    StudyConfig cfg;
    cfg.model = model;
    switch (model) {
    case StudyModel::CIR:
        break;
    case StudyModel::SV:
        cfg.delta = 1.0 / 12.0;
        cfg.series_len = 1000;
        cfg.in_sample_len = 750;
        cfg.es = {0.94, 12};
        cfg.hist_window = 12;
        cfg.state_refit_every = 2;
        break;
    case StudyModel::GBM:
        cfg.series_len = 1000;
        cfg.in_sample_len = 667;
        cfg.trim_upper = 0.05;
        break;
    case StudyModel::ExternalCsv:
        cfg.n_reps = 1;
        break;
    }
    return cfg;
}

SeriesData simulate_series(const StudyConfig& cfg, std::uint64_t rep) {
    const RngStream rng{cfg.seed, rep};
    SeriesData out;
    switch (cfg.model) {
    case StudyModel::CIR: {
        Path p = simulate_cir(cfg.cir, cfg.delta, cfg.series_len, rng);
        out.returns = to_returns(p);
        out.true_sigma2.resize(out.returns.y.size());
        const double s2 = cfg.cir.sigma * cfg.cir.sigma;
        for (std::size_t i = 0; i < out.true_sigma2.size(); ++i) {
            out.true_sigma2[i] = s2 * p.values[i];
        }
        out.levels = std::move(p.values);
        break;
    }
    case StudyModel::SV: {
        SvSample s = simulate_sv(cfg.sv, cfg.delta, cfg.series_len - 1, rng);
        out.returns = std::move(s.returns);
        out.true_sigma2 = std::move(s.variance_path);
        out.levels = std::move(s.levels.values);
        break;
    }
    case StudyModel::GBM: {
        Path p = simulate_gbm(cfg.gbm, cfg.delta, cfg.series_len, rng, cfg.gbm_r0);
        out.returns = to_returns(p);
        out.true_sigma2.resize(out.returns.y.size());
        const double s2 = cfg.gbm.sigma * cfg.gbm.sigma;
        for (std::size_t i = 0; i < out.true_sigma2.size(); ++i) {
            out.true_sigma2[i] = s2 * p.values[i] * p.values[i];
        }
        out.levels = std::move(p.values);
        break;
    }
    case StudyModel::ExternalCsv:
        throw std::invalid_argument("external data cannot be simulated");
    }
    return out;
}

SemiProxyResult semi_proxy(std::span<const double> y, std::size_t t, int n,
                           std::span<const double> grid, int window) {
    if (grid.empty()) {
        throw std::invalid_argument("lambda grid is empty");
    }
    if (window < 2 * n) {
        throw std::invalid_argument("semi_proxy window must be at least 2n");
    }
    if (t < static_cast<std::size_t>(window + n)) {
        throw InsufficientHistory("semi_proxy needs window + n observations before t");
    }
    std::vector<double> sse(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const EsConfig cfg{grid[g], n};
        for (std::size_t s = t - window; s < t; ++s) {
            const double e = y[s] * y[s] - exp_smooth(y, s, cfg);
            sse[g] += e * e;
        }
    }
    SemiProxyResult out;
    const auto best = std::min_element(sse.begin(), sse.end());
    const auto worst = std::max_element(sse.begin(), sse.end());
    const bool degenerate = grid.size() > 1 && *best == *worst;
    if (!std::isfinite(*best) || degenerate) {
        out.lambda = 0.94;
        out.fallback = true;
    } else {
        out.lambda = grid[static_cast<std::size_t>(best - sse.begin())];
    }
    out.sigma2 = exp_smooth(y, t, {out.lambda, n});
    return out;
}

std::size_t out_sample_start(const StudyConfig& cfg) { return cfg.in_sample_len - 1; }

namespace {

bool wants(const StudyConfig& cfg, EstimatorId id) {
    return std::find(cfg.estimators.begin(), cfg.estimators.end(), id) != cfg.estimators.end();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

ForecastSet rolling_forecasts(std::span<const double> levels, std::span<const double> y,
                              const StudyConfig& cfg, std::size_t first, std::size_t end) {
    if (levels.size() != y.size() + 1) {
        throw std::invalid_argument("levels must have one more entry than returns");
    }
    if (first >= end || end > y.size()) {
        throw std::invalid_argument("empty or out-of-range forecast window");
    }
    const std::size_t steps = end - first;
    const bool need_state = wants(cfg, EstimatorId::NonBay) || wants(cfg, EstimatorId::Integ);
    const int lags = std::max(1, std::min(cfg.max_lag, cfg.es.n - 1));

    ForecastSet out;
    out.first = first;
    out.integ.resize(steps);
    out.valid.assign(steps, 1);
    for (EstimatorId id : cfg.estimators) {
        out.tracks.push_back({std::string(to_string(id)), std::vector<double>(steps, kNaN)});
    }

    std::unique_ptr<StateDomainFit> state_fit;
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t i = first + k;

        if (need_state && k % static_cast<std::size_t>(cfg.state_refit_every) == 0) {
            state_fit.reset();
            try {
                const StatePairs pairs = state_pairs_at(levels, y, i, cfg.es.n);
                state_fit = std::make_unique<StateDomainFit>(pairs, cfg.state);
                ++out.state_refits;
            } catch (const EstimationError&) {
                state_fit.reset();
            } catch (const std::invalid_argument&) {
                // Zero spread in the historical states.
                state_fit.reset();
            }
        }

        std::optional<double> es;
        try {
            es = exp_smooth(y, i, cfg.es);
        } catch (const EstimationError&) {
        }

        std::optional<StateVarianceEstimate> state;
        if (state_fit) {
            try {
                state = state_fit->estimate(levels[i]);
            } catch (const NoCoverage&) {
            }
        }

        StepDiagnostics& diag = out.integ[k];
        diag.es = es.value_or(kNaN);
        diag.state_covered = state.has_value();
        diag.state = state ? state->sigma2_hat : kNaN;
        diag.xi_sq_sum = state ? state->xi_sq_sum : kNaN;

        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            double value = kNaN;
            try {
                switch (cfg.estimators[e]) {
                case EstimatorId::Hist:
                    value = moving_average(y, i, cfg.hist_window);
                    break;
                case EstimatorId::RiskM:
                    if (es) value = *es;
                    break;
                case EstimatorId::SemiProxy:
                    value = semi_proxy(y, i, cfg.es.n, cfg.semi_grid, cfg.effective_semi_window())
                                .sigma2;
                    break;
                case EstimatorId::NonBay:
                    if (es) {
                        value = state ? nonbayes_static(*es, state->sigma2_hat, cfg.es.lambda,
                                                        cfg.es.n)
                                      : *es;
                    }
                    break;
                case EstimatorId::Integ:
                    if (es) {
                        const auto rho = autocorr_sq(y, i, lags);
                        const TimeVarianceEstimate tv = es_variance(*es, cfg.es, rho);
                        diag.es_clamped = tv.clamped;
                        const IntegratedEstimate ie =
                            state ? integrate_dynamic(*es, tv.var_hat, state->sigma2_hat,
                                                      state->var_hat)
                                  : time_only(*es, tv.var_hat);
                        diag.w_time = ie.w_time;
                        value = ie.sigma2_hat;
                    }
                    break;
                }
            } catch (const EstimationError&) {
                value = kNaN;
            }
            out.tracks[e].sigma2[k] = value;
            if (!std::isfinite(value)) {
                out.valid[k] = 0;
            }
        }
        if (!out.valid[k]) {
            ++out.excluded_steps;
        }
    }
    return out;
}

ForecastTrack rolling_forecast(std::span<const double> levels, const ReturnSeries& series,
                               const StudyConfig& cfg, EstimatorId id) {
    StudyConfig single = cfg;
    single.estimators = {id};
    ForecastSet set =
        rolling_forecasts(levels, series.y, single, out_sample_start(cfg), series.y.size());
    return std::move(set.tracks.front());
}

namespace {

struct RepOutcome {
    bool ok = false;
    std::string error;
    // measures[measure][estimator]
    std::vector<std::vector<double>> measures;
    // abs_err[step][estimator], NaN where the step was excluded
    std::vector<std::vector<double>> abs_err;
    std::size_t excluded_steps = 0;
};

struct ValidSlices {
    std::vector<double> y;
    std::vector<double> truth;
    std::vector<std::vector<double>> sigma2;
};

ValidSlices valid_slices(const ForecastSet& set, std::span<const double> y,
                         std::span<const double> truth) {
    ValidSlices v;
    v.sigma2.resize(set.tracks.size());
    for (std::size_t k = 0; k < set.valid.size(); ++k) {
        if (!set.valid[k]) {
            continue;
        }
        const std::size_t i = set.first + k;
        v.y.push_back(y[i]);
        if (!truth.empty()) {
            v.truth.push_back(truth[i]);
        }
        for (std::size_t e = 0; e < set.tracks.size(); ++e) {
            v.sigma2[e].push_back(set.tracks[e].sigma2[k]);
        }
    }
    return v;
}

constexpr std::size_t kMeasureCount = std::size(kAllMeasures);

std::size_t measure_slot(Measure m) {
    for (std::size_t s = 0; s < kMeasureCount; ++s) {
        if (kAllMeasures[s] == m) {
            return s;
        }
    }
    return 0;
}

RepOutcome run_replication(const StudyConfig& cfg, std::size_t rep) {
    RepOutcome out;
    try {
        const SeriesData s = simulate_series(cfg, rep);
        const std::size_t first = out_sample_start(cfg);
        const ForecastSet set = rolling_forecasts(s.levels, s.returns.y, cfg, first, s.returns.y.size());
        const ValidSlices v = valid_slices(set, s.returns.y, s.true_sigma2);
        if (v.y.empty()) {
            throw EstimationError("no out-sample step produced every forecast");
        }
        QuantileSource qs;
        qs.kind = QuantileKind::TrueErrorQuantile;
        qs.alpha = cfg.alpha;
        const double q = resolve_quantile(qs);

        const std::size_t k = set.tracks.size();
        out.measures.assign(kMeasureCount, std::vector<double>(k));
        for (std::size_t e = 0; e < k; ++e) {
            out.measures[measure_slot(Measure::IMADE)][e] = imade(v.truth, v.sigma2[e]);
            out.measures[measure_slot(Measure::MADE)][e] = made(v.y, v.sigma2[e]);
            out.measures[measure_slot(Measure::RADE)][e] = rade(v.y, v.sigma2[e]);
            out.measures[measure_slot(Measure::ER)][e] = exceedance_ratio(v.y, v.sigma2[e], q);
            out.measures[measure_slot(Measure::PE)][e] = pe(v.y, v.sigma2[e]);
        }
        out.abs_err.assign(set.valid.size(), std::vector<double>(k, kNaN));
        for (std::size_t step = 0; step < set.valid.size(); ++step) {
            if (!set.valid[step]) {
                continue;
            }
            const double truth = s.true_sigma2[set.first + step];
            for (std::size_t e = 0; e < k; ++e) {
                out.abs_err[step][e] = std::abs(set.tracks[e].sigma2[step] - truth);
            }
        }
        out.excluded_steps = set.excluded_steps;
        out.ok = true;
    } catch (const std::exception& ex) {
        out.ok = false;
        out.error = "rep " + std::to_string(rep) + ": " + ex.what();
    }
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n = static_cast<unsigned>(std::min<std::size_t>(n, count));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

std::size_t reference_index(const StudyConfig& cfg) {
    const auto it = std::find(cfg.estimators.begin(), cfg.estimators.end(), EstimatorId::Integ);
    return it == cfg.estimators.end() ? 0 : static_cast<std::size_t>(it - cfg.estimators.begin());
}

std::vector<std::string> estimator_names(const StudyConfig& cfg) {
    std::vector<std::string> ids;
    for (EstimatorId id : cfg.estimators) {
        ids.emplace_back(to_string(id));
    }
    return ids;
}

} // namespace

StudyResult run_simulation_study(const StudyConfig& cfg) {
    cfg.validate();
    if (cfg.model == StudyModel::ExternalCsv) {
        throw std::invalid_argument("simulation study needs a simulated model");
    }
    std::vector<RepOutcome> outcomes(cfg.n_reps);
    parallel_for(cfg.n_reps, cfg.threads,
                 [&](std::size_t rep) { outcomes[rep] = run_replication(cfg, rep); });

    StudyResult result;
    result.per_rep.estimator_ids = estimator_names(cfg);
    const std::size_t k = cfg.estimators.size();
    const std::size_t steps = cfg.series_len - cfg.in_sample_len;
    std::vector<std::vector<double>> curve_sum(steps, std::vector<double>(k, 0.0));
    std::vector<std::size_t> curve_n(steps, 0);
    std::size_t excluded = 0;

    for (std::size_t rep = 0; rep < outcomes.size(); ++rep) {
        const RepOutcome& o = outcomes[rep];
        if (!o.ok) {
            result.failures.push_back(o.error);
            continue;
        }
        result.rep_ids.push_back(rep);
        for (Measure m : kAllMeasures) {
            result.per_rep.get(m).push_back(o.measures[measure_slot(m)]);
        }
        for (std::size_t step = 0; step < steps && step < o.abs_err.size(); ++step) {
            if (std::isnan(o.abs_err[step][0])) {
                continue;
            }
            ++curve_n[step];
            for (std::size_t e = 0; e < k; ++e) {
                curve_sum[step][e] += o.abs_err[step][e];
            }
        }
        excluded += o.excluded_steps;
    }
    if (result.rep_ids.empty()) {
        throw std::runtime_error("every replication failed; first error: " +
                                 (result.failures.empty() ? std::string("none")
                                                          : result.failures.front()));
    }

    result.report = summarize(result.per_rep, reference_index(cfg), cfg.trim_upper);
    result.report.failed_reps = result.failures.size();
    result.report.excluded_steps = excluded;

    result.curve.assign(steps, std::vector<double>(k, kNaN));
    for (std::size_t step = 0; step < steps; ++step) {
        if (curve_n[step] == 0) {
            continue;
        }
        for (std::size_t e = 0; e < k; ++e) {
            result.curve[step][e] = curve_sum[step][e] / static_cast<double>(curve_n[step]);
        }
    }
    return result;
}

namespace {

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        return false;
    }
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    const int month = std::stoi(std::string(s.substr(5, 2)));
    const int day = std::stoi(std::string(s.substr(8, 2)));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

BacktestDataset load_backtest_csv(std::istream& is, const std::string& name,
                                  const CsvOptions& options) {
    BacktestDataset data;
    data.name = name;
    std::vector<std::string> problems;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++row;
        const std::string text = trim(line);
        if (text.empty()) {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (text != "date,value") {
                problems.push_back("row 1: expected header 'date,value', got '" + text + "'");
            }
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string::npos) {
            problems.push_back("row " + std::to_string(row) + ": expected two fields");
            continue;
        }
        const std::string date = trim(std::string_view(text).substr(0, comma));
        const std::string value = trim(std::string_view(text).substr(comma + 1));
        if (!is_iso_date(date)) {
            problems.push_back("row " + std::to_string(row) + ": bad date '" + date + "'");
            continue;
        }
        if (!data.dates.empty() && !(date > data.dates.back())) {
            problems.push_back("row " + std::to_string(row) + ": date " + date +
                               " does not increase");
            continue;
        }
        double v = 0.0;
        bool missing = value.empty() || value == "NA" || value == "NaN" || value == ".";
        if (!missing) {
            const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
            if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(v)) {
                problems.push_back("row " + std::to_string(row) + ": bad value '" + value + "'");
                continue;
            }
        }
        if (missing) {
            if (!options.forward_fill || data.levels.empty()) {
                problems.push_back("row " + std::to_string(row) + ": missing value");
                continue;
            }
            v = data.levels.back();
            ++data.filled_rows;
        }
        data.dates.push_back(date);
        data.levels.push_back(v);
    }
    if (!header_seen) {
        problems.emplace_back("file is empty");
    }
    if (!problems.empty()) {
        std::string msg = "CSV ingestion failed for " + name + ":";
        for (const auto& p : problems) {
            msg += "\n  " + p;
        }
        throw std::runtime_error(msg);
    }
    if (data.levels.size() < 3) {
        throw std::runtime_error("CSV " + name + " has fewer than three observations");
    }
    return data;
}

std::size_t rows_before(const BacktestDataset& data, const std::string& date) {
    return static_cast<std::size_t>(
        std::lower_bound(data.dates.begin(), data.dates.end(), date) - data.dates.begin());
}

SeriesData to_series(const BacktestDataset& data, ReturnKind kind) {
    SeriesData s;
    s.levels = data.levels;
    s.returns.delta = data.delta;
    s.returns.source_len = data.levels.size();
    s.returns.y.resize(data.levels.size() - 1);
    if (kind == ReturnKind::Log) {
        for (std::size_t i = 0; i + 1 < data.levels.size(); ++i) {
            if (!(data.levels[i] > 0.0) || !(data.levels[i + 1] > 0.0)) {
                throw std::invalid_argument("log returns need positive levels");
            }
            s.returns.y[i] = std::log(data.levels[i + 1] / data.levels[i]);
        }
    } else {
        Path p{data.levels, data.delta, ModelTag::External};
        s.returns = to_returns(p);
    }
    return s;
}

BacktestResult run_backtest(const BacktestDataset& data, const StudyConfig& cfg) {
    cfg.validate();
    const SeriesData s = to_series(data, cfg.returns);
    const auto& y = s.returns.y;
    if (std::all_of(y.begin(), y.end(), [](double v) { return v == 0.0; })) {
        throw DegenerateSeries("all returns are zero; nothing to estimate");
    }
    if (data.in_sample_len < 2 || data.in_sample_len >= data.levels.size()) {
        throw std::invalid_argument("in-sample length must leave a non-empty out-sample");
    }
    const std::size_t first = data.in_sample_len - 1;
    if (first < cfg.residual_window) {
        throw InsufficientHistory("in-sample too short for the residual window");
    }
    const std::size_t resid_first = first - cfg.residual_window;
    const ForecastSet set = rolling_forecasts(s.levels, y, cfg, resid_first, y.size());

    const std::size_t k = cfg.estimators.size();
    const std::size_t offset = first - resid_first;
    ForecastSet out_set;
    out_set.first = first;
    out_set.valid.assign(set.valid.begin() + static_cast<std::ptrdiff_t>(offset), set.valid.end());
    for (const auto& tr : set.tracks) {
        out_set.tracks.push_back(
            {tr.estimator_id,
             std::vector<double>(tr.sigma2.begin() + static_cast<std::ptrdiff_t>(offset),
                                 tr.sigma2.end())});
    }
    const ValidSlices v = valid_slices(out_set, y, {});
    if (v.y.empty()) {
        throw EstimationError("no out-sample step produced every forecast");
    }

    BacktestResult result;
    result.per_rep.estimator_ids = estimator_names(cfg);
    std::vector<double> made_row(k), rade_row(k), er_row(k), pe_row(k);
    for (std::size_t e = 0; e < k; ++e) {
        QuantileSource qs;
        qs.kind = QuantileKind::EmpiricalResidual;
        qs.alpha = cfg.alpha;
        qs.window = cfg.residual_window;
        for (std::size_t step = 0; step < offset; ++step) {
            const double s2 = set.tracks[e].sigma2[step];
            if (std::isfinite(s2) && s2 > 0.0) {
                qs.residuals.push_back(y[resid_first + step] / std::sqrt(s2));
            }
        }
        const double q = resolve_quantile(qs);
        result.quantiles.push_back(q);
        made_row[e] = made(v.y, v.sigma2[e]);
        rade_row[e] = rade(v.y, v.sigma2[e]);
        er_row[e] = exceedance_ratio(v.y, v.sigma2[e], q);
        pe_row[e] = pe(v.y, v.sigma2[e]);
    }
    result.per_rep.made.push_back(made_row);
    result.per_rep.rade.push_back(rade_row);
    result.per_rep.er.push_back(er_row);
    result.per_rep.pe.push_back(pe_row);
    result.report = summarize(result.per_rep, reference_index(cfg), cfg.trim_upper);
    std::size_t excluded = 0;
    for (char ok : out_set.valid) {
        excluded += ok ? 0 : 1;
    }
    result.report.excluded_steps = excluded;
    return result;
}

void write_per_rep_csv(std::ostream& os, const MeasureTable& table,
                       std::span<const std::size_t> rep_ids) {
    os << "rep,estimator";
    std::vector<Measure> present;
    for (Measure m : kAllMeasures) {
        if (!table.get(m).empty()) {
            present.push_back(m);
            os << ',' << to_string(m);
        }
    }
    os << '\n';
    const std::size_t rows = present.empty() ? 0 : table.get(present.front()).size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t e = 0; e < table.estimator_ids.size(); ++e) {
            os << (r < rep_ids.size() ? rep_ids[r] : r) << ',' << table.estimator_ids[e];
            for (Measure m : present) {
                os << ',' << fmt_real(table.get(m)[r][e]);
            }
            os << '\n';
        }
    }
}

void write_curve_csv(std::ostream& os, const std::vector<std::string>& ids,
                     const std::vector<std::vector<double>>& curve) {
    os << "step";
    for (const auto& id : ids) {
        os << ',' << id;
    }
    os << '\n';
    for (std::size_t step = 0; step < curve.size(); ++step) {
        os << step;
        for (double v : curve[step]) {
            os << ',' << fmt_real(v);
        }
        os << '\n';
    }
}

} // namespace volint
