#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "volint/evaluation.hpp"
#include "volint/sde_models.hpp"
#include "volint/state_domain.hpp"
#include "volint/time_domain.hpp"

namespace volint {

enum class EstimatorId { Hist, RiskM, SemiProxy, NonBay, Integ };

inline constexpr EstimatorId kAllEstimators[] = {EstimatorId::Hist, EstimatorId::RiskM,
                                                 EstimatorId::SemiProxy, EstimatorId::NonBay,
                                                 EstimatorId::Integ};

std::string_view to_string(EstimatorId id);
EstimatorId parse_estimator(std::string_view name);

enum class StudyModel { CIR, SV, GBM, ExternalCsv };

std::string_view to_string(StudyModel model);
StudyModel parse_model(std::string_view name);

/// How backtest levels become returns.
enum class ReturnKind { Log, ScaledDiff };

struct StudyConfig {
    StudyModel model = StudyModel::CIR;
    CirParams cir{};
    SvParams sv{};
    GbmParams gbm{};
    double gbm_r0 = 1.0;

    double delta = 1.0 / 52.0;
    /// Number of observed levels per replication.
    std::size_t series_len = 1200;
    /// Leading levels treated as in-sample.
    std::size_t in_sample_len = 900;
    std::size_t n_reps = 100;
    std::vector<EstimatorId> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};

    EsConfig es{0.94, 52};
    int hist_window = 52;
    int state_refit_every = 8;
    int max_lag = kDefaultMaxLag;
    double alpha = 0.05;
    std::uint64_t seed = 20050101;
    double trim_upper = 0.0;

    std::vector<double> semi_grid{0.90, 0.92, 0.94, 0.96, 0.98};
    /// Trailing window of one-step errors used to pick lambda; 0 means 4n.
    int semi_window = 0;

    StateDomainOptions state{};

    /// Backtest-only settings.
    ReturnKind returns = ReturnKind::Log;
    std::size_t residual_window = 250;

    /// Worker threads for replications; 0 uses the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
    int effective_semi_window() const { return semi_window > 0 ? semi_window : 4 * es.n; }
};

/// Desk-scale defaults for one of the simulation designs (or for CSV data).
StudyConfig default_config(StudyModel model);

/// Replication count used by --full-scale.
inline constexpr std::size_t kFullScaleReps = 600;

/// One simulated or ingested series: levels r_0..r_M, returns y_0..y_{M-1}
/// and, in simulation mode, the true variance of each return.
struct SeriesData {
    std::vector<double> levels;
    ReturnSeries returns;
    std::vector<double> true_sigma2;
};

SeriesData simulate_series(const StudyConfig& cfg, std::uint64_t rep);

struct SemiProxyResult {
    double sigma2 = 0.0;
    double lambda = 0.94;
    bool fallback = false;
};

/// Exponential smoothing with lambda picked from `grid` by the smallest sum
/// of squared one-step errors y_s^2 - ES_lambda(s) over s in [t - window, t).
/// Stand-in for the semiparametric estimator; labelled SemiProxy in reports.
SemiProxyResult semi_proxy(std::span<const double> y, std::size_t t, int n,
                           std::span<const double> grid, int window);

struct StepDiagnostics {
    double es = 0.0;
    double state = 0.0;
    double w_time = 1.0;
    double xi_sq_sum = 0.0;
    bool state_covered = false;
    bool es_clamped = false;
};

/// Forecasts for return indices [first, end).
struct ForecastSet {
    std::size_t first = 0;
    std::vector<ForecastTrack> tracks;
    /// Components of the integrated estimator at each step.
    std::vector<StepDiagnostics> integ;
    /// Steps where every requested estimator produced a forecast.
    std::vector<char> valid;
    std::size_t excluded_steps = 0;
    std::size_t state_refits = 0;
};

/// Rolling one-step-ahead forecasts of every configured estimator. The
/// forecast for y[i] uses y[0..i-1] and levels[0..i] only. The state-domain
/// fit is rebuilt every state_refit_every steps, the rest every step.
ForecastSet rolling_forecasts(std::span<const double> levels, std::span<const double> y,
                              const StudyConfig& cfg, std::size_t first, std::size_t end);

/// Out-sample track of a single estimator.
ForecastTrack rolling_forecast(std::span<const double> levels, const ReturnSeries& series,
                               const StudyConfig& cfg, EstimatorId id);

/// Index of the first out-sample return.
std::size_t out_sample_start(const StudyConfig& cfg);

struct StudyResult {
    MeasureReport report;
    MeasureTable per_rep;
    std::vector<std::size_t> rep_ids;
    /// curve[step][estimator]: mean |sigma2_hat - sigma2| across replications.
    std::vector<std::vector<double>> curve;
    std::vector<std::string> failures;
};

StudyResult run_simulation_study(const StudyConfig& cfg);

struct BacktestDataset {
    std::string name;
    std::vector<std::string> dates;
    std::vector<double> levels;
    double delta = 1.0 / 52.0;
    /// Number of leading levels in the in-sample period.
    std::size_t in_sample_len = 0;
    std::size_t filled_rows = 0;
};

struct CsvOptions {
    bool forward_fill = false;
};

/// Reads `date,value` rows with ISO dates. Throws std::runtime_error listing
/// every offending row.
BacktestDataset load_backtest_csv(std::istream& is, const std::string& name,
                                  const CsvOptions& options = {});

/// Number of leading rows dated strictly before `date`.
std::size_t rows_before(const BacktestDataset& data, const std::string& date);

SeriesData to_series(const BacktestDataset& data, ReturnKind kind);

struct BacktestResult {
    MeasureReport report;
    MeasureTable per_rep;
    std::vector<double> quantiles;
};

BacktestResult run_backtest(const BacktestDataset& data, const StudyConfig& cfg);

/// Output files of a study run.
void write_per_rep_csv(std::ostream& os, const MeasureTable& table,
                       std::span<const std::size_t> rep_ids);
void write_curve_csv(std::ostream& os, const std::vector<std::string>& ids,
                     const std::vector<std::vector<double>>& curve);

/// Flat JSON text of a configuration.
std::string config_to_json(const StudyConfig& cfg);
/// Applies the keys present in a flat JSON object on top of `base`.
StudyConfig config_from_json(const std::string& text, StudyConfig base);

} // namespace volint
