#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace volint {

/// One-step-ahead variance forecasts over the out-sample, aligned with the
/// out-sample returns.
struct ForecastTrack {
    std::string estimator_id;
    std::vector<double> sigma2;

    std::size_t horizon() const { return sigma2.size(); }
};

enum class QuantileKind { StandardNormal, TrueErrorQuantile, EmpiricalResidual };

struct QuantileSource {
    QuantileKind kind = QuantileKind::StandardNormal;
    double alpha = 0.05;
    /// Residual window for EmpiricalResidual mode.
    std::size_t window = 250;
    /// Standardised in-sample residuals (EmpiricalResidual mode only).
    std::vector<double> residuals;
};

inline constexpr std::size_t kMinResidualWindow = 50;

/// Lower-tail alpha quantile of N(0, 1).
double normal_quantile(double alpha);

/// Order statistic x_(ceil(alpha * window)) of the last `window` residuals.
double empirical_quantile(std::span<const double> residuals, double alpha, std::size_t window);

/// Resolves the quantile a source refers to. Throws when it cannot.
double resolve_quantile(const QuantileSource& q);

/// Fraction of returns below the VaR band q_alpha * sigma_hat.
double exceedance_ratio(std::span<const double> returns_out, std::span<const double> sigma2,
                        double q_alpha);
double exceedance_ratio(std::span<const double> returns_out, const ForecastTrack& track,
                        const QuantileSource& q);

/// mean |y^2 - sigma2_hat|
double made(std::span<const double> returns_out, std::span<const double> sigma2);
/// mean (y^2 - sigma2_hat)^2
double pe(std::span<const double> returns_out, std::span<const double> sigma2);
/// mean | |y| - sqrt(2/pi) sigma_hat |
double rade(std::span<const double> returns_out, std::span<const double> sigma2);
/// mean |sigma2_hat - sigma2_true|; simulation only.
double imade(std::span<const double> true_sigma2, std::span<const double> sigma2);

/// Per-simulation measures laid out as rows; columns are estimators.
using MeasureMatrix = std::vector<std::vector<double>>;

/// Fraction of rows in which each column is strictly below the row mean.
std::vector<double> score(const MeasureMatrix& per_sim);

/// (mean_k - mean_ref) / mean_ref.
std::vector<double> relative_loss(std::span<const double> means, std::size_t ref_index);

/// Mean after discarding the largest trim_upper_fraction of values.
double trimmed_mean(std::span<const double> xs, double trim_upper_fraction);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator; 0 for a single value).
double stddev(std::span<const double> xs);

enum class Measure { IMADE, MADE, RADE, ER, PE };

inline constexpr Measure kAllMeasures[] = {Measure::IMADE, Measure::MADE, Measure::RADE,
                                           Measure::ER, Measure::PE};

std::string to_string(Measure m);

/// Summary of one measure for one estimator across replications.
struct MeasureSummary {
    double mean = 0.0;
    double std = 0.0;
    double trimmed_mean = 0.0;
    double score = 0.0;
    double rel_loss = 0.0;
    double trimmed_rel_loss = 0.0;
    bool available = false;
};

struct EstimatorReport {
    std::string estimator_id;
    MeasureSummary imade, made, rade, er, pe;

    MeasureSummary& get(Measure m);
    const MeasureSummary& get(Measure m) const;
};

struct MeasureReport {
    std::vector<EstimatorReport> estimators;
    std::size_t reference_index = 0;
    std::size_t n_reps = 0;
    std::size_t failed_reps = 0;
    std::size_t excluded_steps = 0;
    double trim_upper = 0.0;

    const EstimatorReport& find(const std::string& id) const;
};

/// Per-replication, per-estimator measure values. values[m][rep][est]; a
/// measure that is unavailable (IMADE on real data) has an empty matrix.
struct MeasureTable {
    std::vector<std::string> estimator_ids;
    MeasureMatrix imade, made, rade, er, pe;

    MeasureMatrix& get(Measure m);
    const MeasureMatrix& get(Measure m) const;
};

/// Aggregates replication-level measures into means, standard deviations,
/// scores and relative losses against the reference estimator.
MeasureReport summarize(const MeasureTable& table, std::size_t reference_index,
                        double trim_upper);

/// Rows of estimator,measure,statistic,value.
void write_report_csv(std::ostream& os, const MeasureReport& report);
/// Aligned table, one block per measure.
void write_report_table(std::ostream& os, const MeasureReport& report, const std::string& title);

} // namespace volint
