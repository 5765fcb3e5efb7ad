#include "volint/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "volint/errors.hpp"
#include "volint/format.hpp"

namespace volint {

namespace {

void check_aligned(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("returns and forecasts are not aligned");
    }
    if (a == 0) {
        throw std::invalid_argument("empty out-sample");
    }
}

} // namespace

double normal_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), alpha);
}

double empirical_quantile(std::span<const double> residuals, double alpha, std::size_t window) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (window == 0 || residuals.size() < window) {
        throw InsufficientHistory("empirical quantile needs " + std::to_string(window) +
                                  " residuals, have " + std::to_string(residuals.size()));
    }
    std::vector<double> tail(residuals.end() - window, residuals.end());
    std::sort(tail.begin(), tail.end());
    auto rank = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(window)));
    rank = std::clamp<std::size_t>(rank, 1, window);
    return tail[rank - 1];
}

double resolve_quantile(const QuantileSource& q) {
    switch (q.kind) {
    case QuantileKind::StandardNormal:
    case QuantileKind::TrueErrorQuantile:
        // Every simulated model has conditionally Gaussian returns.
        return normal_quantile(q.alpha);
    case QuantileKind::EmpiricalResidual:
        if (q.window < kMinResidualWindow) {
            throw std::invalid_argument("empirical quantile window must be >= 50");
        }
        return empirical_quantile(q.residuals, q.alpha, q.window);
    }
    throw std::invalid_argument("unknown quantile source");
}

double exceedance_ratio(std::span<const double> returns_out, std::span<const double> sigma2,
                        double q_alpha) {
    check_aligned(returns_out.size(), sigma2.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < sigma2.size(); ++i) {
        if (returns_out[i] < q_alpha * std::sqrt(sigma2[i])) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(sigma2.size());
}

double exceedance_ratio(std::span<const double> returns_out, const ForecastTrack& track,
                        const QuantileSource& q) {
    return exceedance_ratio(returns_out, track.sigma2, resolve_quantile(q));
}

double made(std::span<const double> y, std::span<const double> sigma2) {
    check_aligned(y.size(), sigma2.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        acc += std::abs(y[i] * y[i] - sigma2[i]);
    }
    return acc / static_cast<double>(y.size());
}

double pe(std::span<const double> y, std::span<const double> sigma2) {
    check_aligned(y.size(), sigma2.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] * y[i] - sigma2[i];
        acc += e * e;
    }
    return acc / static_cast<double>(y.size());
}

double rade(std::span<const double> y, std::span<const double> sigma2) {
    check_aligned(y.size(), sigma2.size());
    const double c = std::sqrt(2.0 / std::numbers::pi);
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        acc += std::abs(std::abs(y[i]) - c * std::sqrt(sigma2[i]));
    }
    return acc / static_cast<double>(y.size());
}

double imade(std::span<const double> true_sigma2, std::span<const double> sigma2) {
    if (true_sigma2.empty()) {
        throw NotApplicable("IMADE needs the true volatility; unavailable for real data");
    }
    check_aligned(true_sigma2.size(), sigma2.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sigma2.size(); ++i) {
        acc += std::abs(sigma2[i] - true_sigma2[i]);
    }
    return acc / static_cast<double>(sigma2.size());
}

std::vector<double> score(const MeasureMatrix& per_sim) {
    if (per_sim.empty()) {
        throw std::invalid_argument("score needs at least one simulation");
    }
    const std::size_t k = per_sim.front().size();
    std::vector<double> wins(k, 0.0);
    for (const auto& row : per_sim) {
        if (row.size() != k) {
            throw std::invalid_argument("ragged measure matrix");
        }
        double avg = 0.0;
        for (double v : row) {
            avg += v;
        }
        avg /= static_cast<double>(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (row[j] < avg) {
                wins[j] += 1.0;
            }
        }
    }
    for (auto& w : wins) {
        w /= static_cast<double>(per_sim.size());
    }
    return wins;
}

std::vector<double> relative_loss(std::span<const double> means, std::size_t ref_index) {
    if (ref_index >= means.size()) {
        throw std::out_of_range("reference index out of range");
    }
    const double ref = means[ref_index];
    if (ref == 0.0) {
        throw std::invalid_argument("reference mean is zero");
    }
    std::vector<double> out(means.size());
    for (std::size_t k = 0; k < means.size(); ++k) {
        out[k] = k == ref_index ? 0.0 : (means[k] - ref) / ref;
    }
    return out;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        throw std::invalid_argument("mean of empty sequence");
    }
    double acc = 0.0;
    for (double v : xs) {
        acc += v;
    }
    return acc / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean(xs);
    double ss = 0.0;
    for (double v : xs) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double trimmed_mean(std::span<const double> xs, double trim_upper_fraction) {
    if (!(trim_upper_fraction >= 0.0 && trim_upper_fraction < 1.0)) {
        throw std::invalid_argument("trim fraction must lie in [0, 1)");
    }
    if (trim_upper_fraction == 0.0) {
        return mean(xs);
    }
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    auto keep = static_cast<std::size_t>(
        std::floor((1.0 - trim_upper_fraction) * static_cast<double>(sorted.size()) + 1e-9));
    keep = std::max<std::size_t>(keep, 1);
    return mean(std::span<const double>(sorted.data(), keep));
}

std::string to_string(Measure m) {
    switch (m) {
    case Measure::IMADE: return "IMADE";
    case Measure::MADE: return "MADE";
    case Measure::RADE: return "RADE";
    case Measure::ER: return "ER";
    case Measure::PE: return "PE";
    }
    return "?";
}

MeasureSummary& EstimatorReport::get(Measure m) {
    switch (m) {
    case Measure::IMADE: return imade;
    case Measure::MADE: return made;
    case Measure::RADE: return rade;
    case Measure::ER: return er;
    case Measure::PE: return pe;
    }
    throw std::invalid_argument("unknown measure");
}

const MeasureSummary& EstimatorReport::get(Measure m) const {
    return const_cast<EstimatorReport*>(this)->get(m);
}

MeasureMatrix& MeasureTable::get(Measure m) {
    switch (m) {
    case Measure::IMADE: return imade;
    case Measure::MADE: return made;
    case Measure::RADE: return rade;
    case Measure::ER: return er;
    case Measure::PE: return pe;
    }
    throw std::invalid_argument("unknown measure");
}

const MeasureMatrix& MeasureTable::get(Measure m) const {
    return const_cast<MeasureTable*>(this)->get(m);
}

const EstimatorReport& MeasureReport::find(const std::string& id) const {
    for (const auto& e : estimators) {
        if (e.estimator_id == id) {
            return e;
        }
    }
    throw std::out_of_range("no estimator named " + id);
}

MeasureReport summarize(const MeasureTable& table, std::size_t reference_index, double trim_upper) {
    const std::size_t k = table.estimator_ids.size();
    if (reference_index >= k) {
        throw std::out_of_range("reference index out of range");
    }
    MeasureReport report;
    report.reference_index = reference_index;
    report.trim_upper = trim_upper;
    report.n_reps = table.made.size();
    report.estimators.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        report.estimators[j].estimator_id = table.estimator_ids[j];
    }

    for (Measure m : kAllMeasures) {
        const MeasureMatrix& mat = table.get(m);
        if (mat.empty()) {
            continue;
        }
        std::vector<double> means(k), trimmed(k);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<double> col(mat.size());
            for (std::size_t r = 0; r < mat.size(); ++r) {
                col[r] = mat[r][j];
            }
            MeasureSummary& s = report.estimators[j].get(m);
            s.available = true;
            s.mean = mean(col);
            s.std = stddev(col);
            s.trimmed_mean = trimmed_mean(col, trim_upper);
            means[j] = s.mean;
            trimmed[j] = s.trimmed_mean;
        }
        const auto scores = score(mat);
        const bool has_loss = m != Measure::ER && means[reference_index] != 0.0;
        const bool has_tloss = m != Measure::ER && trimmed[reference_index] != 0.0;
        const auto losses = has_loss ? relative_loss(means, reference_index) : std::vector<double>(k);
        const auto tlosses =
            has_tloss ? relative_loss(trimmed, reference_index) : std::vector<double>(k);
        for (std::size_t j = 0; j < k; ++j) {
            MeasureSummary& s = report.estimators[j].get(m);
            s.score = scores[j];
            s.rel_loss = losses[j];
            s.trimmed_rel_loss = tlosses[j];
        }
    }
    return report;
}

void write_report_csv(std::ostream& os, const MeasureReport& report) {
    os << "estimator,measure,statistic,value\n";
    for (const auto& e : report.estimators) {
        for (Measure m : kAllMeasures) {
            const MeasureSummary& s = e.get(m);
            if (!s.available) {
                continue;
            }
            const std::string prefix = e.estimator_id + ',' + to_string(m) + ',';
            os << prefix << "mean," << fmt_real(s.mean) << '\n';
            os << prefix << "std," << fmt_real(s.std) << '\n';
            os << prefix << "score," << fmt_real(s.score) << '\n';
            if (m != Measure::ER) {
                os << prefix << "rel_loss," << fmt_real(s.rel_loss) << '\n';
            }
            if (report.trim_upper > 0.0) {
                os << prefix << "trimmed_mean," << fmt_real(s.trimmed_mean) << '\n';
                if (m != Measure::ER) {
                    os << prefix << "trimmed_rel_loss," << fmt_real(s.trimmed_rel_loss) << '\n';
                }
            }
        }
    }
}

void write_report_table(std::ostream& os, const MeasureReport& report, const std::string& title) {
    constexpr int label_w = 22;
    constexpr int col_w = 13;
    os << title << '\n';
    os << "replications: " << report.n_reps << "  failed: " << report.failed_reps
       << "  excluded steps: " << report.excluded_steps << '\n';
    const std::string rule(label_w + 8 + col_w * report.estimators.size(), '-');
    os << rule << '\n' << std::left << std::setw(8) << "Measure" << std::setw(label_w) << "Statistic";
    for (const auto& e : report.estimators) {
        os << std::right << std::setw(col_w) << e.estimator_id;
    }
    os << '\n' << rule << '\n';

    auto row = [&](const std::string& measure, const std::string& label, auto getter) {
        os << std::left << std::setw(8) << measure << std::setw(label_w) << label;
        for (const auto& e : report.estimators) {
            os << std::right << std::setw(col_w) << getter(e);
        }
        os << '\n';
    };
    auto pct = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(2) << 100.0 * v;
        return s.str();
    };

    for (Measure m : {Measure::IMADE, Measure::MADE, Measure::RADE, Measure::ER}) {
        if (!report.estimators.front().get(m).available) {
            continue;
        }
        const std::string name = to_string(m);
        if (m != Measure::ER) {
            row(name, "Score (%)", [&](const EstimatorReport& e) { return pct(e.get(m).score); });
        }
        row(m == Measure::ER ? name : "", "Ave",
            [&](const EstimatorReport& e) { return fmt_sci(e.get(m).mean); });
        row("", "Std", [&](const EstimatorReport& e) { return fmt_sci(e.get(m).std); });
        if (m != Measure::ER) {
            row("", "Relative Loss (%)",
                [&](const EstimatorReport& e) { return pct(e.get(m).rel_loss); });
        }
        if (report.trim_upper > 0.0) {
            row("", "Trimmed Ave",
                [&](const EstimatorReport& e) { return fmt_sci(e.get(m).trimmed_mean); });
            if (m != Measure::ER) {
                row("", "Trimmed Rel Loss (%)",
                    [&](const EstimatorReport& e) { return pct(e.get(m).trimmed_rel_loss); });
            }
        }
        os << rule << '\n';
    }
}

} // namespace volint
