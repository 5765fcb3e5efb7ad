#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "volint/errors.hpp"
#include "volint/evaluation.hpp"
#include "volint/harness.hpp"
#include "volint/integration.hpp"
#include "volint/sde_models.hpp"
#include "volint/state_domain.hpp"
#include "volint/time_domain.hpp"

namespace py = pybind11;
using namespace volint;

namespace {

using Vec = std::vector<double>;

py::dict report_dict(const MeasureReport& report, const MeasureTable& per_rep,
                     const std::vector<std::size_t>& rep_ids, const std::string& title) {
    std::ostringstream csv, table, reps;
    write_report_csv(csv, report);
    write_report_table(table, report, title);
    write_per_rep_csv(reps, per_rep, rep_ids);
    py::dict d;
    d["report_csv"] = csv.str();
    d["report_table"] = table.str();
    d["per_rep_csv"] = reps.str();
    py::dict summary;
    for (const auto& e : report.estimators) {
        py::dict m;
        for (Measure measure : kAllMeasures) {
            const MeasureSummary& s = e.get(measure);
            if (!s.available) continue;
            py::dict v;
            v["mean"] = s.mean;
            v["std"] = s.std;
            v["trimmed_mean"] = s.trimmed_mean;
            v["score"] = s.score;
            v["rel_loss"] = s.rel_loss;
            v["trimmed_rel_loss"] = s.trimmed_rel_loss;
            m[py::str(to_string(measure))] = v;
        }
        summary[py::str(e.estimator_id)] = m;
    }
    d["summary"] = summary;
    d["n_reps"] = report.n_reps;
    d["excluded_steps"] = report.excluded_steps;
    return d;
}

py::dict variance_dict(const StateVarianceEstimate& e) {
    py::dict d;
    d["sigma2_hat"] = e.sigma2_hat;
    d["var_hat"] = e.var_hat;
    d["xi_sq_sum"] = e.xi_sq_sum;
    d["bandwidth"] = e.bandwidth_used;
    d["effective_n"] = e.effective_n;
    d["floored"] = e.floored;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Volatility estimation in the time and state domains";

    py::register_exception<EstimationError>(m, "EstimationError", PyExc_ValueError);
    py::register_exception<InsufficientHistory>(m, "InsufficientHistory", PyExc_ValueError);
    py::register_exception<NoCoverage>(m, "NoCoverage", PyExc_ValueError);
    py::register_exception<DegenerateSeries>(m, "DegenerateSeries", PyExc_ValueError);

    m.def(
        "simulate_cir",
        [](std::size_t n_obs, double delta, std::uint64_t seed, std::uint64_t stream, double kappa,
           double theta, double sigma, std::optional<double> r0) {
            return simulate_cir({kappa, theta, sigma}, delta, n_obs, {seed, stream}, r0).values;
        },
        py::arg("n_obs"), py::arg("delta") = 1.0 / 52.0, py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("kappa") = CirParams{}.kappa, py::arg("theta") = CirParams{}.theta,
        py::arg("sigma") = CirParams{}.sigma, py::arg("r0") = py::none(),
        "CIR levels sampled every delta years.");

    m.def(
        "simulate_sv",
        [](std::size_t n_obs, double delta, std::uint64_t seed, std::uint64_t stream, double kappa,
           double theta, double alpha2, int substeps) {
            SvParams p;
            p.kappa = kappa;
            p.theta = theta;
            p.alpha2 = alpha2;
            p.substeps = substeps;
            const SvSample s = simulate_sv(p, delta, n_obs, {seed, stream});
            py::dict d;
            d["returns"] = s.returns.y;
            d["variance"] = s.variance_path;
            d["levels"] = s.levels.values;
            return d;
        },
        py::arg("n_obs"), py::arg("delta") = 1.0 / 12.0, py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("kappa") = SvParams{}.kappa, py::arg("theta") = SvParams{}.theta,
        py::arg("alpha2") = SvParams{}.alpha2, py::arg("substeps") = SvParams{}.substeps,
        "Stochastic-volatility returns, interval-average variances and levels.");

    m.def(
        "simulate_gbm",
        [](std::size_t n_obs, double delta, std::uint64_t seed, std::uint64_t stream, double mu,
           double sigma, double r0) {
            return simulate_gbm({mu, sigma}, delta, n_obs, {seed, stream}, r0).values;
        },
        py::arg("n_obs"), py::arg("delta") = 1.0 / 52.0, py::arg("seed") = 0, py::arg("stream") = 0,
        py::arg("mu") = GbmParams{}.mu, py::arg("sigma") = GbmParams{}.sigma, py::arg("r0") = 1.0);

    m.def(
        "to_returns",
        [](const Vec& levels, double delta) { return to_returns(Path{levels, delta}).y; },
        py::arg("levels"), py::arg("delta"), "Scaled differences (r[i+1] - r[i]) / sqrt(delta).");

    m.def("moving_average", [](const Vec& y, std::size_t t, int n) { return moving_average(y, t, n); },
          py::arg("y"), py::arg("t"), py::arg("n"));
    m.def(
        "exp_smooth",
        [](const Vec& y, std::size_t t, double lambda, int n) { return exp_smooth(y, t, {lambda, n}); },
        py::arg("y"), py::arg("t"), py::arg("lam") = 0.94, py::arg("n") = 52);
    m.def(
        "autocorr_sq",
        [](const Vec& y, std::size_t t, int max_lag) { return autocorr_sq(y, t, max_lag); },
        py::arg("y"), py::arg("t"), py::arg("max_lag") = kDefaultMaxLag);
    m.def(
        "es_variance",
        [](double sigma2, double lambda, int n, const Vec& rho) {
            const TimeVarianceEstimate e = es_variance(sigma2, {lambda, n}, rho);
            py::dict d;
            d["var_hat"] = e.var_hat;
            d["c_t"] = e.c_t;
            d["clamped"] = e.clamped;
            return d;
        },
        py::arg("sigma2"), py::arg("lam") = 0.94, py::arg("n") = 52, py::arg("rho") = Vec{});
    m.def("s1_squared", &s1_squared, py::arg("sigma2"), py::arg("c"));

    m.def(
        "state_variance",
        [](const Vec& x, const Vec& response, double x0, double h1, double h, bool use_residuals) {
            StateDomainOptions opt;
            opt.fixed_h1 = h1;
            opt.fixed_h = h;
            opt.use_residuals = use_residuals;
            const StateDomainFit fit(StatePairs{x, response}, opt);
            return variance_dict(fit.estimate(x0));
        },
        py::arg("x"), py::arg("response"), py::arg("x0"), py::arg("h1") = 0.0, py::arg("h") = 0.0,
        py::arg("use_residuals") = true,
        "State-domain variance at x0 from historical (state, return) pairs; "
        "bandwidths <= 0 are selected from the data.");
    m.def(
        "local_linear_fit",
        [](const Vec& x, const Vec& response, double x0, double h) {
            const LocalFit f = local_linear_fit(StatePairs{x, response}, x0, h);
            return py::make_tuple(f.intercept, f.slope);
        },
        py::arg("x"), py::arg("response"), py::arg("x0"), py::arg("h"));
    m.def(
        "xi_weights",
        [](const Vec& x, const Vec& response, double x0, double h) {
            return xi_weights(StatePairs{x, response}, x0, h);
        },
        py::arg("x"), py::arg("response"), py::arg("x0"), py::arg("h"));
    m.def(
        "kernel_density", [](const Vec& x, double x0, double h) { return kernel_density(x, x0, h); },
        py::arg("x"), py::arg("x0"), py::arg("h"));
    m.def("s2_squared", [](double s2, double p) { return s2_squared(s2, p); }, py::arg("sigma2"),
          py::arg("density"));

    m.def("dynamic_weight", &dynamic_weight, py::arg("var_time"), py::arg("var_state"));
    m.def(
        "integrate_dynamic",
        [](double time_est, double var_time, double state_est, double var_state) {
            const IntegratedEstimate e = integrate_dynamic(time_est, var_time, state_est, var_state);
            return py::make_tuple(e.sigma2_hat, e.w_time);
        },
        py::arg("time_est"), py::arg("var_time"), py::arg("state_est"), py::arg("var_state"));
    m.def("bayes_ma", &bayes_ma, py::arg("ma_est"), py::arg("prior_mean"), py::arg("n"),
          py::arg("a") = 2.5);
    m.def("bayes_es", &bayes_es, py::arg("es_est"), py::arg("prior_mean"), py::arg("lam"),
          py::arg("n"), py::arg("a") = 2.5);
    m.def("nonbayes_static", &nonbayes_static, py::arg("es_est"), py::arg("state_est"),
          py::arg("lam") = 0.94, py::arg("n") = 52);
    m.def(
        "efficiency_ratios",
        [](double d, double s1, double s2) {
            const EfficiencyRatios e = efficiency_ratios(d, s1, s2);
            return py::make_tuple(e.vs_state, e.vs_time);
        },
        py::arg("d"), py::arg("s1_sq"), py::arg("s2_sq"));

    m.def("normal_quantile", &normal_quantile, py::arg("alpha"));
    m.def(
        "exceedance_ratio",
        [](const Vec& y, const Vec& s2, double q) { return exceedance_ratio(y, s2, q); },
        py::arg("returns"), py::arg("sigma2"), py::arg("quantile"));
    m.def("made", [](const Vec& y, const Vec& s2) { return made(y, s2); }, py::arg("returns"),
          py::arg("sigma2"));
    m.def("rade", [](const Vec& y, const Vec& s2) { return rade(y, s2); }, py::arg("returns"),
          py::arg("sigma2"));
    m.def("imade", [](const Vec& t, const Vec& s2) { return imade(t, s2); }, py::arg("true_sigma2"),
          py::arg("sigma2"));
    m.def("score", &score, py::arg("per_sim"));
    m.def("relative_loss", [](const Vec& m_, std::size_t ref) { return relative_loss(m_, ref); },
          py::arg("means"), py::arg("ref_index"));
    m.def("trimmed_mean", [](const Vec& xs, double f) { return trimmed_mean(xs, f); },
          py::arg("xs"), py::arg("trim_upper"));

    m.def(
        "default_config", [](const std::string& model) { return config_to_json(default_config(parse_model(model))); },
        py::arg("model") = "cir", "Default configuration of a design as flat JSON text.");
    m.def(
        "run_study",
        [](const std::string& config_json) {
            const StudyConfig cfg = config_from_json(config_json, StudyConfig{});
            StudyResult r;
            {
                py::gil_scoped_release release;
                r = run_simulation_study(cfg);
            }
            py::dict d = report_dict(r.report, r.per_rep, r.rep_ids, std::string(to_string(cfg.model)));
            d["curve"] = r.curve;
            d["failures"] = r.failures;
            return d;
        },
        py::arg("config_json"), "Runs a simulation study from a flat JSON configuration.");
    m.def(
        "run_backtest",
        [](const std::string& csv_path, const std::string& config_json, std::size_t in_sample_len,
           bool forward_fill) {
            std::ifstream in(csv_path);
            if (!in) throw std::runtime_error("cannot open " + csv_path);
            BacktestDataset data = load_backtest_csv(in, csv_path, {forward_fill});
            const StudyConfig cfg =
                config_from_json(config_json, default_config(StudyModel::ExternalCsv));
            data.delta = cfg.delta;
            data.in_sample_len = in_sample_len > 0 ? in_sample_len : data.levels.size() * 3 / 4;
            const BacktestResult r = run_backtest(data, cfg);
            py::dict d = report_dict(r.report, r.per_rep, {0}, csv_path);
            d["quantiles"] = r.quantiles;
            return d;
        },
        py::arg("csv_path"), py::arg("config_json") = "{}", py::arg("in_sample_len") = 0,
        py::arg("forward_fill") = false, "Backtests every estimator on a date,value CSV.");
}
