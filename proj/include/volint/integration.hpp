#pragma once

#include <span>
#include <string_view>

namespace volint {

enum class IntegrationMode { Dynamic, Bayesian, TimeOnly, StateOnly };

std::string_view to_string(IntegrationMode mode);

struct IntegratedEstimate {
    double sigma2_hat = 0.0;
    double w_time = 1.0;
    double var_time = 0.0;
    double var_state = 0.0;
    IntegrationMode mode = IntegrationMode::Dynamic;
    /// Both variances were zero and the weight defaulted to 1/2.
    bool degenerate_weight = false;
};

/// Inverse-gamma IG(a, b): density b^a / Gamma(a) s^-(a+1) exp(-b/s).
struct IgPrior {
    double a = 2.5;
    double b = 0.0;

    double mean() const { return b / (a - 1.0); }
    double variance() const { return b * b / ((a - 1.0) * (a - 1.0) * (a - 2.0)); }
    double mode() const { return b / (a + 1.0); }
};

/// Variance-minimising weight on the time-domain estimate,
/// var_state / (var_time + var_state). Returns 1/2 when both are zero.
double dynamic_weight(double var_time, double var_state);

/// Convex combination w * time_est + (1 - w) * state_est.
IntegratedEstimate integrate(double time_est, double state_est, double w);

/// Combines both estimates with the dynamic weight computed from their
/// sampling variances.
IntegratedEstimate integrate_dynamic(double time_est, double var_time, double state_est,
                                     double var_state);

/// Full weight on the time-domain estimate; used when the state domain has
/// no coverage at the current state.
IntegratedEstimate time_only(double time_est, double var_time);

/// Conjugate update with the returns in `window`: (a + n/2, b + sum(y^2)/2).
IgPrior ig_posterior(const IgPrior& prior, std::span<const double> window);

/// Posterior mean with a moving-average likelihood summary.
double bayes_ma(double ma_est, double prior_mean, int n, double a);

/// Equal-weight equivalent (1 - lambda^n)/(1 - lambda) of an EWMA window.
double effective_n(double lambda, int n);

/// Posterior mean treating the EWMA estimate as an average of effective_n points.
double bayes_es(double es_est, double prior_mean, double lambda, int n, double a);

/// Method-of-moments prior with mean state_est and variance 2 state_est^2.
IgPrior match_hyperparams(double state_est);

/// bayes_es with the matched prior (a = 2.5): a static convex combination.
double nonbayes_static(double es_est, double state_est, double lambda, int n);

/// Weight that nonbayes_static places on the state-domain estimate.
double nonbayes_state_weight(double lambda, int n);

struct EfficiencyRatios {
    double vs_state = 0.0;
    double vs_time = 0.0;
};

/// Asymptotic relative efficiencies of the integrated estimator with
/// d = lim n / ((N - n) h).
EfficiencyRatios efficiency_ratios(double d, double s1_sq, double s2_sq);

} // namespace volint
