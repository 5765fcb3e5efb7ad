#include "volint/integration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace volint {

std::string_view to_string(IntegrationMode mode) {
    switch (mode) {
    case IntegrationMode::Dynamic: return "Dynamic";
    case IntegrationMode::Bayesian: return "Bayesian";
    case IntegrationMode::TimeOnly: return "TimeOnly";
    case IntegrationMode::StateOnly: return "StateOnly";
    }
    return "Dynamic";
}

double dynamic_weight(double var_time, double var_state) {
    if (!(var_time >= 0.0) || !(var_state >= 0.0)) {
        throw std::invalid_argument("variances must be non-negative");
    }
    const double total = var_time + var_state;
    if (total == 0.0) {
        return 0.5;
    }
    return std::clamp(var_state / total, 0.0, 1.0);
}

IntegratedEstimate integrate(double time_est, double state_est, double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw std::invalid_argument("weight must lie in [0, 1]");
    }
    if (!(time_est >= 0.0) || !(state_est >= 0.0)) {
        throw std::invalid_argument("estimates must be non-negative");
    }
    IntegratedEstimate out;
    out.w_time = w;
    if (w == 1.0) {
        out.sigma2_hat = time_est;
    } else if (w == 0.0) {
        out.sigma2_hat = state_est;
    } else {
        const double v = w * time_est + (1.0 - w) * state_est;
        out.sigma2_hat = std::clamp(v, std::min(time_est, state_est), std::max(time_est, state_est));
    }
    return out;
}

IntegratedEstimate integrate_dynamic(double time_est, double var_time, double state_est,
                                     double var_state) {
    const double w = dynamic_weight(var_time, var_state);
    IntegratedEstimate out = integrate(time_est, state_est, w);
    out.var_time = var_time;
    out.var_state = var_state;
    out.degenerate_weight = var_time + var_state == 0.0;
    out.mode = IntegrationMode::Dynamic;
    return out;
}

IntegratedEstimate time_only(double time_est, double var_time) {
    IntegratedEstimate out = integrate(time_est, 0.0, 1.0);
    out.var_time = var_time;
    out.mode = IntegrationMode::TimeOnly;
    return out;
}

IgPrior ig_posterior(const IgPrior& prior, std::span<const double> window) {
    if (window.empty()) {
        throw std::invalid_argument("posterior update needs at least one return");
    }
    double ss = 0.0;
    for (double y : window) {
        ss += y * y;
    }
    return {prior.a + 0.5 * static_cast<double>(window.size()), prior.b + 0.5 * ss};
}

double bayes_ma(double ma_est, double prior_mean, int n, double a) {
    if (n < 1 || !(a > 1.0)) {
        throw std::invalid_argument("bayes_ma needs n >= 1 and a > 1");
    }
    const double k = 2.0 * (a - 1.0);
    const double nn = n;
    return nn / (nn + k) * ma_est + k / (nn + k) * prior_mean;
}

double effective_n(double lambda, int n) {
    if (!(lambda > 0.0 && lambda <= 1.0) || n < 1) {
        throw std::invalid_argument("effective_n needs lambda in (0, 1] and n >= 1");
    }
    if (lambda == 1.0) {
        return n;
    }
    return (1.0 - std::pow(lambda, n)) / (1.0 - lambda);
}

double bayes_es(double es_est, double prior_mean, double lambda, int n, double a) {
    if (lambda == 1.0) {
        return bayes_ma(es_est, prior_mean, n, a);
    }
    if (!(a > 1.0)) {
        throw std::invalid_argument("bayes_es needs a > 1");
    }
    const double ns = effective_n(lambda, n);
    const double k = 2.0 * (a - 1.0);
    return ns / (ns + k) * es_est + k / (k + ns) * prior_mean;
}

IgPrior match_hyperparams(double state_est) {
    if (!(state_est >= 0.0)) {
        throw std::invalid_argument("state estimate must be non-negative");
    }
    return {2.5, 1.5 * state_est};
}

double nonbayes_state_weight(double lambda, int n) {
    if (!(lambda > 0.0 && lambda <= 1.0) || n < 1) {
        throw std::invalid_argument("nonbayes weights need lambda in (0, 1] and n >= 1");
    }
    if (lambda == 1.0) {
        return 0.0;
    }
    const double s = 3.0 * (1.0 - lambda);
    return s / (1.0 - std::pow(lambda, n) + s);
}

double nonbayes_static(double es_est, double state_est, double lambda, int n) {
    const double ws = nonbayes_state_weight(lambda, n);
    if (ws == 0.0) {
        return es_est;
    }
    return (1.0 - ws) * es_est + ws * state_est;
}

EfficiencyRatios efficiency_ratios(double d, double s1_sq, double s2_sq) {
    if (!(d > 0.0) || !(s1_sq > 0.0) || !(s2_sq > 0.0)) {
        throw std::invalid_argument("efficiency ratios need positive inputs");
    }
    return {1.0 + d * s2_sq / s1_sq, 1.0 + s1_sq / (d * s2_sq)};
}

} // namespace volint
