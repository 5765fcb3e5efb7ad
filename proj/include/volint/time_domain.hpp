#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace volint {

/// Exponential-smoothing configuration. lambda = 1 is the moving average.
struct EsConfig {
    double lambda = 0.94;
    int n = 52;

    void validate() const;
};

struct TimeVarianceEstimate {
    double sigma2_hat = 0.0;
    double var_hat = 0.0;
    /// Correction factor with var_hat = 2 * sigma2_hat^2 * c_t.
    double c_t = 0.0;
    /// Set when a noisy autocorrelation estimate pushed c_t below its floor.
    bool clamped = false;
};

inline constexpr int kDefaultMaxLag = 30;

/// Mean of y[t-n..t-1]^2.
double moving_average(std::span<const double> y, std::size_t t, int n);

/// Exponentially weighted average of the n squared returns before t with
/// weights (1-lambda) lambda^(i-1) / (1-lambda^n).
double exp_smooth(std::span<const double> y, std::size_t t, const EsConfig& cfg);

/// Same estimator through the recursion s <- (1-lambda) y^2 + lambda s run
/// over the window and renormalised by 1-lambda^n.
double exp_smooth_recursive(std::span<const double> y, std::size_t t, const EsConfig& cfg);

/// Weights applied to y[t-1], y[t-2], ..., y[t-n].
std::vector<double> es_weights(const EsConfig& cfg);

/// Sample autocorrelations at lags 1..max_lag of y[0..upto_t-1]^2, using the
/// divide-by-N autocovariance.
std::vector<double> autocorr_sq(std::span<const double> y, std::size_t upto_t,
                                int max_lag = kDefaultMaxLag);

/// c_t for independent, locally homogeneous returns.
double es_correction_iid(const EsConfig& cfg);

/// Sampling variance of an exponential-smoothing estimate given the
/// autocorrelations of the squared returns. rho[k-1] holds lag k; lags beyond
/// rho.size() are treated as zero.
TimeVarianceEstimate es_variance(double sigma2_hat, const EsConfig& cfg,
                                 std::span<const double> rho);

/// Asymptotic variance c sigma^4 (e^c + 1)/(e^c - 1) with c = lim n(1-lambda).
double s1_squared(double sigma2, double c);

} // namespace volint
