#include "volint/time_domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "volint/errors.hpp"

namespace volint {

void EsConfig::validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must lie in (0, 1], got " + std::to_string(lambda));
    }
    if (n < 1) {
        throw std::invalid_argument("window n must be >= 1");
    }
}

namespace {

void require_history(std::size_t t, int n, std::size_t size) {
    if (t > size) {
        throw std::out_of_range("forecast origin beyond series end");
    }
    if (t < static_cast<std::size_t>(n)) {
        throw InsufficientHistory("need " + std::to_string(n) + " observations before t=" +
                                  std::to_string(t));
    }
}

} // namespace

double moving_average(std::span<const double> y, std::size_t t, int n) {
    if (n < 1) {
        throw std::invalid_argument("window n must be >= 1");
    }
    require_history(t, n, y.size());
    double sum = 0.0;
    for (std::size_t i = t - n; i < t; ++i) {
        sum += y[i] * y[i];
    }
    return sum / n;
}

std::vector<double> es_weights(const EsConfig& cfg) {
    cfg.validate();
    std::vector<double> w(cfg.n);
    if (cfg.lambda == 1.0) {
        std::fill(w.begin(), w.end(), 1.0 / cfg.n);
        return w;
    }
    const double norm = (1.0 - cfg.lambda) / (1.0 - std::pow(cfg.lambda, cfg.n));
    double pw = 1.0;
    for (int i = 0; i < cfg.n; ++i) {
        w[i] = norm * pw;
        pw *= cfg.lambda;
    }
    return w;
}

double exp_smooth(std::span<const double> y, std::size_t t, const EsConfig& cfg) {
    cfg.validate();
    if (cfg.lambda == 1.0) {
        return moving_average(y, t, cfg.n);
    }
    require_history(t, cfg.n, y.size());
    double sum = 0.0;
    double pw = 1.0;
    for (int i = 1; i <= cfg.n; ++i) {
        const double v = y[t - i];
        sum += pw * v * v;
        pw *= cfg.lambda;
    }
    return sum * (1.0 - cfg.lambda) / (1.0 - pw);
}

double exp_smooth_recursive(std::span<const double> y, std::size_t t, const EsConfig& cfg) {
    cfg.validate();
    require_history(t, cfg.n, y.size());
    if (cfg.lambda == 1.0) {
        return moving_average(y, t, cfg.n);
    }
    double s = 0.0;
    for (std::size_t i = t - cfg.n; i < t; ++i) {
        s = (1.0 - cfg.lambda) * y[i] * y[i] + cfg.lambda * s;
    }
    return s / (1.0 - std::pow(cfg.lambda, cfg.n));
}

std::vector<double> autocorr_sq(std::span<const double> y, std::size_t upto_t, int max_lag) {
    if (max_lag < 1) {
        throw std::invalid_argument("max_lag must be >= 1");
    }
    if (upto_t > y.size()) {
        throw std::out_of_range("autocorr_sq origin beyond series end");
    }
    if (upto_t < static_cast<std::size_t>(max_lag) + 2) {
        throw InsufficientHistory("autocorr_sq needs max_lag + 2 observations");
    }
    const std::size_t n = upto_t;
    std::vector<double> s(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = y[i] * y[i];
        mean += s[i];
    }
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (auto& v : s) {
        v -= mean;
        c0 += v * v;
    }
    if (!(c0 > 0.0)) {
        throw DegenerateSeries("squared returns have zero sample variance");
    }
    std::vector<double> rho(max_lag);
    for (int k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) {
            ck += s[i] * s[i + k];
        }
        rho[k - 1] = std::clamp(ck / c0, -1.0, 1.0);
    }
    return rho;
}

double es_correction_iid(const EsConfig& cfg) {
    cfg.validate();
    const double lam = cfg.lambda;
    if (lam == 1.0) {
        return 1.0 / cfg.n;
    }
    const double ln = std::pow(lam, cfg.n);
    return (1.0 - lam) * (1.0 + ln) / ((1.0 + lam) * (1.0 - ln));
}

TimeVarianceEstimate es_variance(double sigma2_hat, const EsConfig& cfg,
                                 std::span<const double> rho) {
    cfg.validate();
    if (!(sigma2_hat >= 0.0)) {
        throw std::invalid_argument("sigma2_hat must be non-negative");
    }
    const double lam = cfg.lambda;
    const int n = cfg.n;
    const int lags = std::min<int>(n - 1, static_cast<int>(rho.size()));

    // Sum over i, j of lambda^(i+j-2) rho(|i-j|), split into the diagonal and
    // the off-diagonal lags, with the weight normalisation applied last.
    double c = 0.0;
    if (lam == 1.0) {
        double bracket = n;
        for (int k = 1; k <= lags; ++k) {
            bracket += 2.0 * (n - k) * rho[k - 1];
        }
        c = bracket / (static_cast<double>(n) * n);
    } else {
        const double lam2 = lam * lam;
        const double ln = std::pow(lam, n);
        double bracket = (1.0 - ln * ln) / (1.0 - lam2);
        double lk = 1.0;
        for (int k = 1; k <= lags; ++k) {
            lk *= lam;
            bracket += 2.0 * rho[k - 1] * lk * (1.0 - std::pow(lam, 2 * (n - k))) / (1.0 - lam2);
        }
        const double norm = (1.0 - lam) / (1.0 - ln);
        c = norm * norm * bracket;
    }

    TimeVarianceEstimate out;
    out.sigma2_hat = sigma2_hat;
    const double floor = 1e-2 * es_correction_iid(cfg);
    if (!(c >= floor)) {
        c = floor;
        out.clamped = true;
    }
    out.c_t = c;
    out.var_hat = 2.0 * sigma2_hat * sigma2_hat * c;
    return out;
}

double s1_squared(double sigma2, double c) {
    if (c < 0.0) {
        throw std::invalid_argument("c must be non-negative");
    }
    const double s4 = sigma2 * sigma2;
    if (c < 1e-6) {
        // c coth(c/2) = 2 + c^2/6 + O(c^4)
        return s4 * (2.0 + c * c / 6.0);
    }
    return s4 * c / std::tanh(0.5 * c);
}

} // namespace volint
