#include "volint/state_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "volint/errors.hpp"

namespace volint {

namespace {

constexpr double kSingularTol = 1e-12;

double sample_sd(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / (n - 1.0));
}

double sample_variance(std::span<const double> x) {
    const double sd = sample_sd(x);
    return sd * sd;
}

std::vector<double> drift_at_sample(std::span<const double> x, std::span<const double> y, double h1,
                                    KernelSpec kernel) {
    LocalLinearSmoother drift(x, y, kernel);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = drift.fit_or_constant(x[i], h1).intercept;
    }
    return out;
}

void check_pairs(const StatePairs& pairs) {
    if (pairs.x.size() != pairs.response.size()) {
        throw std::invalid_argument("state pairs have mismatched lengths");
    }
}

} // namespace

StatePairs state_pairs_at(std::span<const double> levels, std::span<const double> y, std::size_t t,
                          int exclude_recent) {
    if (levels.size() < y.size()) {
        throw std::invalid_argument("levels must cover every return");
    }
    if (t > y.size()) {
        throw std::out_of_range("state_pairs_at origin beyond series end");
    }
    StatePairs pairs;
    if (exclude_recent < 0 || t <= static_cast<std::size_t>(exclude_recent)) {
        return pairs;
    }
    const std::size_t end = t - exclude_recent;
    pairs.x.assign(levels.begin(), levels.begin() + end);
    pairs.response.assign(y.begin(), y.begin() + end);
    return pairs;
}

bool design_is_singular(double v0, double v1, double v2) {
    return !(v0 * v2 - v1 * v1 >= kSingularTol * v0 * v0);
}

LocalLinearSmoother::LocalLinearSmoother(std::span<const double> x, std::span<const double> response,
                                         KernelSpec kernel)
    : kernel_(kernel) {
    if (x.size() != response.size()) {
        throw std::invalid_argument("smoother inputs have mismatched lengths");
    }
    if (x.empty()) {
        throw NoCoverage("smoother has no data");
    }
    order_.resize(x.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    xs_.resize(x.size());
    ys_.resize(x.size());
    for (std::size_t k = 0; k < order_.size(); ++k) {
        xs_[k] = x[order_[k]];
        ys_[k] = response[order_[k]];
    }
}

std::pair<std::size_t, std::size_t> LocalLinearSmoother::window(double x0, double h) const {
    const auto lo = std::lower_bound(xs_.begin(), xs_.end(), x0 - h);
    const auto hi = std::upper_bound(lo, xs_.end(), x0 + h);
    return {static_cast<std::size_t>(lo - xs_.begin()), static_cast<std::size_t>(hi - xs_.begin())};
}

LocalLinearSmoother::Moments LocalLinearSmoother::moments(double x0, double h, std::size_t lo,
                                                          std::size_t hi) const {
    Moments m;
    for (std::size_t k = lo; k < hi; ++k) {
        const double u = (xs_[k] - x0) / h;
        const double w = kernel_(u);
        m.v0 += w;
        m.v1 += w * u;
        m.v2 += w * u * u;
        m.t0 += w * ys_[k];
        m.t1 += w * u * ys_[k];
    }
    return m;
}

void LocalLinearSmoother::check_coverage(double x0, double h) const {
    if (!(h > 0.0)) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    if (x0 < xs_.front() || x0 > xs_.back()) {
        throw NoCoverage("query state outside historical range");
    }
}

LocalFit LocalLinearSmoother::fit(double x0, double h) const {
    LocalFit out = fit_or_constant(x0, h);
    if (out.constant_fallback) {
        throw SingularDesign("local design is singular at the query state");
    }
    return out;
}

LocalFit LocalLinearSmoother::fit_or_constant(double x0, double h) const {
    check_coverage(x0, h);
    const auto [lo, hi] = window(x0, h);
    const Moments m = moments(x0, h, lo, hi);
    if (!(m.v0 > 0.0)) {
        throw NoCoverage("no historical state inside the kernel window");
    }
    LocalFit out;
    out.v0 = m.v0;
    if (design_is_singular(m.v0, m.v1, m.v2)) {
        out.intercept = m.t0 / m.v0;
        out.constant_fallback = true;
        return out;
    }
    const double det = m.v0 * m.v2 - m.v1 * m.v1;
    out.intercept = (m.v2 * m.t0 - m.v1 * m.t1) / det;
    out.slope = (m.v0 * m.t1 - m.v1 * m.t0) / det / h;
    return out;
}

LocalWeights LocalLinearSmoother::weights(double x0, double h, bool allow_constant_fallback) const {
    check_coverage(x0, h);
    const auto [lo, hi] = window(x0, h);
    const Moments m = moments(x0, h, lo, hi);
    if (!(m.v0 > 0.0)) {
        throw NoCoverage("no historical state inside the kernel window");
    }
    LocalWeights out;
    out.index.reserve(hi - lo);
    out.xi.reserve(hi - lo);
    const bool singular = design_is_singular(m.v0, m.v1, m.v2);
    if (singular && !allow_constant_fallback) {
        throw SingularDesign("local design is singular at the query state");
    }
    out.constant_fallback = singular;
    const double det = m.v0 * m.v2 - m.v1 * m.v1;
    for (std::size_t k = lo; k < hi; ++k) {
        const double u = (xs_[k] - x0) / h;
        const double w = kernel_(u);
        if (w == 0.0) {
            continue;
        }
        out.index.push_back(order_[k]);
        out.xi.push_back(singular ? w / m.v0 : w * (m.v2 - u * m.v1) / det);
    }
    return out;
}

double LocalLinearSmoother::loo_cv_error(double h, std::size_t max_eval) const {
    if (!(h > 0.0)) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    const std::size_t n = xs_.size();
    const std::size_t step = std::max<std::size_t>(1, n / std::max<std::size_t>(1, max_eval));
    const double global_mean = std::accumulate(ys_.begin(), ys_.end(), 0.0) / n;
    const double w_self = kernel_(0.0);

    double sse = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < n; k += step) {
        const double x0 = xs_[k];
        const auto [lo, hi] = window(x0, h);
        Moments m = moments(x0, h, lo, hi);
        m.v0 -= w_self;
        m.t0 -= w_self * ys_[k];
        double pred = global_mean;
        if (m.v0 > 1e-12 * w_self) {
            if (design_is_singular(m.v0, m.v1, m.v2)) {
                pred = m.t0 / m.v0;
            } else {
                pred = (m.v2 * m.t0 - m.v1 * m.t1) / (m.v0 * m.v2 - m.v1 * m.v1);
            }
        }
        const double e = ys_[k] - pred;
        sse += e * e;
        ++count;
    }
    return sse / static_cast<double>(count);
}

LocalFit local_linear_fit(const StatePairs& pairs, double x0, double h, KernelSpec kernel) {
    check_pairs(pairs);
    return LocalLinearSmoother(pairs.x, pairs.response, kernel).fit(x0, h);
}

double estimate_drift(const StatePairs& pairs_raw, double x0, double h1, KernelSpec kernel) {
    return local_linear_fit(pairs_raw, x0, h1, kernel).intercept;
}

std::vector<double> residual_squares(const StatePairs& pairs_raw, std::span<const double> drift) {
    check_pairs(pairs_raw);
    if (drift.size() != pairs_raw.count()) {
        throw std::invalid_argument("drift must be evaluated at every state");
    }
    std::vector<double> out(drift.size());
    for (std::size_t i = 0; i < drift.size(); ++i) {
        const double e = pairs_raw.response[i] - drift[i];
        out[i] = e * e;
    }
    return out;
}

std::vector<double> xi_weights(const StatePairs& pairs, double x0, double h, KernelSpec kernel) {
    check_pairs(pairs);
    const LocalWeights lw = LocalLinearSmoother(pairs.x, pairs.response, kernel).weights(x0, h, false);
    std::vector<double> out(pairs.count(), 0.0);
    for (std::size_t k = 0; k < lw.index.size(); ++k) {
        out[lw.index[k]] = lw.xi[k];
    }
    return out;
}

StateVarianceEstimate state_variance(double sigma2_hat, std::span<const double> xi) {
    if (!(sigma2_hat >= 0.0)) {
        throw std::invalid_argument("sigma2_hat must be non-negative");
    }
    StateVarianceEstimate out;
    out.sigma2_hat = sigma2_hat;
    out.raw_sigma2 = sigma2_hat;
    for (double w : xi) {
        out.xi_sq_sum += w * w;
    }
    out.var_hat = 2.0 * sigma2_hat * sigma2_hat * out.xi_sq_sum;
    out.effective_n = out.xi_sq_sum > 0.0 ? 1.0 / out.xi_sq_sum : 0.0;
    return out;
}

double s2_squared(double sigma2, double density_at_x, KernelSpec kernel) {
    if (!(density_at_x > 0.0)) {
        throw std::invalid_argument("density must be positive");
    }
    return 2.0 * kernel.nu0 * sigma2 * sigma2 / density_at_x;
}

double kernel_density(std::span<const double> sample, double x0, double h, KernelSpec kernel) {
    if (sample.empty()) {
        throw std::invalid_argument("kernel_density needs data");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    double acc = 0.0;
    for (double v : sample) {
        acc += kernel((v - x0) / h);
    }
    return acc / (static_cast<double>(sample.size()) * h);
}

double rule_of_thumb_bandwidth(std::span<const double> x, double constant) {
    if (x.size() < 2) {
        throw std::invalid_argument("rule of thumb needs at least two states");
    }
    const double sd = sample_sd(x);
    if (!(sd > 0.0)) {
        throw std::invalid_argument("states have zero spread");
    }
    return constant * sd * std::pow(static_cast<double>(x.size()), -0.2);
}

double select_bandwidth_for(std::span<const double> x, std::span<const double> response,
                            const BandwidthOptions& options, KernelSpec kernel) {
    if (x.size() < kMinStatePairs) {
        throw InsufficientHistory("bandwidth selection needs at least " +
                                  std::to_string(kMinStatePairs) + " pairs");
    }
    const double rot = rule_of_thumb_bandwidth(x, options.rot_constant);
    if (!options.cross_validate || options.cv_multipliers.empty()) {
        return rot;
    }
    const LocalLinearSmoother smoother(x, response, kernel);
    double best_h = rot;
    double best_err = std::numeric_limits<double>::infinity();
    for (double mult : options.cv_multipliers) {
        const double h = mult * rot;
        const double err = smoother.loo_cv_error(h, options.cv_max_eval);
        if (err < best_err) {
            best_err = err;
            best_h = h;
        }
    }
    return best_h;
}

Bandwidths select_bandwidth(const StatePairs& pairs_raw, const BandwidthOptions& options,
                            KernelSpec kernel) {
    check_pairs(pairs_raw);
    Bandwidths bw;
    bw.h1 = select_bandwidth_for(pairs_raw.x, pairs_raw.response, options, kernel);
    const auto drift = drift_at_sample(pairs_raw.x, pairs_raw.response, bw.h1, kernel);
    const auto r2 = residual_squares(pairs_raw, drift);
    bw.h = select_bandwidth_for(pairs_raw.x, r2, options, kernel);
    return bw;
}

StateDomainFit::Prepared StateDomainFit::prepare(const StatePairs& pairs,
                                                 const StateDomainOptions& opt) {
    check_pairs(pairs);
    if (pairs.count() < kMinStatePairs) {
        throw InsufficientHistory("state-domain fit needs at least " +
                                  std::to_string(kMinStatePairs) + " pairs");
    }
    Prepared out;
    if (opt.use_residuals) {
        out.h1 = opt.fixed_h1 > 0.0
                     ? opt.fixed_h1
                     : select_bandwidth_for(pairs.x, pairs.response, opt.bandwidth, opt.kernel);
        const auto drift = drift_at_sample(pairs.x, pairs.response, out.h1, opt.kernel);
        out.r2 = residual_squares(pairs, drift);
    } else {
        out.r2.resize(pairs.count());
        std::transform(pairs.response.begin(), pairs.response.end(), out.r2.begin(),
                       [](double v) { return v * v; });
    }
    out.h = opt.fixed_h > 0.0 ? opt.fixed_h
                              : select_bandwidth_for(pairs.x, out.r2, opt.bandwidth, opt.kernel);
    return out;
}

StateDomainFit::StateDomainFit(const StatePairs& pairs_raw, const StateDomainOptions& options)
    : StateDomainFit(pairs_raw, options, prepare(pairs_raw, options)) {}

StateDomainFit::StateDomainFit(const StatePairs& pairs_raw, const StateDomainOptions& options,
                               Prepared prepared)
    : h1_(prepared.h1),
      h_(prepared.h),
      var_floor_(1e-12 * sample_variance(prepared.r2)),
      r2_(std::move(prepared.r2)),
      smoother_(pairs_raw.x, r2_, options.kernel) {}

StateVarianceEstimate StateDomainFit::estimate(double x0) const {
    const LocalWeights lw = smoother_.weights(x0, h_, true);
    double raw = 0.0;
    for (std::size_t k = 0; k < lw.index.size(); ++k) {
        raw += lw.xi[k] * r2_[lw.index[k]];
    }
    const bool floored = !(raw >= var_floor_);
    StateVarianceEstimate out = state_variance(floored ? var_floor_ : raw, lw.xi);
    out.raw_sigma2 = raw;
    out.floored = floored;
    out.bandwidth_used = h_;
    out.constant_fallback = lw.constant_fallback;
    return out;
}

} // namespace volint
