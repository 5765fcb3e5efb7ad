#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace volint {

enum class KernelKind { Epanechnikov };

/// Symmetric kernel density on [-1, 1]; nu0 is the integral of W(u)^2.
struct KernelSpec {
    KernelKind kind = KernelKind::Epanechnikov;
    double nu0 = 0.6;

    double operator()(double u) const {
        const double a = u < 0.0 ? -u : u;
        return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
};

inline KernelSpec epanechnikov() { return {}; }

/// Historical (state, response) pairs. The response is Y_i for drift
/// fitting, and the squared residual R_i (or Y_i^2) for variance fitting.
struct StatePairs {
    std::vector<double> x;
    std::vector<double> response;

    std::size_t count() const { return x.size(); }
};

/// Pairs (levels[j], y[j]) for j < t - exclude_recent, i.e. the history
/// available at forecast origin t with the time-domain window removed.
StatePairs state_pairs_at(std::span<const double> levels, std::span<const double> y,
                          std::size_t t, int exclude_recent);

struct LocalFit {
    double intercept = 0.0;
    double slope = 0.0;
    /// Sum of kernel weights inside the window.
    double v0 = 0.0;
    /// Singular design; intercept is the locally constant estimate, slope 0.
    bool constant_fallback = false;
};

/// Local weights of the linear smoother at one query point: the fit equals
/// sum_k xi[k] * response[index[k]]. Indices refer to the input order.
struct LocalWeights {
    std::vector<std::size_t> index;
    std::vector<double> xi;
    bool constant_fallback = false;
};

/// Kernel-weighted local-linear smoother over a fixed sample, kept sorted by
/// state so each query only touches points inside the kernel window.
class LocalLinearSmoother {
public:
    LocalLinearSmoother(std::span<const double> x, std::span<const double> response,
                        KernelSpec kernel = {});

    /// Throws NoCoverage when x0 is outside the sample range or the window is
    /// empty, SingularDesign when the local design is singular.
    LocalFit fit(double x0, double h) const;

    /// As fit(), but degrades to the locally constant estimate on a singular
    /// design instead of throwing.
    LocalFit fit_or_constant(double x0, double h) const;

    LocalWeights weights(double x0, double h, bool allow_constant_fallback) const;

    /// Mean squared leave-one-out prediction error over at most `max_eval`
    /// evenly spaced sample points (in sorted order).
    double loo_cv_error(double h, std::size_t max_eval) const;

    std::size_t size() const { return xs_.size(); }
    double min_state() const { return xs_.front(); }
    double max_state() const { return xs_.back(); }

private:
    struct Moments {
        double v0 = 0, v1 = 0, v2 = 0, t0 = 0, t1 = 0;
    };

    std::pair<std::size_t, std::size_t> window(double x0, double h) const;
    Moments moments(double x0, double h, std::size_t lo, std::size_t hi) const;
    void check_coverage(double x0, double h) const;

    std::vector<double> xs_;
    std::vector<double> ys_;
    std::vector<std::size_t> order_;
    KernelSpec kernel_;
};

/// True when the determinant of the scaled local design is too small
/// relative to the total weight.
bool design_is_singular(double v0, double v1_scaled, double v2_scaled);

LocalFit local_linear_fit(const StatePairs& pairs, double x0, double h,
                          KernelSpec kernel = {});

/// Local-linear drift estimate at x0 from pairs whose response is Y_i.
double estimate_drift(const StatePairs& pairs_raw, double x0, double h1,
                      KernelSpec kernel = {});

/// R_i = (Y_i - drift_i)^2.
std::vector<double> residual_squares(const StatePairs& pairs_raw, std::span<const double> drift);

/// Full-length vector of smoother weights xi_i(x0); zero outside the window.
std::vector<double> xi_weights(const StatePairs& pairs, double x0, double h,
                               KernelSpec kernel = {});

struct StateVarianceEstimate {
    double sigma2_hat = 0.0;
    double xi_sq_sum = 0.0;
    double var_hat = 0.0;
    double bandwidth_used = 0.0;
    double effective_n = 0.0;
    /// Estimate before the non-negativity floor.
    double raw_sigma2 = 0.0;
    bool floored = false;
    bool constant_fallback = false;
};

/// Gaussian plug-in variance 2 sigma^4 sum(xi^2).
StateVarianceEstimate state_variance(double sigma2_hat, std::span<const double> xi);

/// Asymptotic variance 2 nu0 sigma^4 / p(x) of the state-domain estimator.
double s2_squared(double sigma2, double density_at_x, KernelSpec kernel = {});

/// Kernel density estimate at x0.
double kernel_density(std::span<const double> sample, double x0, double h,
                      KernelSpec kernel = {});

/// 1.06 * sd(x) * N^(-1/5).
double rule_of_thumb_bandwidth(std::span<const double> x, double constant = 1.06);

struct BandwidthOptions {
    double rot_constant = 1.06;
    /// Multiples of the rule-of-thumb bandwidth tried by cross-validation.
    std::vector<double> cv_multipliers{0.5, 0.75, 1.0, 1.5, 2.0};
    std::size_t cv_max_eval = 200;
    bool cross_validate = true;
};

struct Bandwidths {
    double h1 = 0.0;
    double h = 0.0;
};

inline constexpr std::size_t kMinStatePairs = 20;

/// Picks a bandwidth for one response by leave-one-out cross-validation over
/// a grid around the rule of thumb.
double select_bandwidth_for(std::span<const double> x, std::span<const double> response,
                            const BandwidthOptions& options = {}, KernelSpec kernel = {});

/// Drift bandwidth from the raw responses, then variance bandwidth from the
/// squared residuals of that drift fit.
Bandwidths select_bandwidth(const StatePairs& pairs_raw, const BandwidthOptions& options = {},
                            KernelSpec kernel = {});

struct StateDomainOptions {
    KernelSpec kernel{};
    /// Smooth squared drift residuals; false smooths Y_i^2 directly.
    bool use_residuals = true;
    BandwidthOptions bandwidth{};
    /// Overrides for the selected bandwidths (<= 0 means select).
    double fixed_h1 = 0.0;
    double fixed_h = 0.0;
};

/// Conditional-variance function fitted on one set of historical pairs.
class StateDomainFit {
public:
    StateDomainFit(const StatePairs& pairs_raw, const StateDomainOptions& options = {});

    /// Throws NoCoverage outside the historical state range.
    StateVarianceEstimate estimate(double x0) const;

    double h1() const { return h1_; }
    double h() const { return h_; }
    std::span<const double> squared_residuals() const { return r2_; }

private:
    struct Prepared {
        double h1 = 0.0;
        double h = 0.0;
        std::vector<double> r2;
    };
    static Prepared prepare(const StatePairs& pairs, const StateDomainOptions& options);
    StateDomainFit(const StatePairs& pairs_raw, const StateDomainOptions& options, Prepared prepared);

    double h1_ = 0.0;
    double h_ = 0.0;
    double var_floor_ = 0.0;
    std::vector<double> r2_;
    LocalLinearSmoother smoother_;
};

} // namespace volint
