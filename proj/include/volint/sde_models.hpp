#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "volint/rng.hpp"

namespace volint {

enum class ModelTag { CIR, SV, GBM, External };

std::string_view to_string(ModelTag tag);

/// Observed or simulated levels sampled every `delta` years.
struct Path {
    std::vector<double> values;
    double delta = 1.0;
    ModelTag model_tag = ModelTag::External;
};

/// Scaled first differences y[i] = (r[i+1] - r[i]) / sqrt(delta).
struct ReturnSeries {
    std::vector<double> y;
    double delta = 1.0;
    std::size_t source_len = 0;
};

struct CirParams {
    double kappa = 0.21459;
    double theta = 0.08571;
    double sigma = 0.07830;
};

struct SvParams {
    double kappa = 3.0;
    double theta = 0.009;
    double alpha2 = 4.0;
    int substeps = 30;

    /// Shape and scale of the stationary inverse-gamma law of V.
    double ig_shape() const { return 1.0 + 2.0 * kappa / alpha2; }
    double ig_scale() const { return 2.0 * theta * kappa / alpha2; }
};

struct GbmParams {
    double mu = 0.03;
    double sigma = 0.26;
};

/// Positivity floor applied after every CIR step.
inline constexpr double kCirFloor = 1e-12;

/// CIR short rate via the Milstein (order 1.0 strong) scheme with full
/// truncation. Starts at `r0` (default: theta).
Path simulate_cir(const CirParams& params, double delta, std::size_t n_obs,
                  const RngStream& rng, std::optional<double> r0 = std::nullopt);

struct SvSample {
    ReturnSeries returns;
    /// Average of V over each sampling interval, aligned with returns.y.
    std::vector<double> variance_path;
    /// Levels r_t = sqrt(delta) * cumsum(y) with r_0 = 0; one longer than y.
    Path levels;
};

/// One Milstein step of the variance equation with standard normal `eps`.
double sv_variance_step(const SvParams& params, double v, double dt, double eps);

/// Stochastic-volatility model dr = sigma_t dB, dV = kappa(theta - V)dt + alpha V dW.
/// `n_obs` is the number of returns produced.
SvSample simulate_sv(const SvParams& params, double delta, std::size_t n_obs,
                     const RngStream& rng);

/// Geometric Brownian motion from exact log-normal increments.
Path simulate_gbm(const GbmParams& params, double delta, std::size_t n_obs,
                  const RngStream& rng, double r0 = 1.0);

ReturnSeries to_returns(const Path& path);

/// Inverse of to_returns given the first level.
std::vector<double> from_returns(double first_value, const ReturnSeries& returns);

void write_path_csv(std::ostream& os, const Path& path);
void write_returns_csv(std::ostream& os, const ReturnSeries& returns);

} // namespace volint
