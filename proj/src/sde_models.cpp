#include "volint/sde_models.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "volint/format.hpp"

namespace volint {

std::string_view to_string(ModelTag tag) {
    switch (tag) {
    case ModelTag::CIR: return "CIR";
    case ModelTag::SV: return "SV";
    case ModelTag::GBM: return "GBM";
    case ModelTag::External: return "External";
    }
    return "External";
}

namespace {

void check_common(double delta, std::size_t n_obs) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta must be positive, got " + std::to_string(delta));
    }
    if (n_obs < 2) {
        throw std::invalid_argument("n_obs must be at least 2");
    }
}

} // namespace

Path simulate_cir(const CirParams& p, double delta, std::size_t n_obs, const RngStream& rng,
                  std::optional<double> r0) {
    check_common(delta, n_obs);
    if (!(p.kappa > 0.0) || !(p.theta > 0.0) || !(p.sigma >= 0.0)) {
        throw std::invalid_argument("CIR parameters must be positive");
    }
    if (2.0 * p.kappa * p.theta < p.sigma * p.sigma) {
        throw std::invalid_argument("CIR parameters violate 2*kappa*theta >= sigma^2");
    }
    const double start = r0.value_or(p.theta);
    if (!(start > 0.0)) {
        throw std::invalid_argument("CIR initial value must be positive");
    }

    Engine eng = make_engine(rng);
    std::normal_distribution<double> normal;
    const double sqrt_dt = std::sqrt(delta);
    const double milstein = 0.25 * p.sigma * p.sigma * delta;

    Path path{std::vector<double>(n_obs), delta, ModelTag::CIR};
    double r = start;
    path.values[0] = r;
    for (std::size_t i = 1; i < n_obs; ++i) {
        const double eps = normal(eng);
        const double rp = std::max(r, 0.0);
        r = r + p.kappa * (p.theta - r) * delta + p.sigma * std::sqrt(rp) * sqrt_dt * eps +
            milstein * (eps * eps - 1.0);
        r = std::max(r, kCirFloor);
        path.values[i] = r;
    }
    return path;
}

double sv_variance_step(const SvParams& p, double v, double dt, double eps) {
    const double alpha = std::sqrt(p.alpha2);
    const double next = v + p.kappa * (p.theta - v) * dt + alpha * v * std::sqrt(dt) * eps +
                        0.5 * p.alpha2 * v * dt * (eps * eps - 1.0);
    return std::max(next, kCirFloor);
}

SvSample simulate_sv(const SvParams& p, double delta, std::size_t n_obs, const RngStream& rng) {
    check_common(delta, n_obs + 1);
    if (p.substeps < 1) {
        throw std::invalid_argument("SV substeps must be >= 1");
    }
    if (!(p.kappa > 0.0) || !(p.theta > 0.0) || !(p.alpha2 >= 0.0)) {
        throw std::invalid_argument("SV parameters must be positive");
    }
    const bool deterministic = p.alpha2 == 0.0;
    if (!deterministic && !(p.ig_shape() > 2.0)) {
        throw std::invalid_argument("SV parameters give inverse-gamma shape a <= 2");
    }

    Engine eng = make_engine(rng);
    std::normal_distribution<double> normal;

    double v = p.theta;
    if (!deterministic) {
        // V_0 ~ IG(a, b) as the reciprocal of Gamma(a, rate = b).
        std::gamma_distribution<double> gamma(p.ig_shape(), 1.0 / p.ig_scale());
        v = 1.0 / gamma(eng);
    }

    const double dt = delta / p.substeps;

    SvSample out;
    out.variance_path.resize(n_obs);
    out.returns.y.resize(n_obs);
    out.returns.delta = delta;
    out.returns.source_len = n_obs + 1;

    for (std::size_t i = 0; i < n_obs; ++i) {
        // Left-point average of V over the interval.
        double acc = 0.0;
        for (int k = 0; k < p.substeps; ++k) {
            acc += v;
            v = sv_variance_step(p, v, dt, normal(eng));
        }
        const double vbar = acc / p.substeps;
        out.variance_path[i] = vbar;
        out.returns.y[i] = std::sqrt(vbar) * normal(eng);
    }

    out.levels.delta = delta;
    out.levels.model_tag = ModelTag::SV;
    out.levels.values = from_returns(0.0, out.returns);
    return out;
}

Path simulate_gbm(const GbmParams& p, double delta, std::size_t n_obs, const RngStream& rng,
                  double r0) {
    check_common(delta, n_obs);
    if (!(p.sigma > 0.0)) {
        throw std::invalid_argument("GBM sigma must be positive");
    }
    if (!(r0 > 0.0)) {
        throw std::invalid_argument("GBM initial value must be positive");
    }
    Engine eng = make_engine(rng);
    std::normal_distribution<double> normal;
    const double drift = (p.mu - 0.5 * p.sigma * p.sigma) * delta;
    const double vol = p.sigma * std::sqrt(delta);

    Path path{std::vector<double>(n_obs), delta, ModelTag::GBM};
    double log_r = std::log(r0);
    path.values[0] = r0;
    for (std::size_t i = 1; i < n_obs; ++i) {
        log_r += drift + vol * normal(eng);
        path.values[i] = std::exp(log_r);
    }
    return path;
}

ReturnSeries to_returns(const Path& path) {
    if (path.values.size() < 2) {
        throw std::invalid_argument("to_returns needs at least two levels");
    }
    if (!(path.delta > 0.0)) {
        throw std::invalid_argument("path delta must be positive");
    }
    const double scale = 1.0 / std::sqrt(path.delta);
    ReturnSeries out;
    out.delta = path.delta;
    out.source_len = path.values.size();
    out.y.resize(path.values.size() - 1);
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
        out.y[i] = (path.values[i + 1] - path.values[i]) * scale;
    }
    return out;
}

std::vector<double> from_returns(double first_value, const ReturnSeries& returns) {
    const double step = std::sqrt(returns.delta);
    std::vector<double> levels(returns.y.size() + 1);
    levels[0] = first_value;
    for (std::size_t i = 0; i < returns.y.size(); ++i) {
        levels[i + 1] = levels[i] + step * returns.y[i];
    }
    return levels;
}

void write_path_csv(std::ostream& os, const Path& path) {
    os << "t,value\n";
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        os << i << ',' << fmt_real(path.values[i]) << '\n';
    }
}

void write_returns_csv(std::ostream& os, const ReturnSeries& returns) {
    os << "t,y\n";
    for (std::size_t i = 0; i < returns.y.size(); ++i) {
        os << i << ',' << fmt_real(returns.y[i]) << '\n';
    }
}

} // namespace volint
