#include <stdexcept>
#include <string>

#include <json.hpp>

#include "volint/harness.hpp"

namespace volint {

namespace {

using Json = nlohmann::ordered_json;

std::string_view to_string(ReturnKind kind) {
    return kind == ReturnKind::Log ? "log" : "scaled_diff";
}

ReturnKind parse_return_kind(const std::string& s) {
    if (s == "log") return ReturnKind::Log;
    if (s == "scaled_diff") return ReturnKind::ScaledDiff;
    throw std::invalid_argument("unknown returns kind: " + s);
}

template <class T>
void take(const Json& j, const char* key, T& dst) {
    if (auto it = j.find(key); it != j.end()) {
        dst = it->get<T>();
    }
}

} // namespace

std::string config_to_json(const StudyConfig& cfg) {
    Json j;
    j["model"] = std::string(to_string(cfg.model));
    j["delta"] = cfg.delta;
    j["series_len"] = cfg.series_len;
    j["in_sample_len"] = cfg.in_sample_len;
    j["n_reps"] = cfg.n_reps;
    Json ids = Json::array();
    for (EstimatorId id : cfg.estimators) {
        ids.push_back(std::string(to_string(id)));
    }
    j["estimators"] = ids;
    j["lambda"] = cfg.es.lambda;
    j["n"] = cfg.es.n;
    j["hist_window"] = cfg.hist_window;
    j["state_refit_every"] = cfg.state_refit_every;
    j["max_lag"] = cfg.max_lag;
    j["alpha"] = cfg.alpha;
    j["seed"] = cfg.seed;
    j["trim_upper"] = cfg.trim_upper;
    j["semi_grid"] = cfg.semi_grid;
    j["semi_window"] = cfg.semi_window;
    j["cir_kappa"] = cfg.cir.kappa;
    j["cir_theta"] = cfg.cir.theta;
    j["cir_sigma"] = cfg.cir.sigma;
    j["sv_kappa"] = cfg.sv.kappa;
    j["sv_theta"] = cfg.sv.theta;
    j["sv_alpha2"] = cfg.sv.alpha2;
    j["sv_substeps"] = cfg.sv.substeps;
    j["gbm_mu"] = cfg.gbm.mu;
    j["gbm_sigma"] = cfg.gbm.sigma;
    j["gbm_r0"] = cfg.gbm_r0;
    j["use_residuals"] = cfg.state.use_residuals;
    j["rot_constant"] = cfg.state.bandwidth.rot_constant;
    j["cv_multipliers"] = cfg.state.bandwidth.cv_multipliers;
    j["cv_max_eval"] = cfg.state.bandwidth.cv_max_eval;
    j["cross_validate"] = cfg.state.bandwidth.cross_validate;
    j["fixed_h1"] = cfg.state.fixed_h1;
    j["fixed_h"] = cfg.state.fixed_h;
    j["returns"] = std::string(to_string(cfg.returns));
    j["residual_window"] = cfg.residual_window;
    j["threads"] = cfg.threads;
    return j.dump(2) + "\n";
}

StudyConfig config_from_json(const std::string& text, StudyConfig base) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    const Json known = Json::parse(config_to_json(base));
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
        if (value.is_object()) {
            throw std::invalid_argument("config must be flat; key '" + key + "' is nested");
        }
    }
    StudyConfig& c = base;
    try {
        if (auto it = j.find("model"); it != j.end()) {
            c.model = parse_model(it->get<std::string>());
        }
        if (auto it = j.find("estimators"); it != j.end()) {
            c.estimators.clear();
            for (const auto& e : *it) {
                c.estimators.push_back(parse_estimator(e.get<std::string>()));
            }
        }
        if (auto it = j.find("returns"); it != j.end()) {
            c.returns = parse_return_kind(it->get<std::string>());
        }
        take(j, "delta", c.delta);
        take(j, "series_len", c.series_len);
        take(j, "in_sample_len", c.in_sample_len);
        take(j, "n_reps", c.n_reps);
        take(j, "lambda", c.es.lambda);
        take(j, "n", c.es.n);
        take(j, "hist_window", c.hist_window);
        take(j, "state_refit_every", c.state_refit_every);
        take(j, "max_lag", c.max_lag);
        take(j, "alpha", c.alpha);
        take(j, "seed", c.seed);
        take(j, "trim_upper", c.trim_upper);
        take(j, "semi_grid", c.semi_grid);
        take(j, "semi_window", c.semi_window);
        take(j, "cir_kappa", c.cir.kappa);
        take(j, "cir_theta", c.cir.theta);
        take(j, "cir_sigma", c.cir.sigma);
        take(j, "sv_kappa", c.sv.kappa);
        take(j, "sv_theta", c.sv.theta);
        take(j, "sv_alpha2", c.sv.alpha2);
        take(j, "sv_substeps", c.sv.substeps);
        take(j, "gbm_mu", c.gbm.mu);
        take(j, "gbm_sigma", c.gbm.sigma);
        take(j, "gbm_r0", c.gbm_r0);
        take(j, "use_residuals", c.state.use_residuals);
        take(j, "rot_constant", c.state.bandwidth.rot_constant);
        take(j, "cv_multipliers", c.state.bandwidth.cv_multipliers);
        take(j, "cv_max_eval", c.state.bandwidth.cv_max_eval);
        take(j, "cross_validate", c.state.bandwidth.cross_validate);
        take(j, "fixed_h1", c.state.fixed_h1);
        take(j, "fixed_h", c.state.fixed_h);
        take(j, "residual_window", c.residual_window);
        take(j, "threads", c.threads);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return c;
}

} // namespace volint
