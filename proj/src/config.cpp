#include "pex/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pex {

using nlohmann::json;

Vector group_row(const std::vector<int>& group, double bound, bool upper, int K) {
    Vector row = Vector::Constant(K, -bound);
    for (int arm : group) {
        if (arm < 1 || arm > K) throw ConfigError("constraint group arm out of range: " + std::to_string(arm));
        row(arm - 1) += 1.0;
    }
    return upper ? row : Vector(-row);
}

namespace {

Vector to_vector(const std::vector<double>& v) {
    Vector out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out(i) = v[i];
    return out;
}

Matrix stack_rows(const std::vector<Vector>& rows, int K) {
    Matrix A(rows.size(), K);
    for (size_t i = 0; i < rows.size(); ++i) A.row(i) = rows[i].transpose();
    return A;
}

EnvironmentSpec make_env(std::vector<double> means, std::vector<Vector> rows, double delta) {
    EnvironmentSpec env;
    env.means = to_vector(means);
    env.constraints = stack_rows(rows, static_cast<int>(means.size()));
    env.delta = delta;
    return env;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"setup1-hard", "setup1-easy", "setup2-hard",
                                                   "setup2-easy", "imdb"};
    return names;
}

EnvironmentSpec preset_environment(const std::string& name) {
    if (name == "setup1-hard") {
        return make_env({1.5, 1.0, 0.5, 0.4, 0.3, 0.2, 0.1},
                        {group_row({1, 2, 3}, 0.5, true, 7), group_row({4, 5}, 0.5, true, 7)}, 0.01);
    }
    if (name == "setup1-easy") {
        return make_env({1.5, 1.0, 1.3, 0.4, 0.3, 0.2, 0.1},
                        {group_row({1, 2, 3}, 0.5, true, 7), group_row({4, 5}, 0.5, true, 7)}, 0.01);
    }
    if (name == "setup2-hard") {
        return make_env({1.0, 0.5, 0.4, 0.4, 0.5},
                        {group_row({1, 2}, 0.5, true, 5), group_row({3, 4}, 0.5, true, 5)}, 0.1);
    }
    if (name == "setup2-easy") {
        return make_env({1.0, 0.5, 0.4, 0.95, 0.8},
                        {group_row({1, 2}, 0.5, true, 5), group_row({3, 4}, 0.5, true, 5)}, 0.1);
    }
    if (name == "imdb") {
        // 12-movie environment; genre membership: action {1, 4}, drama {2},
        // family {5}. Weight on action movies capped at 0.3, drama and
        // family each get at least 0.3.
        return make_env({3.67, 2.97, 2.94, 3.52, 3.18, 2.02, 2.79, 2.96, 2.37, 2.53, 2.55, 2.54},
                        {group_row({1, 4}, 0.3, true, 12), group_row({2}, 0.3, false, 12),
                         group_row({5}, 0.3, false, 12)},
                        0.1);
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known presets: " + known + ")");
}

namespace {

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config field '" + key + "' has the wrong type");
    }
}

EnvironmentSpec parse_environment(const json& j) {
    EnvironmentSpec env;
    if (!j.contains("means")) throw ConfigError("environment.means is required");
    env.means = to_vector(j.at("means").get<std::vector<double>>());
    const int K = static_cast<int>(env.means.size());
    env.sigma2 = get_or(j, "sigma2", 1.0);
    env.cost_noise_sd = get_or(j, "cost_noise_sd", 0.1);
    std::vector<Vector> rows;
    if (j.contains("constraints")) {
        for (const auto& c : j.at("constraints")) {
            if (c.contains("row")) {
                Vector row = to_vector(c.at("row").get<std::vector<double>>());
                if (row.size() != K) throw ConfigError("environment.constraints row length must equal K");
                rows.push_back(row);
            } else if (c.contains("group")) {
                const auto group = c.at("group").get<std::vector<int>>();
                if (c.contains("max")) {
                    rows.push_back(group_row(group, c.at("max").get<double>(), true, K));
                } else if (c.contains("min")) {
                    rows.push_back(group_row(group, c.at("min").get<double>(), false, K));
                } else {
                    throw ConfigError("environment.constraints group needs 'max' or 'min'");
                }
            } else {
                throw ConfigError("environment.constraints entries need 'row' or 'group'");
            }
        }
    }
    env.constraints = stack_rows(rows, K);
    if (j.contains("mean_box")) {
        const auto box = j.at("mean_box").get<std::vector<double>>();
        if (box.size() != 2) throw ConfigError("environment.mean_box must be [lo, hi]");
        env.mean_box_lo = box[0];
        env.mean_box_hi = box[1];
    }
    return env;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    if (j.contains("preset")) {
        cfg.preset = j.at("preset").get<std::string>();
        cfg.env = preset_environment(cfg.preset);
        if (j.contains("environment")) throw ConfigError("give either 'preset' or 'environment', not both");
    } else if (j.contains("environment")) {
        cfg.env = parse_environment(j.at("environment"));
    } else {
        throw ConfigError("config needs 'preset' or 'environment'");
    }
    cfg.env.delta = get_or(j, "delta", cfg.env.delta);
    cfg.env.r = get_or(j, "r", 0.01);
    if (j.contains("sigma2")) cfg.env.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("cost_noise_sd")) cfg.env.cost_noise_sd = j.at("cost_noise_sd").get<double>();

    if (!j.contains("algorithms")) throw ConfigError("config field 'algorithms' is required");
    for (const auto& name : j.at("algorithms").get<std::vector<std::string>>()) {
        try {
            cfg.algorithms.push_back(algorithm_from_string(name));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (cfg.algorithms.empty()) throw ConfigError("config field 'algorithms' must be non-empty");

    const bool paper_scale = get_or(j, "paper_scale", false);
    cfg.seeds = get_or(j, "seeds", paper_scale ? 500 : 100);
    if (cfg.seeds < 1) throw ConfigError("config field 'seeds' must be >= 1");
    cfg.base_seed = get_or<unsigned long>(j, "base_seed", 0);
    cfg.out_dir = get_or<std::string>(j, "out_dir", "out");
    cfg.parallel = get_or(j, "parallel", 0);

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.knobs.ridge_v = get_or(s, "ridge_v", cfg.knobs.ridge_v);
        cfg.knobs.fw_budget = get_or(s, "fw_budget", cfg.knobs.fw_budget);
        cfg.knobs.eta = get_or(s, "eta", cfg.knobs.eta);
        cfg.knobs.adagrad_eps = get_or(s, "adagrad_eps", cfg.knobs.adagrad_eps);
        cfg.knobs.g_analysis = get_or(s, "g_analysis", cfg.knobs.g_analysis);
        cfg.knobs.refresh_every = get_or(s, "refresh_every", cfg.knobs.refresh_every);
        cfg.knobs.multiplier_cap = get_or(s, "multiplier_cap", cfg.knobs.multiplier_cap);
        cfg.knobs.S0 = get_or(s, "S0", cfg.knobs.S0);
        const std::string mode = get_or<std::string>(s, "stopping", "practical");
        if (mode == "practical") {
            cfg.knobs.stopping_mode = ThresholdMode::Practical;
        } else if (mode == "theoretical") {
            cfg.knobs.stopping_mode = ThresholdMode::Theoretical;
        } else {
            throw ConfigError("solver.stopping must be 'practical' or 'theoretical'");
        }
    }
    cfg.knobs.horizon_cap = get_or(j, "horizon_cap", cfg.knobs.horizon_cap);
    cfg.knobs.step_log_stride = get_or(j, "step_log_stride", cfg.knobs.step_log_stride);
    cfg.knobs.trace_stride = get_or(j, "trace_stride", cfg.knobs.trace_stride);

    if (const char* env_seed = std::getenv("PEX_SEED_BASE")) {
        cfg.base_seed = std::strtoul(env_seed, nullptr, 10);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace pex
