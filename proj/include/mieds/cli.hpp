#pragma once

// Command implementations behind the `mieds` executable. A run is described by
// a flat JSON object (RunConfig); command-line flags override its keys.

#include "mieds/encoder.hpp"
#include "mieds/error.hpp"
#include "mieds/etse.hpp"
#include "mieds/io.hpp"
#include "mieds/parser.hpp"
#include "mieds/systems.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace mieds::cli {

struct RunConfig {
    std::optional<std::string> command; // encode | decode | etse | sweep
    std::optional<std::string> system;
    std::optional<std::string> field; // inline description, components separated by ';' or newlines
    std::optional<double> lambda;
    std::optional<int> k_min, k_max, m_max;
    std::optional<double> t0, horizon, dt;
    std::optional<State> x0;
    std::optional<double> sigma;
    std::optional<std::uint64_t> seed;
    std::optional<double> delta_noise;
    std::optional<int> check_every;
    std::optional<int> runs;
    std::optional<std::string> out;
    std::optional<std::string> encoding; // input document for decode
    std::optional<std::string> sweep;
    std::optional<std::vector<double>> sweep_values;
    std::map<std::string, double> quadrotor; // QuadrotorParams overrides by field name

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline const std::vector<std::string>& quadrotor_keys() {
    static const std::vector<std::string> keys = {"Ix",   "Iy",    "Iz",     "mass",   "gravity", "f_wx",  "f_wy",  "f_wz",
                                                  "f_t",  "tau_wx", "tau_wy", "tau_wz", "tau_x",   "tau_y", "tau_z"};
    return keys;
}

inline const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names = {"lambda", "delta_noise", "m_max", "k_max", "sigma"};
    return names;
}

namespace detail {

template <class T>
void read_key(const nlohmann::json& j, const char* key, std::optional<T>& slot) {
    if (!j.contains(key)) return;
    if constexpr (std::is_integral_v<T>) {
        const auto& v = j.at(key);
        if (!(std::is_signed_v<T> ? v.is_number_integer() : v.is_number_unsigned()))
            throw ConfigError("cli", std::string("config key '") + key + "' must be an integer");
    }
    try {
        slot = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("cli", std::string("config key '") + key + "' has the wrong type");
    }
}

template <class T>
void write_key(nlohmann::json& j, const char* key, const std::optional<T>& slot) {
    if (slot) j[key] = *slot;
}

} // namespace detail

/// Strict parse: unknown keys and wrongly typed values are rejected.
inline RunConfig parse_run_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cli", std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("cli", "config must be a JSON object");
    static const std::vector<std::string> known = {
        "command", "system",      "field", "lambda", "k_min",    "k_max",    "m_max", "t0",    "horizon",
        "dt",      "x0",          "sigma", "seed",   "delta_noise", "check_every", "runs", "out", "encoding",
        "sweep",   "sweep_values"};
    const auto& qk = quadrotor_keys();
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end() && std::find(qk.begin(), qk.end(), key) == qk.end())
            throw ConfigError("cli", "unknown config key '" + key + "'");

    RunConfig c;
    detail::read_key(j, "command", c.command);
    detail::read_key(j, "system", c.system);
    detail::read_key(j, "field", c.field);
    detail::read_key(j, "lambda", c.lambda);
    detail::read_key(j, "k_min", c.k_min);
    detail::read_key(j, "k_max", c.k_max);
    detail::read_key(j, "m_max", c.m_max);
    detail::read_key(j, "t0", c.t0);
    detail::read_key(j, "horizon", c.horizon);
    detail::read_key(j, "dt", c.dt);
    detail::read_key(j, "x0", c.x0);
    detail::read_key(j, "sigma", c.sigma);
    detail::read_key(j, "seed", c.seed);
    detail::read_key(j, "delta_noise", c.delta_noise);
    detail::read_key(j, "check_every", c.check_every);
    detail::read_key(j, "runs", c.runs);
    detail::read_key(j, "out", c.out);
    detail::read_key(j, "encoding", c.encoding);
    detail::read_key(j, "sweep", c.sweep);
    detail::read_key(j, "sweep_values", c.sweep_values);
    for (const auto& key : qk) {
        std::optional<double> v;
        detail::read_key(j, key.c_str(), v);
        if (v) c.quadrotor[key] = *v;
    }
    return c;
}

inline std::string serialize_run_config(const RunConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    detail::write_key(j, "command", c.command);
    detail::write_key(j, "system", c.system);
    detail::write_key(j, "field", c.field);
    detail::write_key(j, "lambda", c.lambda);
    detail::write_key(j, "k_min", c.k_min);
    detail::write_key(j, "k_max", c.k_max);
    detail::write_key(j, "m_max", c.m_max);
    detail::write_key(j, "t0", c.t0);
    detail::write_key(j, "horizon", c.horizon);
    detail::write_key(j, "dt", c.dt);
    detail::write_key(j, "x0", c.x0);
    detail::write_key(j, "sigma", c.sigma);
    detail::write_key(j, "seed", c.seed);
    detail::write_key(j, "delta_noise", c.delta_noise);
    detail::write_key(j, "check_every", c.check_every);
    detail::write_key(j, "runs", c.runs);
    detail::write_key(j, "out", c.out);
    detail::write_key(j, "encoding", c.encoding);
    detail::write_key(j, "sweep", c.sweep);
    detail::write_key(j, "sweep_values", c.sweep_values);
    for (const auto& [key, value] : c.quadrotor) j[key] = value;
    return j.dump(2) + "\n";
}

/// Keys set in `overrides` replace those in `base`.
inline RunConfig merge(RunConfig base, const RunConfig& overrides) {
    auto take = [](auto& dst, const auto& src) {
        if (src) dst = src;
    };
    take(base.command, overrides.command);
    take(base.system, overrides.system);
    take(base.field, overrides.field);
    take(base.lambda, overrides.lambda);
    take(base.k_min, overrides.k_min);
    take(base.k_max, overrides.k_max);
    take(base.m_max, overrides.m_max);
    take(base.t0, overrides.t0);
    take(base.horizon, overrides.horizon);
    take(base.dt, overrides.dt);
    take(base.x0, overrides.x0);
    take(base.sigma, overrides.sigma);
    take(base.seed, overrides.seed);
    take(base.delta_noise, overrides.delta_noise);
    take(base.check_every, overrides.check_every);
    take(base.runs, overrides.runs);
    take(base.out, overrides.out);
    take(base.encoding, overrides.encoding);
    take(base.sweep, overrides.sweep);
    take(base.sweep_values, overrides.sweep_values);
    for (const auto& [k, v] : overrides.quadrotor) base.quadrotor[k] = v;
    return base;
}

/// Fully specified run after defaults and overrides are applied.
struct ResolvedRun {
    std::string name;
    VectorField field;
    EncoderConfig encoder;
    NoiseSpec noise;
    TriggerConfig trigger;
    int runs;
    std::filesystem::path out;
};

inline QuadrotorParams quadrotor_params(const std::map<std::string, double>& overrides) {
    QuadrotorParams p;
    std::map<std::string, double*> slots = {
        {"Ix", &p.Ix},         {"Iy", &p.Iy},         {"Iz", &p.Iz},         {"mass", &p.mass},   {"gravity", &p.gravity},
        {"f_wx", &p.f_wx},     {"f_wy", &p.f_wy},     {"f_wz", &p.f_wz},     {"f_t", &p.f_t},     {"tau_wx", &p.tau_wx},
        {"tau_wy", &p.tau_wy}, {"tau_wz", &p.tau_wz}, {"tau_x", &p.tau_x},   {"tau_y", &p.tau_y}, {"tau_z", &p.tau_z}};
    for (const auto& [k, v] : overrides) {
        auto it = slots.find(k);
        if (it == slots.end()) throw ConfigError("cli", "unknown quadrotor parameter '" + k + "'");
        *it->second = v;
    }
    return p;
}

inline ResolvedRun resolve(const RunConfig& c) {
    if (c.system && c.field) throw ConfigError("cli", "give either a system name or an inline field, not both");
    if (!c.quadrotor.empty() && c.system != "quadrotor")
        throw ConfigError("cli", "quadrotor parameters given for a different system");

    std::optional<BenchmarkSystem> sys;
    if (c.field) {
        std::string text = *c.field;
        std::replace(text.begin(), text.end(), ';', '\n');
        VectorField f = parse_field(text);
        EncoderConfig enc;
        enc.lambda = 1.0;
        enc.k_max = 3;
        enc.m_max = 3;
        enc.horizon = 1.0;
        enc.dt = 0.01;
        enc.x0 = State(f.dim(), 1.0);
        sys = BenchmarkSystem{"field", std::move(f), enc, std::nullopt, std::nullopt};
    } else {
        sys = system_by_name(c.system.value_or("tanh"), quadrotor_params(c.quadrotor));
    }

    EncoderConfig enc = sys->encoder;
    if (c.lambda) enc.lambda = *c.lambda;
    if (c.k_min) enc.k_min = *c.k_min;
    if (c.k_max) enc.k_max = *c.k_max;
    if (c.m_max) enc.m_max = *c.m_max;
    if (c.t0) enc.t0 = *c.t0;
    if (c.horizon) enc.horizon = *c.horizon;
    if (c.dt) enc.dt = *c.dt;
    if (c.x0) enc.x0 = *c.x0;
    if (enc.x0.size() != sys->field.dim()) throw ConfigError("cli", "x0 does not match the field dimension");
    enc.validate();

    NoiseSpec noise = sys->noise.value_or(NoiseSpec{0.0, 42});
    if (c.sigma) noise.sigma = *c.sigma;
    if (c.seed) noise.seed = *c.seed;
    if (noise.sigma < 0.0) throw ConfigError("cli", "sigma must be non-negative");

    TriggerConfig trig = sys->trigger.value_or(TriggerConfig{});
    if (c.delta_noise) trig.delta_noise = *c.delta_noise;
    if (c.check_every) trig.check_every = *c.check_every;
    trig.validate();

    const int runs = c.runs.value_or(noise.sigma > 0.0 ? 100 : 1);
    if (runs < 1) throw ConfigError("cli", "runs must be at least 1");

    return ResolvedRun{sys->name, sys->field, enc, noise, trig, runs, c.out.value_or("out")};
}

namespace detail {

inline void make_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cli", "cannot create output directory " + dir.string() + ": " + ec.message());
}

inline std::string join_degrees(const std::vector<int>& ks) {
    std::string out;
    for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? ";" : "") + std::to_string(ks[i]);
    return out;
}

} // namespace detail

/// Writes encoding.json, cost_curve.csv, reference.csv and decoded.csv.
inline Encoding cmd_encode(const RunConfig& config) {
    const ResolvedRun run = resolve(config);
    detail::make_dir(run.out);
    const Trajectory reference = rk4_solve(run.field, run.encoder.x0, run.encoder.t0, run.encoder.horizon, run.encoder.dt);
    const Encoding enc = encode_reference(run.field, reference, run.encoder);
    const Trajectory decoded = decode(enc, run.encoder.x0, run.encoder.dt);
    write_file(run.out / "encoding.json", encoding_json(enc));
    write_file(run.out / "cost_curve.csv", cost_curve_csv(enc));
    write_file(run.out / "reference.csv", trajectory_csv(reference));
    write_file(run.out / "decoded.csv", trajectory_csv(decoded));
    return enc;
}

/// Reads the `encoding` document and writes decoded.csv.
inline Trajectory cmd_decode(const RunConfig& config) {
    if (!config.encoding) throw ConfigError("cli", "decode needs an encoding document (--encoding)");
    const Encoding enc = encoding_from_json(read_file(*config.encoding));
    const std::filesystem::path out = config.out.value_or("out");
    detail::make_dir(out);
    const Trajectory decoded = decode(enc, enc.segments.front().model.center(), enc.dt);
    write_file(out / "decoded.csv", trajectory_csv(decoded));
    return decoded;
}

inline std::vector<Predictor> standard_predictors(const VectorField& field, const Encoding& enc, const Trajectory& reference) {
    return {SendOnDelta{}, Analytical{field}, make_smieds(enc, reference)};
}

/// Monte-Carlo ETSE comparison of SoD, analytical and sMIEDS predictors.
/// Writes aggregate.csv, encoding.json and, per run r, run_<r>_paths.csv plus
/// run_<r>_<predictor>_events.csv.
inline std::vector<PredictorStats> cmd_etse(const RunConfig& config, bool write_runs = true) {
    const ResolvedRun run = resolve(config);
    if (run.noise.sigma == 0.0 && run.runs > 1)
        throw ConfigError("cli", "a deterministic path (sigma = 0) needs runs = 1");
    detail::make_dir(run.out);
    const Trajectory reference = rk4_solve(run.field, run.encoder.x0, run.encoder.t0, run.encoder.horizon, run.encoder.dt);
    const Encoding enc = encode_reference(run.field, reference, run.encoder);
    const std::vector<Predictor> predictors = standard_predictors(run.field, enc, reference);
    std::vector<std::string> names;
    for (const auto& p : predictors) names.push_back(predictor_name(p));

    RunObserver observer;
    if (write_runs)
        observer = [&](int r, const Trajectory& truth, const std::vector<EtseRun>& results) {
            const std::string prefix = "run_" + std::to_string(r);
            write_file(run.out / (prefix + "_paths.csv"), paths_csv(truth, results, names));
            for (std::size_t i = 0; i < results.size(); ++i)
                write_file(run.out / (prefix + "_" + names[i] + "_events.csv"), events_csv(results[i].log));
        };
    const SimulationParams sim{run.encoder.x0, run.encoder.t0, run.encoder.horizon, run.encoder.dt};
    auto stats = monte_carlo(run.field, run.noise, run.runs, predictors, run.trigger, sim, observer);
    write_file(run.out / "encoding.json", encoding_json(enc));
    write_file(run.out / "aggregate.csv", aggregate_csv(stats));
    return stats;
}

/// One row per value of `config.sweep`. Encoder parameters (lambda, m_max,
/// k_max) report m_star and per-segment degrees; trigger/noise parameters
/// (delta_noise, sigma) report mean event counts per predictor.
inline std::string cmd_sweep(const RunConfig& config) {
    if (!config.sweep) throw ConfigError("cli", "sweep needs a parameter name (--sweep <name> <values>)");
    const std::string& param = *config.sweep;
    const auto& allowed = sweep_parameters();
    if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
        throw ConfigError("cli", "unknown sweep parameter '" + param + "'");
    if (!config.sweep_values || config.sweep_values->empty()) throw ConfigError("cli", "sweep needs at least one value");

    const bool encoder_sweep = param == "lambda" || param == "m_max" || param == "k_max";
    std::string csv = encoder_sweep
                          ? "value,m_star,degrees,total_cost\n"
                          : "value,sod_mean_state_events,analytical_mean_state_events,smieds_mean_state_events,"
                            "smieds_mean_model_events\n";
    for (double v : *config.sweep_values) {
        RunConfig c = config;
        auto as_int = [&](double x) {
            if (x != std::floor(x)) throw ConfigError("cli", param + " values must be integers");
            return static_cast<int>(x);
        };
        if (param == "lambda") c.lambda = v;
        else if (param == "m_max") c.m_max = as_int(v);
        else if (param == "k_max") c.k_max = as_int(v);
        else if (param == "delta_noise") c.delta_noise = v;
        else c.sigma = v;

        const ResolvedRun run = resolve(c);
        const Trajectory reference =
            rk4_solve(run.field, run.encoder.x0, run.encoder.t0, run.encoder.horizon, run.encoder.dt);
        const Encoding enc = encode_reference(run.field, reference, run.encoder);
        if (encoder_sweep) {
            csv += format_real(v) + "," + std::to_string(enc.m_star) + "," + detail::join_degrees(enc.degrees()) + "," +
                   format_real(enc.total_cost) + "\n";
            continue;
        }
        if (run.noise.sigma == 0.0 && run.runs > 1)
            throw ConfigError("cli", "a deterministic path (sigma = 0) needs runs = 1");
        const SimulationParams sim{run.encoder.x0, run.encoder.t0, run.encoder.horizon, run.encoder.dt};
        const auto stats =
            monte_carlo(run.field, run.noise, run.runs, standard_predictors(run.field, enc, reference), run.trigger, sim);
        csv += format_real(v) + "," + format_real(stats[0].mean_state_events) + "," +
               format_real(stats[1].mean_state_events) + "," + format_real(stats[2].mean_state_events) + "," +
               format_real(stats[2].mean_model_events) + "\n";
    }
    const std::filesystem::path out = config.out.value_or("out");
    detail::make_dir(out);
    write_file(out / "sweep.csv", csv);
    return csv;
}

} // namespace mieds::cli
