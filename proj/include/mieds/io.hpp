#pragma once

// Text formats: CSV exports and the JSON documents for local models and
// encodings. Every real is written with 17 significant digits so that
// write → read → write is byte-identical.

#include "mieds/encoder.hpp"
#include "mieds/error.hpp"
#include "mieds/etse.hpp"
#include "mieds/integrate.hpp"
#include "mieds/taylor.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mieds {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io", "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("io", "write failed for " + path.string());
}

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (std::size_t i = 0; i < traj.dim(); ++i) out += ",x" + std::to_string(i);
    out += '\n';
    for (std::size_t j = 0; j < traj.states.size(); ++j) {
        out += format_real(traj.time(j));
        for (double v : traj.states[j]) out += "," + format_real(v);
        out += '\n';
    }
    return out;
}

inline std::string cost_curve_csv(const Encoding& enc) {
    std::string out = "m,L_total\n";
    for (const auto& c : enc.cost_curve) out += std::to_string(c.m) + "," + format_real(c.total) + "\n";
    return out;
}

inline std::string events_csv(const CommLog& log) {
    std::string out = "time,kind,payload\n";
    for (const auto& e : log.events())
        out += format_real(e.time) + "," + to_string(e.kind) + "," + std::to_string(e.payload) + "\n";
    return out;
}

inline std::string aggregate_csv(const std::vector<PredictorStats>& stats) {
    std::string out = "predictor,mean_state_events,std_state_events,mean_model_events,mean_total_scalars\n";
    for (const auto& s : stats)
        out += s.name + "," + format_real(s.mean_state_events) + "," + format_real(s.std_state_events) + "," +
               format_real(s.mean_model_events) + "," + format_real(s.mean_total_scalars) + "\n";
    return out;
}

/// t, the true state, then each predictor's x̂, one row per sample.
inline std::string paths_csv(const Trajectory& truth, const std::vector<EtseRun>& runs,
                             const std::vector<std::string>& names) {
    std::string out = "t";
    for (std::size_t i = 0; i < truth.dim(); ++i) out += ",true_x" + std::to_string(i);
    for (const auto& name : names)
        for (std::size_t i = 0; i < truth.dim(); ++i) out += "," + name + "_x" + std::to_string(i);
    out += '\n';
    for (std::size_t j = 0; j < truth.states.size(); ++j) {
        out += format_real(truth.time(j));
        for (double v : truth.states[j]) out += "," + format_real(v);
        for (const auto& r : runs)
            for (double v : r.predicted.states[j]) out += "," + format_real(v);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::string json_real(double v) {
    if (!std::isfinite(v)) throw ConfigError("io", "cannot serialize a non-finite value");
    return format_real(v);
}

inline std::string json_array(std::span<const double> xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + json_real(xs[i]);
    return out + "]";
}

inline std::string model_fields(const LocalModel& model) {
    std::string out = "\"dim\":" + std::to_string(model.dim()) + ",\"degree\":" + std::to_string(model.degree()) +
                      ",\"center\":" + json_array(model.center()) + ",\"coefficients\":[";
    for (std::size_t i = 0; i < model.components().size(); ++i)
        out += (i ? "," : "") + json_array(model.components()[i].coefficients());
    return out + "]";
}

inline State to_state(const nlohmann::json& j) {
    State out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

inline LocalModel model_from(const nlohmann::json& j) {
    const auto dim = j.at("dim").get<std::size_t>();
    const int degree = j.at("degree").get<int>();
    State center = to_state(j.at("center"));
    if (center.size() != dim) throw ConfigError("io", "center length does not match dim");
    std::vector<TruncatedPoly> comps;
    for (const auto& c : j.at("coefficients")) comps.emplace_back(dim, degree, to_state(c));
    return LocalModel(std::move(center), std::move(comps));
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("io", std::string("malformed JSON: ") + e.what());
    }
}

} // namespace detail

/// {"dim":n,"degree":k,"center":[...],"coefficients":[[graded-lex], ...]}
inline std::string local_model_json(const LocalModel& model) { return "{" + detail::model_fields(model) + "}"; }

inline LocalModel local_model_from_json(std::string_view text) {
    try {
        return detail::model_from(detail::parse_json(text));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("io", std::string("bad local model document: ") + e.what());
    }
}

inline std::string encoding_json(const Encoding& enc) {
    std::string out = "{\n";
    out += "  \"m_star\": " + std::to_string(enc.m_star) + ",\n";
    out += "  \"t0\": " + detail::json_real(enc.t0) + ",\n";
    out += "  \"dt\": " + detail::json_real(enc.dt) + ",\n";
    out += "  \"total_cost\": " + detail::json_real(enc.total_cost) + ",\n";
    out += "  \"cost_curve\": [";
    for (std::size_t i = 0; i < enc.cost_curve.size(); ++i)
        out += std::string(i ? ", " : "") + "{\"m\": " + std::to_string(enc.cost_curve[i].m) +
               ", \"L_total\": " + detail::json_real(enc.cost_curve[i].total) + "}";
    out += "],\n  \"segments\": [\n";
    for (std::size_t i = 0; i < enc.segments.size(); ++i) {
        const Segment& s = enc.segments[i];
        out += "    {\"index\": " + std::to_string(s.index) + ", \"first_sample\": " + std::to_string(s.first_sample) +
               ", \"last_sample\": " + std::to_string(s.last_sample) + ", \"t_start\": " + detail::json_real(s.t_start) +
               ", \"t_stop\": " + detail::json_real(s.t_stop) + ", \"k_star\": " + std::to_string(s.k_star) +
               ", \"local_cost\": " + detail::json_real(s.local_cost) + ", \"model\": " + local_model_json(s.model) + "}";
        out += i + 1 < enc.segments.size() ? ",\n" : "\n";
    }
    out += "  ],\n  \"switch_states\": [";
    for (std::size_t i = 0; i < enc.switch_states.size(); ++i)
        out += (i ? ", " : "") + detail::json_array(enc.switch_states[i]);
    out += "]\n}\n";
    return out;
}

inline Encoding encoding_from_json(std::string_view text) {
    const nlohmann::json j = detail::parse_json(text);
    try {
        Encoding enc;
        enc.m_star = j.at("m_star").get<int>();
        enc.t0 = j.at("t0").get<double>();
        enc.dt = j.at("dt").get<double>();
        enc.total_cost = j.at("total_cost").get<double>();
        for (const auto& c : j.at("cost_curve")) enc.cost_curve.push_back({c.at("m").get<int>(), c.at("L_total").get<double>()});
        for (const auto& s : j.at("segments")) {
            LocalModel model = detail::model_from(s.at("model"));
            State entry = model.center();
            enc.segments.push_back(Segment{s.at("index").get<std::size_t>(), s.at("first_sample").get<std::size_t>(),
                                           s.at("last_sample").get<std::size_t>(), s.at("t_start").get<double>(),
                                           s.at("t_stop").get<double>(), std::move(model), s.at("k_star").get<int>(),
                                           s.at("local_cost").get<double>(), std::move(entry)});
        }
        for (const auto& s : j.at("switch_states")) enc.switch_states.push_back(detail::to_state(s));
        if (enc.segments.empty()) throw ConfigError("io", "encoding has no segments");
        return enc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("io", std::string("bad encoding document: ") + e.what());
    }
}

} // namespace mieds
