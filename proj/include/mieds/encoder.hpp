#pragma once

// MDL encoder: equidistant time partitioning, per-segment optimal Taylor order
// and the search over the number of segments m.
//
//   L_i(k)       = λk + ∫_{segment} ‖x(t) − x̂(t)‖₂ dt
//   L_total(m)   = Σ_i min_k L_i(k)
//   m*           = argmin_m L_total(m)
//
// Each segment's model is the degree-k jet of the field about the segment's
// entry state on the reference trajectory, and x̂ restarts from that state
// (the transmitted center) at every segment boundary.

#include "mieds/error.hpp"
#include "mieds/expr.hpp"
#include "mieds/integrate.hpp"
#include "mieds/taylor.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mieds {

struct EncoderConfig {
    double lambda = 1.0;
    int k_min = 1; ///< lowest candidate order; 0 admits the constant model
    int k_max = 3;
    int m_max = 1;
    double t0 = 0.0;
    double horizon = 1.0;
    double dt = 0.01;
    State x0;

    void validate() const {
        if (!(lambda > 0.0)) throw ConfigError("mieds", "lambda must be positive");
        if (k_min < 0 || k_max < k_min || k_max > kMaxDegree)
            throw ConfigError("mieds", "need 0 <= k_min <= k_max <= " + std::to_string(kMaxDegree));
        if (m_max < 1) throw ConfigError("mieds", "m_max must be at least 1");
        if (x0.empty()) throw ConfigError("mieds", "initial state is empty");
        const std::size_t steps = step_count(horizon, dt);
        if (static_cast<std::size_t>(m_max) > steps)
            throw ConfigError("mieds", "m_max exceeds the number of samples in the horizon");
    }

    friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

struct Segment {
    std::size_t index = 0;
    std::size_t first_sample = 0; ///< grid index of t_start
    std::size_t last_sample = 0;  ///< grid index of t_stop
    double t_start = 0.0;
    double t_stop = 0.0;
    LocalModel model;
    int k_star = 0;
    double local_cost = 0.0;
    State entry_state;
};

struct CostPoint {
    int m = 0;
    double total = 0.0;
};

struct Encoding {
    int m_star = 0;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<Segment> segments;
    std::vector<State> switch_states; ///< reference state at each interior boundary
    double total_cost = 0.0;
    std::vector<CostPoint> cost_curve;

    std::vector<int> degrees() const {
        std::vector<int> out;
        for (const auto& s : segments) out.push_back(s.k_star);
        return out;
    }
};

/// Grid indices of the m + 1 segment boundaries of an equidistant split of
/// `steps` samples; boundaries that fall between samples round to the nearest.
inline std::vector<std::size_t> segment_boundaries(std::size_t steps, int m) {
    if (m < 1 || static_cast<std::size_t>(m) > steps) throw ConfigError("mieds", "invalid number of segments");
    std::vector<std::size_t> b(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        b[static_cast<std::size_t>(i)] =
            static_cast<std::size_t>(std::llround(static_cast<double>(steps) * i / static_cast<double>(m)));
    return b;
}

/// λ·k + deviation between `reference` and the model integrated from the
/// reference's first state. +∞ if the reconstruction fails.
inline double local_cost(const Trajectory& reference, const LocalModel& model, double lambda) {
    if (reference.states.empty()) throw ConfigError("mieds", "empty reference slice");
    const double complexity = lambda * weight_count(model);
    try {
        const Trajectory recon = rk4_steps(model, reference.states.front(), reference.t0, reference.dt, reference.steps());
        return complexity + deviation(reference, recon);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

struct LocalChoice {
    int k_star;
    LocalModel model;
    double cost;
};

/// Minimizes local_cost over k ∈ [k_min, k_max] with jets about `center`;
/// ties go to the smaller k.
inline LocalChoice best_local_order(const Trajectory& reference, const State& center, const VectorField& field,
                                    double lambda, int k_max, int k_min = 1) {
    if (k_min < 0 || k_max < k_min) throw ConfigError("mieds", "invalid order range");
    std::optional<LocalModel> full;
    try {
        full = field_jet(field, center, k_max);
    } catch (const DomainError& e) {
        throw DomainError("mieds", "segment starting at t=" + std::to_string(reference.t0) +
                                       ": every order is singular (" + e.what() + ")");
    }
    std::optional<LocalChoice> best;
    for (int k = k_min; k <= k_max; ++k) {
        LocalModel model = full->truncated(k);
        const double cost = local_cost(reference, model, lambda);
        if (!best || cost < best->cost) best = LocalChoice{k, std::move(model), cost};
    }
    if (!std::isfinite(best->cost))
        throw DomainError("mieds", "segment starting at t=" + std::to_string(reference.t0) +
                                       ": no order gives a finite reconstruction");
    return *best;
}

/// Optimal segments for a fixed number of partitions m.
inline std::vector<Segment> solve_partition(const VectorField& field, const Trajectory& reference,
                                            const EncoderConfig& config, int m) {
    const auto bounds = segment_boundaries(reference.steps(), m);
    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const Trajectory slice = reference.slice(bounds[i], bounds[i + 1]);
        const State& entry = slice.states.front();
        LocalChoice choice = best_local_order(slice, entry, field, config.lambda, config.k_max, config.k_min);
        segments.push_back(Segment{i, bounds[i], bounds[i + 1], reference.time(bounds[i]), reference.time(bounds[i + 1]),
                                   std::move(choice.model), choice.k_star, choice.cost, entry});
    }
    return segments;
}

inline double total_cost(const std::vector<Segment>& segments) {
    double s = 0.0;
    for (const auto& seg : segments) s += seg.local_cost;
    return s;
}

/// Encoding of a known reference trajectory (used by encode and by callers
/// that already hold x̄).
inline Encoding encode_reference(const VectorField& field, const Trajectory& reference, const EncoderConfig& config) {
    config.validate();
    Encoding best;
    std::optional<std::vector<Segment>> best_segments;
    for (int m = 1; m <= config.m_max; ++m) {
        std::vector<Segment> segments = solve_partition(field, reference, config, m);
        const double total = total_cost(segments);
        best.cost_curve.push_back({m, total});
        if (!best_segments || total < best.total_cost) {
            best.m_star = m;
            best.total_cost = total;
            best_segments = std::move(segments);
        }
    }
    best.t0 = reference.t0;
    best.dt = reference.dt;
    best.segments = std::move(*best_segments);
    for (std::size_t i = 1; i < best.segments.size(); ++i) best.switch_states.push_back(best.segments[i].entry_state);
    return best;
}

inline Encoding encode(const VectorField& field, const EncoderConfig& config) {
    config.validate();
    if (config.x0.size() != field.dim()) throw ConfigError("mieds", "x0 does not match the field dimension");
    const Trajectory reference = rk4_solve(field, config.x0, config.t0, config.horizon, config.dt);
    return encode_reference(field, reference, config);
}

/// Encoder entry point for stochastic systems. The partition and models are
/// computed on the noiseless dynamics x̄, so this is encode() by construction.
inline Encoding stochastic_encode(const VectorField& field, const EncoderConfig& config) { return encode(field, config); }

/// Rebuilds x̂: segment 1 from x0, each later segment from its transmitted
/// center, each over its own time window.
inline Trajectory decode(const Encoding& encoding, const State& x0, double dt) {
    if (encoding.segments.empty()) throw ConfigError("mieds", "encoding has no segments");
    if (x0.size() != encoding.segments.front().model.dim()) throw ConfigError("mieds", "x0 has wrong dimension");
    Trajectory out{encoding.segments.front().t_start, dt, {}};
    for (std::size_t i = 0; i < encoding.segments.size(); ++i) {
        const Segment& seg = encoding.segments[i];
        const double span = (seg.t_stop - seg.t_start) / dt;
        const auto steps = static_cast<std::size_t>(std::llround(span));
        const State& start = i == 0 ? x0 : seg.model.center();
        Trajectory piece = rk4_steps(seg.model, start, seg.t_start, dt, steps);
        if (!out.states.empty()) out.states.pop_back(); // boundary sample belongs to the next segment
        for (auto& s : piece.states) out.states.push_back(std::move(s));
    }
    return out;
}

} // namespace mieds
