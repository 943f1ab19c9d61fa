#pragma once

// Event-triggered remote state estimation with two triggers:
//   γ_noise:    ‖x̂ − x‖₂ ≥ δ  → send the state, receiver resets x̂ ← x
//   γ_dynamics: x leaves the active region Ω_i → send that region's model
// and three receiver-side predictors: send-on-delta (hold), the analytical
// field, and the piecewise local models of an Encoding.

#include "mieds/encoder.hpp"
#include "mieds/error.hpp"
#include "mieds/expr.hpp"
#include "mieds/integrate.hpp"
#include "mieds/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace mieds {

/// Partition of state space into one region per encoder segment. Regions are
/// 0-based segment indices.
class RegionSet {
public:
    /// 1-D regions from the switch states of a monotone trajectory. Segment 0
    /// is on the side of `start`; a point exactly on a threshold belongs to the
    /// lower index.
    static RegionSet thresholds(double start, std::vector<double> switch_values) {
        RegionSet r;
        r.mode_ = Mode::Threshold;
        r.thresholds_ = std::move(switch_values);
        r.descending_ = r.thresholds_.empty() || start >= r.thresholds_.front();
        for (std::size_t i = 1; i < r.thresholds_.size(); ++i) {
            const bool ok = r.descending_ ? r.thresholds_[i] < r.thresholds_[i - 1] : r.thresholds_[i] > r.thresholds_[i - 1];
            if (!ok) throw ConfigError("etse", "threshold regions need strictly monotone switch states");
        }
        return r;
    }

    /// Regions given by representative points; membership is the segment of
    /// the nearest point (Euclidean, ties to the lower index).
    static RegionSet nearest(std::vector<std::vector<State>> representatives) {
        if (representatives.empty()) throw ConfigError("etse", "region set must be non-empty");
        for (const auto& pts : representatives)
            if (pts.empty()) throw ConfigError("etse", "every region needs at least one representative point");
        RegionSet r;
        r.mode_ = Mode::Nearest;
        r.points_ = std::move(representatives);
        return r;
    }

    /// Thresholds for 1-D encodings with monotone switch states, otherwise
    /// nearest-representative regions built from the reference samples of
    /// each segment.
    static RegionSet from_encoding(const Encoding& encoding, const Trajectory& reference) {
        if (encoding.segments.empty()) throw ConfigError("etse", "encoding has no segments");
        if (reference.dim() == 1) {
            std::vector<double> values;
            for (const auto& s : encoding.switch_states) values.push_back(s[0]);
            try {
                if (values.empty() || reference.states.front()[0] != values.front())
                    return thresholds(reference.states.front()[0], std::move(values));
            } catch (const ConfigError&) {
                // not monotone: fall through to representative points
            }
        }
        std::vector<std::vector<State>> reps;
        for (const auto& seg : encoding.segments) {
            if (seg.last_sample >= reference.states.size()) throw ConfigError("etse", "reference shorter than encoding");
            const bool last = &seg == &encoding.segments.back();
            const std::size_t end = last ? seg.last_sample : seg.last_sample - 1;
            reps.emplace_back(reference.states.begin() + static_cast<std::ptrdiff_t>(seg.first_sample),
                              reference.states.begin() + static_cast<std::ptrdiff_t>(end) + 1);
        }
        return nearest(std::move(reps));
    }

    std::size_t size() const noexcept { return mode_ == Mode::Threshold ? thresholds_.size() + 1 : points_.size(); }

    std::size_t region_of(std::span<const double> x) const {
        if (mode_ == Mode::Threshold) {
            std::size_t idx = 0;
            for (double t : thresholds_)
                if (descending_ ? x[0] < t : x[0] > t) ++idx;
            return idx;
        }
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (const auto& p : points_[i]) {
                const double d = distance(x, p);
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
        return best;
    }

    bool is_threshold() const noexcept { return mode_ == Mode::Threshold; }
    const std::vector<double>& threshold_values() const noexcept { return thresholds_; }

private:
    enum class Mode { Threshold, Nearest };
    Mode mode_ = Mode::Threshold;
    bool descending_ = true;
    std::vector<double> thresholds_;
    std::vector<std::vector<State>> points_;
};

inline std::size_t region_of(std::span<const double> x, const RegionSet& regions) { return regions.region_of(x); }

/// f̂ ≡ 0: the receiver holds the last transmitted state.
struct SendOnDelta {};

/// The receiver integrates the true vector field.
struct Analytical {
    VectorField field;
};

/// The receiver integrates the local model of the region the sender reports.
struct Smieds {
    std::vector<LocalModel> models;
    RegionSet regions;

    Smieds(std::vector<LocalModel> m, RegionSet r) : models(std::move(m)), regions(std::move(r)) {
        if (models.empty() || models.size() != regions.size())
            throw ConfigError("etse", "sMIEDS predictor needs exactly one model per region");
    }
};

using Predictor = std::variant<SendOnDelta, Analytical, Smieds>;

inline Smieds make_smieds(const Encoding& encoding, const Trajectory& reference) {
    std::vector<LocalModel> models;
    for (const auto& s : encoding.segments) models.push_back(s.model);
    return Smieds(std::move(models), RegionSet::from_encoding(encoding, reference));
}

inline std::string predictor_name(const Predictor& p) {
    static const char* names[] = {"sod", "analytical", "smieds"};
    return names[p.index()];
}

struct TriggerConfig {
    double delta_noise = 0.075;
    int check_every = 1; ///< samples between trigger checks

    void validate() const {
        if (!(delta_noise > 0.0)) throw ConfigError("etse", "delta_noise must be positive");
        if (check_every < 1) throw ConfigError("etse", "check_every must be at least 1");
    }
};

enum class EventKind { State, Model };

inline const char* to_string(EventKind k) { return k == EventKind::State ? "state" : "model"; }

struct CommEvent {
    double time;
    EventKind kind;
    int payload; ///< scalars sent
    friend bool operator==(const CommEvent&, const CommEvent&) = default;
};

class CommLog {
public:
    void record(double time, EventKind kind, int payload) { events_.push_back({time, kind, payload}); }

    const std::vector<CommEvent>& events() const noexcept { return events_; }

    std::size_t state_count() const { return count(EventKind::State); }
    std::size_t model_count() const { return count(EventKind::Model); }
    long total_scalars() const {
        long s = 0;
        for (const auto& e : events_) s += e.payload;
        return s;
    }

private:
    std::size_t count(EventKind k) const {
        return static_cast<std::size_t>(std::count_if(events_.begin(), events_.end(), [k](const CommEvent& e) { return e.kind == k; }));
    }

    std::vector<CommEvent> events_;
};

struct EtseRun {
    Trajectory predicted; ///< x̂ after any reset at each sample
    CommLog log;
};

/// Walks the sample grid of `truth`. Per sample: advance x̂ one RK4 step of the
/// active f̂ (hold for SoD); on sMIEDS, switch model if the true state changed
/// region (model event, x̂ kept); then fire γ_noise if ‖x̂ − x‖₂ ≥ δ (state
/// event, x̂ ← x). The initial model is logged as a model event at t0.
inline EtseRun simulate_etse(const Trajectory& truth, const Predictor& predictor, const TriggerConfig& trig) {
    trig.validate();
    if (truth.states.empty()) throw ConfigError("etse", "true path is empty");
    const std::size_t n = truth.dim();
    const int state_payload = static_cast<int>(n);

    EtseRun run{Trajectory{truth.t0, truth.dt, {}}, {}};
    run.predicted.states.reserve(truth.states.size());
    State xhat = truth.states.front();

    const Smieds* smieds = std::get_if<Smieds>(&predictor);
    std::size_t active = 0;
    if (smieds) {
        if (smieds->models.front().dim() != n) throw ConfigError("etse", "predictor dimension does not match the path");
        active = smieds->regions.region_of(xhat);
        run.log.record(truth.t0, EventKind::Model, weight_count(smieds->models[active]));
    }
    if (const auto* a = std::get_if<Analytical>(&predictor); a && a->field.dim() != n)
        throw ConfigError("etse", "predictor dimension does not match the path");
    run.predicted.states.push_back(xhat);

    for (std::size_t j = 1; j < truth.states.size(); ++j) {
        const double t = truth.time(j);
        const State& x = truth.states[j];
        if (const auto* a = std::get_if<Analytical>(&predictor)) xhat = rk4_step(a->field, xhat, truth.time(j - 1), truth.dt);
        else if (smieds) xhat = rk4_step(smieds->models[active], xhat, truth.time(j - 1), truth.dt);

        if (j % static_cast<std::size_t>(trig.check_every) == 0) {
            if (smieds) {
                const std::size_t region = smieds->regions.region_of(x);
                if (region != active) {
                    active = region;
                    run.log.record(t, EventKind::Model, weight_count(smieds->models[active]));
                }
            }
            if (distance(xhat, x) >= trig.delta_noise) {
                run.log.record(t, EventKind::State, state_payload);
                xhat = x;
            }
        }
        run.predicted.states.push_back(xhat);
    }
    return run;
}

struct SimulationParams {
    State x0;
    double t0 = 0.0;
    double horizon = 1.0;
    double dt = 0.01;
};

struct PredictorStats {
    std::string name;
    double mean_state_events = 0.0;
    double std_state_events = 0.0;
    double mean_model_events = 0.0;
    double std_model_events = 0.0;
    double mean_total_scalars = 0.0;
    double std_total_scalars = 0.0;
};

/// Called once per run with the sampled true path and one EtseRun per
/// predictor, in predictor order.
using RunObserver = std::function<void(int run, const Trajectory& truth, const std::vector<EtseRun>& results)>;

namespace detail {

/// Mean and sample standard deviation with Neumaier-compensated sums.
inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    auto compensated = [](const std::vector<double>& xs) {
        double sum = 0.0, c = 0.0;
        for (double x : xs) {
            const double t = sum + x;
            c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
            sum = t;
        }
        return sum + c;
    };
    const double mean = compensated(v) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    std::vector<double> sq;
    sq.reserve(v.size());
    for (double x : v) sq.push_back((x - mean) * (x - mean));
    return {mean, std::sqrt(compensated(sq) / static_cast<double>(v.size() - 1))};
}

} // namespace detail

/// Run r samples its true path with seed base.seed + r; every predictor sees
/// that same path.
inline std::vector<PredictorStats> monte_carlo(const VectorField& field, const NoiseSpec& base, int runs,
                                               const std::vector<Predictor>& predictors, const TriggerConfig& trig,
                                               const SimulationParams& sim, const RunObserver& observer = {}) {
    if (runs < 1) throw ConfigError("etse", "runs must be at least 1");
    if (predictors.empty()) throw ConfigError("etse", "no predictors given");
    const std::size_t p = predictors.size();
    std::vector<std::vector<double>> states(p), models(p), scalars(p);
    for (int r = 0; r < runs; ++r) {
        const NoiseSpec noise{base.sigma, base.seed + static_cast<std::uint64_t>(r)};
        const Trajectory truth = euler_maruyama(field, sim.x0, sim.t0, sim.horizon, sim.dt, noise);
        std::vector<EtseRun> results;
        results.reserve(p);
        for (std::size_t i = 0; i < p; ++i) {
            results.push_back(simulate_etse(truth, predictors[i], trig));
            states[i].push_back(static_cast<double>(results.back().log.state_count()));
            models[i].push_back(static_cast<double>(results.back().log.model_count()));
            scalars[i].push_back(static_cast<double>(results.back().log.total_scalars()));
        }
        if (observer) observer(r, truth, results);
    }
    std::vector<PredictorStats> out;
    for (std::size_t i = 0; i < p; ++i) {
        PredictorStats s;
        s.name = predictor_name(predictors[i]);
        std::tie(s.mean_state_events, s.std_state_events) = detail::mean_std(states[i]);
        std::tie(s.mean_model_events, s.std_model_events) = detail::mean_std(models[i]);
        std::tie(s.mean_total_scalars, s.std_total_scalars) = detail::mean_std(scalars[i]);
        out.push_back(s);
    }
    return out;
}

} // namespace mieds
