#pragma once

#include "mieds/error.hpp"
#include "mieds/taylor.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mieds {

/// A right-hand side f: state → state (VectorField, LocalModel, lambdas).
template <class F>
concept VectorFunction = requires(const F& f, std::span<const double> x) {
    { f(x) } -> std::convertible_to<State>;
};

/// Uniformly sampled state path: states[j] is the state at t0 + j·dt.
struct Trajectory {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<State> states;

    std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
    std::size_t dim() const noexcept { return states.empty() ? 0 : states.front().size(); }
    double time(std::size_t j) const noexcept { return t0 + static_cast<double>(j) * dt; }
    double horizon() const noexcept { return static_cast<double>(steps()) * dt; }

    /// Samples first..last inclusive, re-based at time(first).
    Trajectory slice(std::size_t first, std::size_t last) const {
        if (first > last || last >= states.size()) throw ConfigError("integrate", "slice outside trajectory");
        return Trajectory{time(first), dt, std::vector<State>(states.begin() + static_cast<std::ptrdiff_t>(first),
                                                              states.begin() + static_cast<std::ptrdiff_t>(last) + 1)};
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Number of dt steps covering `horizon`; dt must divide it within 1e−9.
inline std::size_t step_count(double horizon, double dt) {
    if (!(dt > 0.0)) throw ConfigError("integrate", "dt must be positive");
    if (!(horizon > 0.0)) throw ConfigError("integrate", "horizon must be positive");
    const double n = std::round(horizon / dt);
    if (n < 1.0 || std::abs(n * dt - horizon) > 1e-9)
        throw ConfigError("integrate", "dt does not divide the horizon");
    return static_cast<std::size_t>(n);
}

namespace detail {

inline void require_finite(const State& x, double t) {
    for (double v : x)
        if (!std::isfinite(v)) throw IntegrationError(t, "state became non-finite");
}

template <VectorFunction F>
State call_rhs(const F& f, const State& x, double t) {
    try {
        State dx = f(std::span<const double>(x));
        if (dx.size() != x.size()) throw ConfigError("integrate", "right-hand side changed the state dimension");
        return dx;
    } catch (const IntegrationError&) {
        throw;
    } catch (const DomainError& e) {
        throw IntegrationError(t, e.what());
    }
}

} // namespace detail

/// One classical Runge–Kutta step from x at time t.
template <VectorFunction F>
State rk4_step(const F& f, const State& x, double t, double dt) {
    const std::size_t n = x.size();
    State tmp(n);
    const State k1 = detail::call_rhs(f, x, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const State k2 = detail::call_rhs(f, tmp, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const State k3 = detail::call_rhs(f, tmp, t);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    const State k4 = detail::call_rhs(f, tmp, t);
    State out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    detail::require_finite(out, t + dt);
    return out;
}

/// `steps` RK4 steps from x0; states[0] = x0.
template <VectorFunction F>
Trajectory rk4_steps(const F& rhs, State x0, double t0, double dt, std::size_t steps) {
    if (x0.empty()) throw ConfigError("integrate", "initial state is empty");
    Trajectory traj{t0, dt, {}};
    traj.states.reserve(steps + 1);
    traj.states.push_back(std::move(x0));
    for (std::size_t j = 0; j < steps; ++j) traj.states.push_back(rk4_step(rhs, traj.states.back(), traj.time(j), dt));
    return traj;
}

template <VectorFunction F>
Trajectory rk4_solve(const F& rhs, State x0, double t0, double horizon, double dt) {
    return rk4_steps(rhs, std::move(x0), t0, dt, step_count(horizon, dt));
}

/// x_{j+1} = x_j + f(x_j)·dt + σ·√dt·ξ_j, ξ_j i.i.d. standard normal per
/// component, drawn from a generator seeded with noise.seed.
template <VectorFunction F>
Trajectory euler_maruyama(const F& rhs, State x0, double t0, double horizon, double dt, const NoiseSpec& noise) {
    if (noise.sigma < 0.0) throw ConfigError("integrate", "sigma must be non-negative");
    if (x0.empty()) throw ConfigError("integrate", "initial state is empty");
    const std::size_t steps = step_count(horizon, dt);
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = noise.sigma * std::sqrt(dt);

    Trajectory traj{t0, dt, {}};
    traj.states.reserve(steps + 1);
    traj.states.push_back(std::move(x0));
    for (std::size_t j = 0; j < steps; ++j) {
        const State& x = traj.states.back();
        const State dx = detail::call_rhs(rhs, x, traj.time(j));
        State next(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + dx[i] * dt + scale * normal(rng);
        detail::require_finite(next, traj.time(j + 1));
        traj.states.push_back(std::move(next));
    }
    return traj;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Left Riemann sum dt · Σ_{j<N} ‖a_j − b_j‖₂ of the pointwise Euclidean gap.
inline double deviation(const Trajectory& a, const Trajectory& b) {
    if (a.states.size() != b.states.size() || a.dim() != b.dim() || a.dt != b.dt || std::abs(a.t0 - b.t0) > 1e-9)
        throw ConfigError("integrate", "deviation needs trajectories on the same grid");
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < a.states.size(); ++j) sum += distance(a.states[j], b.states[j]);
    return a.dt * sum;
}

} // namespace mieds
