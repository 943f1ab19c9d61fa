#pragma once

// Benchmark systems with their default encoder settings.

#include "mieds/encoder.hpp"
#include "mieds/error.hpp"
#include "mieds/etse.hpp"
#include "mieds/expr.hpp"
#include "mieds/integrate.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

namespace mieds {

struct BenchmarkSystem {
    std::string name;
    VectorField field;
    EncoderConfig encoder;
    std::optional<NoiseSpec> noise;
    std::optional<TriggerConfig> trigger;
};

/// ẋ₀ = x₁, ẋ₁ = −x₁ − 9.81 sin(x₀) from [π/4, 0].
inline BenchmarkSystem pendulum() {
    VectorField f({var(1), -var(1) - 9.81 * sin(var(0))});
    EncoderConfig cfg;
    cfg.lambda = 2.0;
    cfg.k_max = 3;
    cfg.m_max = 4;
    cfg.horizon = 2.0;
    cfg.dt = 0.01;
    cfg.x0 = {std::numbers::pi / 4.0, 0.0};
    return {"pendulum", std::move(f), cfg, std::nullopt, std::nullopt};
}

/// Rigid-body quadrotor attitude and body-velocity model. Inertias are not
/// published with the reference experiment; they default to 1, which makes
/// the gyroscopic coupling terms vanish.
struct QuadrotorParams {
    double Ix = 1.0, Iy = 1.0, Iz = 1.0;
    double mass = 1.0;
    double gravity = 9.81;
    double f_wx = 1.0, f_wy = 1.0, f_wz = 1.0, f_t = 0.0;
    double tau_wx = 1.0, tau_wy = 1.0, tau_wz = 1.0;
    double tau_x = 1.0, tau_y = 1.0, tau_z = 1.0;

    void validate() const {
        if (!(Ix > 0.0 && Iy > 0.0 && Iz > 0.0)) throw ConfigError("systems", "quadrotor inertias must be positive");
        if (!(mass > 0.0)) throw ConfigError("systems", "quadrotor mass must be positive");
    }

    friend bool operator==(const QuadrotorParams&, const QuadrotorParams&) = default;
};

/// State order [φ, θ, p, q, r, u, v, w].
inline BenchmarkSystem quadrotor(const QuadrotorParams& P = {}) {
    P.validate();
    const Expr phi = var(0), theta = var(1), p = var(2), q = var(3), r = var(4), u = var(5), v = var(6), w = var(7);
    const double g = P.gravity, m = P.mass;
    VectorField f({
        p + r * (cos(phi) * tan(theta)) + q * (sin(phi) * tan(theta)),
        q * cos(theta) - r * sin(phi),
        (P.Iy - P.Iz) / P.Ix * (r * q) + (P.tau_x + P.tau_wx) / P.Ix,
        (P.Iz - P.Ix) / P.Iy * (p * r) + (P.tau_y + P.tau_wy) / P.Iy,
        (P.Ix - P.Iy) / P.Iz * (p * q) + (P.tau_z + P.tau_wz) / P.Iz,
        r * v - q * w - g * sin(theta) + P.f_wx / m,
        p * w - r * u + g * (sin(phi) * cos(theta)) + P.f_wy / m,
        q * u - p * v + g * (cos(theta) * cos(phi)) + (P.f_wz - P.f_t) / m,
    });
    EncoderConfig cfg;
    cfg.lambda = 2.0;
    cfg.k_max = 5;
    cfg.m_max = 5;
    cfg.horizon = 2.0;
    cfg.dt = 0.01;
    cfg.x0 = {-2.0, -3.0, 1.0, 3.0, 1.0, 4.0, 2.0, 1.0};
    return {"quadrotor", std::move(f), cfg, std::nullopt, std::nullopt};
}

/// ẋ = −tanh(x) + 0.1 ε(t) from x(0) = 6 over 10 s, δ_noise = 0.075.
inline BenchmarkSystem tanh_system() {
    VectorField f({-tanh(var(0))});
    EncoderConfig cfg;
    cfg.lambda = 0.01;
    cfg.k_max = 3;
    cfg.m_max = 3;
    cfg.horizon = 10.0;
    cfg.dt = 0.01;
    cfg.x0 = {6.0};
    return {"tanh", std::move(f), cfg, NoiseSpec{0.1, 42}, TriggerConfig{0.075, 1}};
}

inline BenchmarkSystem system_by_name(std::string_view name, const QuadrotorParams& quad = {}) {
    if (name == "pendulum") return pendulum();
    if (name == "quadrotor") return quadrotor(quad);
    if (name == "tanh") return tanh_system();
    throw ConfigError("systems", "unknown system '" + std::string(name) + "' (expected pendulum, quadrotor or tanh)");
}

} // namespace mieds
