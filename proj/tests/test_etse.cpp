#include "mieds/etse.hpp"
#include "mieds/systems.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mieds;

namespace {

struct TanhSetup {
    BenchmarkSystem sys = tanh_system();
    Trajectory reference = rk4_solve(sys.field, sys.encoder.x0, 0.0, sys.encoder.horizon, sys.encoder.dt);
    Encoding enc = encode_reference(sys.field, reference, sys.encoder);
    Smieds smieds = make_smieds(enc, reference);
};

const TanhSetup& tanh_setup() {
    static const TanhSetup s;
    return s;
}

Trajectory noisy_tanh(std::uint64_t seed) {
    const auto& s = tanh_setup();
    return euler_maruyama(s.sys.field, s.sys.encoder.x0, 0.0, 10.0, 0.01, NoiseSpec{0.1, seed});
}

std::size_t crossings(const Trajectory& path, const RegionSet& regions) {
    std::size_t n = 0;
    for (std::size_t j = 1; j < path.states.size(); ++j)
        if (regions.region_of(path.states[j]) != regions.region_of(path.states[j - 1])) ++n;
    return n;
}

} // namespace

TEST(Regions, TanhThreshold) {
    const auto& s = tanh_setup();
    ASSERT_TRUE(s.smieds.regions.is_threshold());
    // switch state from an independent integration of the reference
    const auto ref = oracle::rk4(oracle::tanh_field, {6.0}, 0.01, 500);
    const double threshold = ref.back()[0];
    EXPECT_GT(threshold, 0.0);
    EXPECT_LT(threshold, 6.0);
    EXPECT_NEAR(s.smieds.regions.threshold_values().at(0), threshold, 1e-12);
    EXPECT_EQ(region_of(State{6.0}, s.smieds.regions), 0u);
    EXPECT_EQ(region_of(State{0.0}, s.smieds.regions), 1u);
    EXPECT_EQ(region_of(State{threshold}, s.smieds.regions), 0u);
}

TEST(Regions, TieGoesToLowerIndex) {
    const RegionSet up = RegionSet::thresholds(0.0, {1.0, 2.0});
    EXPECT_EQ(up.region_of(State{1.0}), 0u);
    EXPECT_EQ(up.region_of(State{2.0}), 1u);
    EXPECT_EQ(up.region_of(State{2.5}), 2u);
    const RegionSet near = RegionSet::nearest({{State{0.0, 0.0}}, {State{2.0, 0.0}}});
    EXPECT_EQ(near.region_of(State{1.0, 0.0}), 0u);
    EXPECT_EQ(near.region_of(State{1.1, 0.0}), 1u);
}

TEST(Regions, SingleRegion) {
    const RegionSet one = RegionSet::thresholds(3.0, {});
    EXPECT_EQ(one.size(), 1u);
    for (double x : {-100.0, 0.0, 3.0, 1e9}) EXPECT_EQ(one.region_of(State{x}), 0u);
}

TEST(Regions, RejectNonMonotoneThresholds) {
    EXPECT_THROW(RegionSet::thresholds(0.0, {1.0, 0.5}), ConfigError);
    EXPECT_THROW(RegionSet::nearest({}), ConfigError);
}

TEST(Regions, MultiDimensionalFromEncoding) {
    const auto sys = pendulum();
    const Trajectory ref = rk4_solve(sys.field, sys.encoder.x0, 0.0, 2.0, 0.01);
    auto cfg = sys.encoder;
    Encoding enc;
    enc.segments = solve_partition(sys.field, ref, cfg, 2);
    const RegionSet r = RegionSet::from_encoding(enc, ref);
    EXPECT_FALSE(r.is_threshold());
    EXPECT_EQ(r.size(), 2u);
    EXPECT_EQ(r.region_of(ref.states[10]), 0u);
    EXPECT_EQ(r.region_of(ref.states[190]), 1u);
}

TEST(Smieds, ModelAndRegionCountsMustAgree) {
    const auto& s = tanh_setup();
    EXPECT_THROW(Smieds({s.enc.segments[0].model}, s.smieds.regions), ConfigError);
}

TEST(Simulate, AnalyticalOnNoiselessPathIsSilent) {
    const auto& s = tanh_setup();
    const EtseRun run = simulate_etse(s.reference, Analytical{s.sys.field}, TriggerConfig{0.075, 1});
    EXPECT_EQ(run.log.state_count(), 0u);
    EXPECT_EQ(run.predicted, s.reference);
}

TEST(Simulate, SendOnDeltaConstantTruthIsSilent) {
    const Trajectory flat{0.0, 0.01, std::vector<State>(1001, State{1.0, -2.0})};
    const EtseRun run = simulate_etse(flat, SendOnDelta{}, TriggerConfig{1e-9, 1});
    EXPECT_TRUE(run.log.events().empty());
}

TEST(Simulate, SendOnDeltaExtremes) {
    const Trajectory path = noisy_tanh(3);
    EXPECT_EQ(simulate_etse(path, SendOnDelta{}, TriggerConfig{1e9, 1}).log.state_count(), 0u);
    std::size_t moved = 0;
    for (std::size_t j = 1; j < path.states.size(); ++j)
        if (path.states[j] != path.states[j - 1]) ++moved;
    EXPECT_EQ(simulate_etse(path, SendOnDelta{}, TriggerConfig{1e-300, 1}).log.state_count(), moved);
}

TEST(Simulate, SmiedsLogsInitialModelAndOneSwitch) {
    const auto& s = tanh_setup();
    const EtseRun run = simulate_etse(s.reference, s.smieds, TriggerConfig{0.075, 1});
    ASSERT_EQ(run.log.model_count(), 2u);
    EXPECT_EQ(run.log.events().front().kind, EventKind::Model);
    EXPECT_EQ(run.log.events().front().time, 0.0);
    EXPECT_EQ(run.log.events().front().payload, 1);
    int model_payload = 0;
    for (const auto& e : run.log.events())
        if (e.kind == EventKind::Model) model_payload += e.payload;
    EXPECT_EQ(model_payload, 4);
}

TEST(Simulate, TypicalNoisyRunSwitchesModelOnce) {
    const auto& s = tanh_setup();
    int single = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EtseRun run = simulate_etse(noisy_tanh(seed), s.smieds, TriggerConfig{0.075, 1});
        if (run.log.model_count() == 2) ++single; // initial model plus one switch
    }
    EXPECT_GE(single, 5);
}

TEST(Simulate, TriggerInvariants) {
    const auto& s = tanh_setup();
    const TriggerConfig trig{0.075, 1};
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const Trajectory path = noisy_tanh(seed);
        for (const Predictor& p : std::vector<Predictor>{SendOnDelta{}, Analytical{s.sys.field}, s.smieds}) {
            const EtseRun run = simulate_etse(path, p, trig);
            std::vector<bool> fired(path.states.size(), false);
            for (const auto& e : run.log.events())
                if (e.kind == EventKind::State) fired[static_cast<std::size_t>(std::llround(e.time / 0.01))] = true;
            for (std::size_t j = 0; j < path.states.size(); ++j) {
                const double err = distance(run.predicted.states[j], path.states[j]);
                if (fired[j]) EXPECT_EQ(err, 0.0);
                else EXPECT_LT(err, trig.delta_noise);
            }
            EXPECT_EQ(run.log.state_count() + run.log.model_count(), run.log.events().size());
            long scalars = 0;
            for (const auto& e : run.log.events()) scalars += e.payload;
            EXPECT_EQ(run.log.total_scalars(), scalars);
            if (std::holds_alternative<Smieds>(p))
                EXPECT_LE(run.log.model_count() - 1, crossings(path, s.smieds.regions));
        }
    }
}

TEST(Simulate, CheckEverySkipsSamples) {
    const Trajectory path = noisy_tanh(9);
    const EtseRun run = simulate_etse(path, SendOnDelta{}, TriggerConfig{0.075, 5});
    for (const auto& e : run.log.events()) EXPECT_EQ(std::llround(e.time / 0.01) % 5, 0);
}

TEST(Simulate, RejectsBadTrigger) {
    const auto& s = tanh_setup();
    EXPECT_THROW(simulate_etse(s.reference, SendOnDelta{}, TriggerConfig{0.0, 1}), ConfigError);
    EXPECT_THROW(simulate_etse(s.reference, SendOnDelta{}, TriggerConfig{0.1, 0}), ConfigError);
}

TEST(MonteCarlo, SingleRunEqualsThatRun) {
    const auto& s = tanh_setup();
    const std::vector<Predictor> preds = {SendOnDelta{}, Analytical{s.sys.field}, s.smieds};
    const SimulationParams sim{{6.0}, 0.0, 10.0, 0.01};
    const auto stats = monte_carlo(s.sys.field, NoiseSpec{0.1, 77}, 1, preds, TriggerConfig{0.075, 1}, sim);
    const Trajectory path = noisy_tanh(77);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const EtseRun run = simulate_etse(path, preds[i], TriggerConfig{0.075, 1});
        EXPECT_EQ(stats[i].mean_state_events, static_cast<double>(run.log.state_count()));
        EXPECT_EQ(stats[i].mean_model_events, static_cast<double>(run.log.model_count()));
        EXPECT_EQ(stats[i].mean_total_scalars, static_cast<double>(run.log.total_scalars()));
        EXPECT_EQ(stats[i].std_state_events, 0.0);
    }
    EXPECT_EQ(stats[0].name, "sod");
    EXPECT_EQ(stats[1].name, "analytical");
    EXPECT_EQ(stats[2].name, "smieds");
}

TEST(MonteCarlo, NoiselessAnalyticalIsSilent) {
    const auto& s = tanh_setup();
    const SimulationParams sim{{6.0}, 0.0, 10.0, 0.01};
    // with σ = 0 the path is explicit Euler, so the RK4 predictor drifts only by the scheme gap
    const auto stats = monte_carlo(s.sys.field, NoiseSpec{0.0, 1}, 3, {Analytical{s.sys.field}}, TriggerConfig{0.075, 1}, sim);
    EXPECT_EQ(stats[0].mean_state_events, 0.0);
}

TEST(MonteCarlo, PairedPathsAcrossPredictors) {
    const auto& s = tanh_setup();
    const SimulationParams sim{{6.0}, 0.0, 10.0, 0.01};
    const std::vector<Predictor> preds = {SendOnDelta{}, s.smieds};
    int seen = 0;
    monte_carlo(s.sys.field, NoiseSpec{0.1, 500}, 3, preds, TriggerConfig{0.075, 1}, sim,
                [&](int r, const Trajectory& truth, const std::vector<EtseRun>& results) {
                    EXPECT_EQ(truth, noisy_tanh(500 + static_cast<std::uint64_t>(r)));
                    for (const auto& run : results) EXPECT_EQ(run.predicted.states.size(), truth.states.size());
                    ++seen;
                });
    EXPECT_EQ(seen, 3);
}

TEST(MonteCarlo, MeanAndSampleStd) {
    const auto [mean, sd] = detail::mean_std({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
    EXPECT_DOUBLE_EQ(mean, 5.0);
    EXPECT_NEAR(sd, std::sqrt(32.0 / 7.0), 1e-15);
}

TEST(MonteCarlo, FrozenFirstModelDoesNotHelp) {
    const auto& s = tanh_setup();
    // same first model everywhere: no dynamics trigger can ever switch it
    const Smieds frozen({s.enc.segments[0].model}, RegionSet::thresholds(6.0, {}));
    const SimulationParams sim{{6.0}, 0.0, 10.0, 0.01};
    const auto stats =
        monte_carlo(s.sys.field, NoiseSpec{0.1, 42}, 100, {s.smieds, frozen}, TriggerConfig{0.075, 1}, sim);
    EXPECT_GE(stats[1].mean_state_events, stats[0].mean_state_events);
}
