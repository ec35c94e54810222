#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "forage/config.hpp"
#include "forage/errors.hpp"

using namespace forage;

namespace {

std::string resolved(const ScenarioConfig& c) {
    std::ostringstream os;
    write_resolved(os, c);
    return os.str();
}

ScenarioConfig parse(const std::string& text, ScenarioConfig base = {}) {
    std::istringstream is(text);
    return parse_config(is, std::move(base));
}

}  // namespace

// Every documented module constant is reachable by key and carries its default.
TEST(Config, DocumentedDefaultsAreOverridable) {
    const std::vector<std::pair<std::string, double>> defaults{
        {"run.duration_min", 600},           {"run.dt_s", 0.5},
        {"arena.width_cm", 110},             {"arena.height_cm", 140},
        {"arena.signal_range_cm", 12.5},     {"arena.substep_cm", 1},
        {"body.side_cm", 3},                 {"body.speed_cm_s", 30},
        {"battery.capacity_mah", 250},       {"battery.idle_ma", 20},
        {"battery.moving_ma", 200},          {"battery.actuating_ma", 400},
        {"battery.communicating_ma", 40},    {"battery.full_charge_min", 90},
        {"battery.cc_end_charge", 0.85},     {"battery.divider_ratio", 0.55},
        {"battery.adc_reference_v", 3},      {"battery.adc_max", 255},
        {"homeostasis.standby_v", 3.05},     {"homeostasis.critical_v", 3.2},
        {"homeostasis.normal_v", 3.7},       {"homeostasis.satisfied_v", 4.0},
        {"homeostasis.full_v", 4.2},         {"homeostasis.ideal_seek_v", 3.65},
        {"homeostasis.hysteresis_v", 0},     {"homeostasis.critical_window_min", 4},
        {"docking.dock_latency_s", 2},       {"docking.undock_latency_s", 1},
        {"docking.alignment_tolerance_deg", 15}, {"docking.slot_margin_cm", 1},
        {"strategy.task_priority", 0.1},     {"strategy.seek_voltage", 3.65},
        {"strategy.response_exponent", 2},   {"genome.success_increment", 1},
        {"genome.failure_factor", 0.5},      {"genome.zero_near_epsilon", 0.5},
        {"genome.energy_ema_alpha", 0.5},    {"genome.tier_width_mah", 50},
        {"genome.max_states", 65536},        {"organism.chain_margin", 2},
        {"organism.cell_capacity_ah", 0.25}, {"organism.discharge_c_rate", 4},
        {"organism.segment_size", 5},        {"organism.docked_idle_factor", 0.5},
        {"organism.speed_factor", 0.6},
    };
    const ScenarioConfig c;
    for (const auto& [key, value] : defaults) {
        EXPECT_DOUBLE_EQ(std::stod(get_config_value(c, key)), value) << key;
        ScenarioConfig changed = c;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", value * 2 + 1);
        set_config_value(changed, key, buf);
        EXPECT_NE(get_config_value(changed, key), get_config_value(c, key)) << key;
    }
    EXPECT_EQ(get_config_value(c, "battery.ocv"),
              "0:3, 0.05:3.2, 0.2:3.65, 0.25:3.7, 0.85:4, 0.95:4.1, 1:4.2");
}

TEST(Config, EveryKeyRoundTrips) {
    const ScenarioConfig c = scenario("barrier-organism");
    for (const auto& key : config_keys()) {
        ScenarioConfig copy;
        set_config_value(copy, key, get_config_value(c, key));
        EXPECT_EQ(get_config_value(copy, key), get_config_value(c, key)) << key;
    }
}

TEST(Config, ResolvedOutputParsesBackToTheSameConfig) {
    for (const auto& name : scenario_names()) {
        const auto c = scenario(name);
        const std::string text = resolved(c);
        const auto back = parse(text);
        EXPECT_EQ(resolved(back), text) << name;
        EXPECT_EQ(back.robot_count(), c.robot_count());
        EXPECT_EQ(back.stations.size(), c.stations.size());
        EXPECT_EQ(back.arena.barriers.size(), c.arena.barriers.size());
    }
}

TEST(Config, SectionsCommentsAndLists) {
    const auto c = parse(R"(# a custom run
[run]
name = lab
strategy = hand-coded
seed = 99
; inline sections
[layout]
groups = 2
stations = 1
[group.1]
count = 4
y_min = 10
[station.0]
x1 = 10
y1 = 0
x2 = 30
y2 = 0
slots = 3
)");
    EXPECT_EQ(c.name, "lab");
    EXPECT_EQ(c.strategy, "hand-coded");
    EXPECT_EQ(c.seed, 99u);
    ASSERT_EQ(c.groups.size(), 2u);
    EXPECT_EQ(c.groups[1].count, 4);
    EXPECT_EQ(c.robot_count(), 5);
    ASSERT_EQ(c.stations.size(), 1u);
    EXPECT_EQ(c.stations[0].slots, 3);
    EXPECT_NO_THROW(validate(c));
}

TEST(Config, ErrorsNameTheLine) {
    try {
        parse("[run]\nseed = 1\nbogus = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("[run\n"), ConfigError);
    EXPECT_THROW(parse("just words\n"), ConfigError);
    EXPECT_THROW(parse("run.seed = minus one\n"), ConfigError);
    EXPECT_THROW(parse("genome.enabled = maybe\n"), ConfigError);
    EXPECT_THROW(parse("battery.ocv = 0:3, 1\n"), ConfigError);
}

TEST(Config, ValidationRejectsBadScenarios) {
    auto bad = [](auto mutate) {
        ScenarioConfig c = scenario("solo");
        mutate(c);
        EXPECT_THROW(validate(c), ConfigError);
    };
    bad([](ScenarioConfig& c) { c.duration_min = 0; });
    bad([](ScenarioConfig& c) { c.strategy = "random"; });
    bad([](ScenarioConfig& c) { c.groups.clear(); });
    bad([](ScenarioConfig& c) { c.replications = 0; });
    bad([](ScenarioConfig& c) { c.genome.weights.failure_factor = 1.5; });
    bad([](ScenarioConfig& c) { c.organism.params.segment_size = 0; });
    bad([](ScenarioConfig& c) { c.stations[0].b = {200.0, 0.0}; });
    for (const auto& n : scenario_names()) EXPECT_NO_THROW(validate(scenario(n)));
}

TEST(Config, ScenarioLibrary) {
    EXPECT_EQ(scenario("s1").name, "solo");
    EXPECT_EQ(scenario("solo").robot_count(), 1);
    EXPECT_EQ(scenario("bottleneck").robot_count(), 10);
    EXPECT_EQ(scenario("bottleneck").stations[0].slots, 2);
    const auto s3 = scenario("barrier-swarm");
    const auto s4 = scenario("barrier-organism");
    EXPECT_FALSE(s3.organism.enabled);
    EXPECT_TRUE(s4.organism.enabled);
    EXPECT_EQ(s3.arena.barriers.size(), 1u);
    EXPECT_THROW(scenario("s9"), ConfigError);
    EXPECT_TRUE(is_scenario_name("s4"));
    EXPECT_FALSE(is_scenario_name("examples/x.cfg"));
}

TEST(Config, MissingFileIsAConfigError) {
    EXPECT_THROW(load_config_file("/nonexistent/scenario.cfg"), ConfigError);
}
