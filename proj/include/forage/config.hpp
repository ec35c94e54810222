#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "forage/arena.hpp"
#include "forage/battery.hpp"
#include "forage/docking.hpp"
#include "forage/genome.hpp"
#include "forage/homeostasis.hpp"
#include "forage/organism.hpp"
#include "forage/strategies.hpp"

namespace forage {

/// Robots placed uniformly at random, without overlap, inside a rectangle.
struct RobotGroup {
    int count = 1;
    double x_min = 5.0, x_max = 105.0;
    double y_min = 5.0, y_max = 135.0;
    double charge_min = 1.0, charge_max = 1.0;
};

/// A docking station on a wall segment; slots are centred on it.
struct StationSpec {
    Vec2 a;
    Vec2 b;
    Vec2 inward_normal{0.0, 1.0};
    int slots = 1;
};

struct GenomeRunParams {
    bool enabled = false;
    // Search time without finding energy before a sequence is marked failed.
    double episode_timeout_min = 1.0;
    double exchange_cooldown_min = 5.0;
    double mutation_probability = 0.05;
    GenomeParams weights;
};

struct OrganismRunParams {
    bool enabled = false;
    OrganismParams params;
    // Give up on an organism that cannot reach crossing size in this time.
    double assembly_timeout_min = 10.0;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::string strategy = "solo";
    std::uint64_t seed = 1;
    double duration_min = 600.0;
    int replications = 1;
    double dt_s = 0.5;

    Arena arena;
    RobotBody body;
    std::vector<RobotGroup> groups{RobotGroup{}};
    std::vector<StationSpec> stations;

    BatteryParams battery;
    Thresholds thresholds;
    // Documented window a Critical robot has to reach a slot. Drain enforces
    // it; exceeding it is only logged.
    double critical_window_min = 4.0;
    DockingParams docking;
    StrategyParams strategy_params;
    GenomeRunParams genome;
    OrganismRunParams organism;

    int robot_count() const;
};

/// Every scalar tunable, by dotted key, in a fixed order.
std::vector<std::string> config_keys();

/// Applies `key = value`; list entries use indexed keys such as group.0.count,
/// station.1.slots, barrier.0.x1. Throws ConfigError on unknown keys or bad values.
void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const ScenarioConfig& config, const std::string& key);

/// Line-oriented key/value text with [section] headers; see docs/config-format.md.
ScenarioConfig parse_config(std::istream& is, ScenarioConfig base = {});
ScenarioConfig load_config_file(const std::string& path);

/// Full effective configuration in the same grammar, loadable by parse_config.
void write_resolved(std::ostream& os, const ScenarioConfig& config);

/// Throws ConfigError describing the first problem found.
void validate(const ScenarioConfig& config);

/// Library scenarios: solo, bottleneck, barrier-swarm, barrier-organism
/// (also reachable as s1..s4).
std::vector<std::string> scenario_names();
ScenarioConfig scenario(const std::string& name);
bool is_scenario_name(const std::string& name);

}  // namespace forage
