#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forage/simulation.hpp"

namespace forage {

struct RobotSummary {
    int id = 0;
    double phi = 0.0;
    double t_task = 0.0;
    double t_recharging = 0.0;
    double t_dead = 0.0;
    bool died = false;
    double death_minute = -1.0;
    int recharges = 0;
    bool isolated = false;
    bool aggregated = false;

    bool operator==(const RobotSummary&) const = default;
};

struct RunSummary {
    std::string scenario;
    std::string strategy;
    std::uint64_t seed = 0;
    double duration_min = 0.0;
    std::vector<RobotSummary> robots;
    double swarm_phi = 0.0;
    int deaths = 0;
    int recharges = 0;
    int organisms_formed = 0;
    int crossings = 0;
    int crossing_failures = 0;
    int organism_splits = 0;
    int exchanges = 0;
    std::optional<double> genome_divergence;
    std::vector<double> fitness_latencies;
    // Latency histogram, 10-minute bins keyed by bin start.
    std::map<int, int> latency_histogram;

    int isolated_robots() const;
    int isolated_dead() const;
    int aggregated_robots() const;
    int aggregated_survivors() const;

    bool operator==(const RunSummary&) const = default;
};

/// Rebuilds the summary from the event log alone.
RunSummary summarize_events(const std::vector<Event>& events, const ScenarioConfig& config);

/// Summary of a finished simulation. Ledger and death fields come from the
/// live robot state; the rest is taken from the event log.
RunSummary summarize(const Simulation& sim);

struct RunResult {
    ScenarioConfig config;
    RunSummary summary;
    std::vector<Event> events;
    std::vector<TimeSample> timeseries;
};

/// Validates the config and runs one replication with config.seed.
RunResult run(const ScenarioConfig& config);

/// config.replications runs with seeds seed .. seed+K-1, results ordered by
/// seed. `threads` = 0 picks the hardware concurrency.
std::vector<RunResult> run_replications(const ScenarioConfig& config, unsigned threads = 0);

void write_events_csv(std::ostream& os, const std::vector<Event>& events);
void write_timeseries_csv(std::ostream& os, const std::vector<TimeSample>& samples);
void write_summary_json(std::ostream& os, const RunSummary& summary);

/// events.csv, summary.json, timeseries.csv and config.resolved under `dir`.
void write_outputs(const std::filesystem::path& dir, const RunResult& result);

std::string format_number(double v);

}  // namespace forage
