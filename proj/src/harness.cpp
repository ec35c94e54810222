#include "forage/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "forage/errors.hpp"

namespace forage {

int RunSummary::isolated_robots() const {
    return static_cast<int>(std::count_if(robots.begin(), robots.end(), [](const auto& r) { return r.isolated; }));
}

int RunSummary::isolated_dead() const {
    return static_cast<int>(std::count_if(robots.begin(), robots.end(),
                                          [](const auto& r) { return r.isolated && r.died; }));
}

int RunSummary::aggregated_robots() const {
    return static_cast<int>(std::count_if(robots.begin(), robots.end(), [](const auto& r) { return r.aggregated; }));
}

int RunSummary::aggregated_survivors() const {
    return static_cast<int>(std::count_if(robots.begin(), robots.end(),
                                          [](const auto& r) { return r.aggregated && !r.died; }));
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

namespace {

void finish_robot(RobotSummary& r, std::int64_t task, std::int64_t recharging, std::int64_t dead,
                  double dt_s) {
    const LedgerEntry e = TickLedger{task, recharging, dead}.minutes(dt_s);
    r.t_task = e.t_task;
    r.t_recharging = e.t_recharging;
    r.t_dead = e.t_dead;
    r.phi = efficiency(e).phi;
}

void finish_swarm(RunSummary& s) {
    std::vector<LedgerEntry> entries;
    s.deaths = 0;
    for (const auto& r : s.robots) {
        entries.push_back({r.t_task, r.t_recharging, r.t_dead});
        s.deaths += r.died ? 1 : 0;
    }
    s.swarm_phi = swarm_efficiency(entries);
}

}  // namespace

RunSummary summarize_events(const std::vector<Event>& events, const ScenarioConfig& config) {
    RunSummary s;
    s.scenario = config.name;
    s.strategy = config.strategy;
    s.seed = config.seed;
    s.duration_min = config.duration_min;
    const int n = config.robot_count();
    s.robots.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s.robots[static_cast<std::size_t>(i)].id = i;

    struct Open {
        std::string bin;
        std::int64_t since = 0;
        std::int64_t task = 0, recharging = 0, dead = 0;
    };
    std::vector<Open> open(static_cast<std::size_t>(n));
    std::int64_t end_tick = -1;

    auto close = [](Open& o, std::int64_t at) {
        const std::int64_t len = at - o.since;
        if (o.bin == "task") o.task += len;
        else if (o.bin == "recharging") o.recharging += len;
        else if (o.bin == "dead") o.dead += len;
        o.since = at;
    };

    for (const auto& e : events) {
        if (e.robot >= n) throw ContractViolation("event for unknown robot " + std::to_string(e.robot));
        RobotSummary* r = e.robot >= 0 ? &s.robots[static_cast<std::size_t>(e.robot)] : nullptr;
        if (e.name == "task" || e.name == "recharging" || e.name == "dead") {
            auto& o = open[static_cast<std::size_t>(e.robot)];
            close(o, e.tick);
            o.bin = e.name;
        } else if (e.name == "standby") {
            r->died = true;
            r->death_minute = e.value;
        } else if (e.name == "charge") {
            ++r->recharges;
            ++s.recharges;
        } else if (e.name == "isolated") {
            r->isolated = true;
        } else if (e.name == "organism_join") {
            r->aggregated = true;
        } else if (e.name == "organism_form") {
            ++s.organisms_formed;
        } else if (e.name == "organism_cross") {
            ++s.crossings;
        } else if (e.name == "cross_fail") {
            ++s.crossing_failures;
        } else if (e.name == "organism_split") {
            ++s.organism_splits;
        } else if (e.name == "exchange") {
            ++s.exchanges;
        } else if (e.name == "fitness_latency") {
            s.fitness_latencies.push_back(e.value);
            ++s.latency_histogram[static_cast<int>(std::floor(e.value / 10.0)) * 10];
        } else if (e.name == "genome_divergence" && e.robot < 0) {
            s.genome_divergence = e.value;
        } else if (e.name == "end") {
            end_tick = e.tick;
        }
    }
    if (end_tick < 0) throw ContractViolation("event log has no end record");
    for (int i = 0; i < n; ++i) {
        auto& o = open[static_cast<std::size_t>(i)];
        close(o, end_tick);
        finish_robot(s.robots[static_cast<std::size_t>(i)], o.task, o.recharging, o.dead, config.dt_s);
    }
    finish_swarm(s);
    return s;
}

RunSummary summarize(const Simulation& sim) {
    RunSummary s = summarize_events(sim.events(), sim.config());
    for (const auto& r : sim.robots()) {
        auto& out = s.robots[static_cast<std::size_t>(r.id)];
        finish_robot(out, r.ledger.task, r.ledger.recharging, r.ledger.dead, sim.config().dt_s);
        out.died = r.mode == Mode::Dead;
    }
    finish_swarm(s);
    return s;
}

RunResult run(const ScenarioConfig& config) {
    Simulation sim(config);
    sim.run();
    RunResult out;
    out.config = config;
    out.summary = summarize(sim);
    out.events = sim.events();
    out.timeseries = sim.timeseries();
    return out;
}

std::vector<RunResult> run_replications(const ScenarioConfig& config, unsigned threads) {
    validate(config);
    const auto k = static_cast<std::size_t>(config.replications);
    std::vector<RunResult> results(k);
    std::vector<std::exception_ptr> errors(k);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < k; i = next++) {
            try {
                ScenarioConfig c = config;
                c.seed = config.seed + i;
                c.replications = 1;
                results[i] = run(c);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, k));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

void write_events_csv(std::ostream& os, const std::vector<Event>& events) {
    os << "tick,robot,event,value\n";
    for (const auto& e : events)
        os << e.tick << ',' << e.robot << ',' << e.name << ',' << format_number(e.value) << '\n';
}

void write_timeseries_csv(std::ostream& os, const std::vector<TimeSample>& samples) {
    os << "minute,alive,occupied_slots,queued\n";
    for (const auto& s : samples)
        os << s.minute << ',' << s.alive << ',' << s.occupied_slots << ',' << s.queued << '\n';
}

void write_summary_json(std::ostream& os, const RunSummary& s) {
    nlohmann::ordered_json j;
    j["scenario"] = s.scenario;
    j["strategy"] = s.strategy;
    j["seed"] = s.seed;
    j["duration_min"] = s.duration_min;
    j["swarm_phi"] = s.swarm_phi;
    j["deaths"] = s.deaths;
    j["recharges"] = s.recharges;
    auto& robots = j["robots"] = nlohmann::ordered_json::array();
    for (const auto& r : s.robots) {
        nlohmann::ordered_json row;
        row["id"] = r.id;
        row["phi"] = r.phi;
        row["t_task"] = r.t_task;
        row["t_recharging"] = r.t_recharging;
        row["t_dead"] = r.t_dead;
        row["died"] = r.died;
        if (r.died) row["death_minute"] = r.death_minute;
        row["recharges"] = r.recharges;
        row["isolated"] = r.isolated;
        row["aggregated"] = r.aggregated;
        robots.push_back(std::move(row));
    }
    auto& org = j["organisms"];
    org["formed"] = s.organisms_formed;
    org["crossings"] = s.crossings;
    org["crossing_failures"] = s.crossing_failures;
    org["splits"] = s.organism_splits;
    org["aggregated_robots"] = s.aggregated_robots();
    org["aggregated_survivors"] = s.aggregated_survivors();
    j["isolated_robots"] = s.isolated_robots();
    j["isolated_dead"] = s.isolated_dead();
    j["exchanges"] = s.exchanges;
    if (s.genome_divergence) j["genome_divergence"] = *s.genome_divergence;
    else j["genome_divergence"] = nullptr;
    auto& hist = j["fitness_latency_histogram"] = nlohmann::ordered_json::object();
    for (const auto& [bin, count] : s.latency_histogram) hist[std::to_string(bin)] = count;
    os << j.dump(2) << '\n';
}

void write_outputs(const std::filesystem::path& dir, const RunResult& result) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f) throw ConfigError("cannot write " + (dir / name).string());
        return f;
    };
    {
        auto f = open("events.csv");
        write_events_csv(f, result.events);
    }
    {
        auto f = open("summary.json");
        write_summary_json(f, result.summary);
    }
    {
        auto f = open("timeseries.csv");
        write_timeseries_csv(f, result.timeseries);
    }
    {
        auto f = open("config.resolved");
        write_resolved(f, result.config);
    }
}

}  // namespace forage
