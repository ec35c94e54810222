#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forage/config.hpp"

namespace forage {

struct Event {
    std::int64_t tick = 0;
    int robot = -1;  // -1 for run-level events
    std::string name;
    double value = 0.0;

    bool operator==(const Event&) const = default;
};

/// One row per simulated minute.
struct TimeSample {
    int minute = 0;
    int alive = 0;
    int occupied_slots = 0;
    int queued = 0;
};

/// Ledger bins. Seeking, queueing, docking, charging, leaving and organism
/// work all count as recharging.
enum class Bin { Task, Recharging, Dead };

const char* to_string(Bin b);
Bin bin_of(Mode m);

struct TickLedger {
    std::int64_t task = 0;
    std::int64_t recharging = 0;
    std::int64_t dead = 0;

    LedgerEntry minutes(double dt_s) const;
};

struct Robot {
    int id = 0;
    Pose pose;
    BatteryState battery;
    EnergyKind energy = EnergyKind::Normal;
    Mode mode = Mode::Task;
    int mode_ticks = 0;
    NavMemory nav;
    Rng rng;
    bool contact = false;
    TickLedger ledger;
    Bin bin = Bin::Task;

    // Docking.
    int station = -1;
    int slot = -1;
    std::optional<DockingSession> session;
    double undock_remaining_s = -1.0;  // >= 0 while the undock manoeuvre runs
    std::vector<Vec2> exit_path;

    // Time spent Critical without reaching a slot.
    std::optional<std::int64_t> critical_since;
    bool critical_overrun_logged = false;

    // Genome.
    Genome genome;
    std::string episode_gene;
    std::int64_t episode_start = 0;
    double episode_start_mah = 0.0;
    bool barrier_contact = false;
    bool station_seen = false;

    // Organism.
    int plan = -1;
    struct PendingReward {
        std::string gene;
        std::int64_t formed_tick = 0;
        double start_mah = 0.0;
        double spent_mah = 0.0;
    };
    std::optional<PendingReward> reward;
    bool isolated = false;  // started with every station behind a barrier
};

/// A robot organism being assembled, moved or used to cross a barrier.
struct OrganismPlan {
    enum class Phase { Assembling, Moving, Actuating };

    int id = 0;
    int caller = -1;
    int barrier = -1;
    std::string gene;
    Phase phase = Phase::Assembling;
    int target_size = 0;
    std::int64_t started_tick = 0;
    std::int64_t formed_tick = -1;
    std::int64_t phase_start = 0;
    double heading = 0.0;               // chain heading, towards the barrier
    std::vector<int> chain;             // docked members, head first
    std::vector<int> pending;           // recruits still on their way
    std::optional<Genome> virtual_genome;
    EnergyBus bus;
};

class Simulation {
public:
    /// Validates the configuration and places the robots.
    explicit Simulation(ScenarioConfig config);

    void step();
    void run();
    bool finished() const { return tick_ >= total_ticks_; }

    std::int64_t tick() const { return tick_; }
    std::int64_t total_ticks() const { return total_ticks_; }
    double minutes() const;

    const ScenarioConfig& config() const { return config_; }
    const std::vector<Robot>& robots() const { return robots_; }
    const std::vector<DockingStation>& stations() const { return stations_; }
    const std::vector<std::vector<int>>& queues() const { return queues_; }
    const AggregationGraph& graph() const { return graph_; }
    const std::map<int, OrganismPlan>& plans() const { return plans_; }
    const std::vector<Event>& events() const { return events_; }
    const std::vector<TimeSample>& timeseries() const { return timeseries_; }

    /// Robot bodies as obstacles, optionally leaving some owners out.
    std::vector<Disc> discs(int skip_a = -1, int skip_b = -1) const;

    /// Checks geometric and bookkeeping invariants; throws ContractViolation.
    void check_invariants() const;

private:
    void place_robots();
    void emit(int robot, std::string name, double value = 0.0);

    void step_robot(Robot& r);
    Observation observe(const Robot& r, const std::vector<Disc>& others) const;
    std::optional<SlotView> slot_view(const Robot& r, int station, int slot,
                                      const std::vector<Disc>& others) const;
    std::vector<Vec2> queue_spots(int station, std::size_t count) const;
    void leave_queue(int robot);
    std::vector<Vec2> exit_path(const DockingStation& st, const Slot& slot) const;
    void halt(Robot& r);
    void set_mode(Robot& r, Mode m);

    void genome_tick(Robot& r);
    void start_episode(Robot& r);
    void become_aggregator(Robot& r);

    void organisms_tick();
    void step_plan(OrganismPlan& plan);
    void recruit(OrganismPlan& plan);
    Vec2 chain_spot(const OrganismPlan& plan, std::size_t index) const;
    bool chain_fits(const OrganismPlan& plan) const;
    void dissolve(OrganismPlan& plan, bool success);
    void balance(OrganismPlan& plan);
    bool move_rigid(OrganismPlan& plan, double distance);
    void cross(OrganismPlan& plan);
    bool same_side(Vec2 a, Vec2 b) const;
    int nearest_barrier(Vec2 p) const;

    void exchanges();
    void account();
    void sample();

    ScenarioConfig config_;
    Strategy strategy_;
    double dt_min_ = 0.0;
    std::int64_t tick_ = 0;
    std::int64_t total_ticks_ = 0;
    Rng world_rng_;

    std::vector<Robot> robots_;
    std::vector<DockingStation> stations_;
    std::vector<std::vector<int>> queues_;
    AggregationGraph graph_;
    std::map<int, OrganismPlan> plans_;
    int next_plan_id_ = 0;
    std::map<std::pair<int, int>, std::int64_t> last_exchange_;

    std::vector<Event> events_;
    std::vector<TimeSample> timeseries_;
};

}  // namespace forage
