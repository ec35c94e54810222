#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forage/arena.hpp"
#include "forage/battery.hpp"
#include "forage/homeostasis.hpp"
#include "forage/rng.hpp"

namespace forage {

/// Per-robot time accounting, in minutes. Seeking, queueing and docking all
/// count as recharging; time after StandBy is dead time.
struct LedgerEntry {
    double t_task = 0.0;
    double t_recharging = 0.0;
    double t_dead = 0.0;

    double elapsed() const { return t_task + t_recharging + t_dead; }
};

struct Efficiency {
    double phi = 0.0;
    bool defined = false;
};

/// t_task / (t_task + t_recharging), with dead time counted as recharging.
/// An empty ledger yields phi 0 and defined = false.
Efficiency efficiency(const LedgerEntry& entry);

/// Mean per-robot efficiency; undefined entries contribute 0.
double swarm_efficiency(std::span<const LedgerEntry> entries);

enum class SeekRule {
    Decision,           // decide() says SeekDock
    FixedVoltage,       // below a fixed voltage, or Critical
    ResponseThreshold,  // Critical, or with probability priority^exponent per tick
};

struct Strategy {
    std::string name;
    SeekRule seek_rule = SeekRule::Decision;
    bool collective_instinct = false;
    bool two_line_queue = false;
};

struct StrategyParams {
    double task_priority = 0.1;
    double seek_voltage = 3.65;
    double response_exponent = 2.0;
    double walk_forward_probability = 0.9;
    double scan_forward_probability = 0.6;
    double approach_timeout_s = 60.0;
    double leave_timeout_s = 30.0;
    double staging_offset_cm = 3.0;
};

Strategy solo_strategy();
Strategy hand_coded_strategy();
Strategy bio_inspired_strategy();
/// "solo", "hand-coded" or "bio-inspired"; throws ConfigError otherwise.
Strategy strategy_by_name(const std::string& name);
std::vector<std::string> strategy_names();

enum class Mode {
    Task,
    Seeking,
    Approaching,
    Queued,
    Docking,
    Charging,
    Leaving,
    Aggregating,
    Dead,
};

const char* to_string(Mode m);

/// What a docking target looks like from the robot.
struct SlotView {
    int station = -1;
    int slot = -1;
    Vec2 dock_point;
    Vec2 staging_point;
    Vec2 inward_normal;
    double dock_heading = 0.0;
    bool in_contact = false;
};

struct QueueView {
    int position = 0;
    Vec2 spot;
};

/// Short-term steering memory carried between ticks.
struct NavMemory {
    int detour_ticks = 0;
};

struct Observation {
    Pose pose;
    bool contact = false;
    double volts = 4.2;
    EnergyState energy;
    Mode mode = Mode::Task;
    int mode_ticks = 0;
    double dt_s = 0.5;
    double speed = 30.0;

    // Nearest free slot whose signal reaches the robot.
    std::optional<SlotView> free_signal;
    // The slot being approached, while it still broadcasts and is in reach.
    std::optional<SlotView> target;
    // Within signal range of a station wall (regardless of occupancy).
    std::optional<int> nearby_station;
    bool nearby_queue_nonempty = false;
    std::optional<QueueView> queue;
    // Leaving: current exit waypoint, none when the exit is complete.
    std::optional<Vec2> exit_waypoint;

    double search_forward_probability = 0.9;
    NavMemory nav;
};

enum class Request { None, Dock, Undock, JoinQueue, LeaveQueue, Halt };

const char* to_string(Request r);

struct PolicyStep {
    Mode next_mode = Mode::Task;
    MotionCommand motion;
    Activity activity = Activity::Idle;
    Request request = Request::None;
    // Dock / JoinQueue target.
    int station = -1;
    int slot = -1;
    NavMemory nav;
};

/// Whether a robot doing its task should go looking for energy this tick.
bool wants_to_seek(const Strategy& s, const StrategyParams& p, const Observation& obs,
                   Decision decision, Rng& rng);

/// Heads for `target`, sidestepping after contacts.
MotionCommand steer_to(const Pose& pose, Vec2 target, bool contact, NavMemory& nav, Rng& rng);

/// The foraging policy shared by every strategy; strategies differ in when
/// they seek, how long they charge and whether they queue.
PolicyStep policy_step(const Strategy& s, const StrategyParams& p, const Observation& obs,
                       Decision decision, Rng& rng);

}  // namespace forage
