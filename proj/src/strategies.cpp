#include "forage/strategies.hpp"

#include <cmath>
#include <numbers>

#include "forage/errors.hpp"

namespace forage {

Efficiency efficiency(const LedgerEntry& entry) {
    const double denominator = entry.t_task + entry.t_recharging + entry.t_dead;
    if (!(denominator > 0.0)) return {0.0, false};
    return {entry.t_task / denominator, true};
}

double swarm_efficiency(std::span<const LedgerEntry> entries) {
    if (entries.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& e : entries) sum += efficiency(e).phi;
    return sum / static_cast<double>(entries.size());
}

Strategy solo_strategy() { return {"solo", SeekRule::Decision, false, false}; }
Strategy hand_coded_strategy() { return {"hand-coded", SeekRule::FixedVoltage, false, false}; }
Strategy bio_inspired_strategy() {
    return {"bio-inspired", SeekRule::ResponseThreshold, true, true};
}

Strategy strategy_by_name(const std::string& name) {
    if (name == "solo") return solo_strategy();
    if (name == "hand-coded") return hand_coded_strategy();
    if (name == "bio-inspired") return bio_inspired_strategy();
    throw ConfigError("unknown strategy '" + name + "' (expected solo, hand-coded, bio-inspired)");
}

std::vector<std::string> strategy_names() { return {"solo", "hand-coded", "bio-inspired"}; }

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Task: return "task";
        case Mode::Seeking: return "seeking";
        case Mode::Approaching: return "approaching";
        case Mode::Queued: return "queued";
        case Mode::Docking: return "docking";
        case Mode::Charging: return "charging";
        case Mode::Leaving: return "leaving";
        case Mode::Aggregating: return "aggregating";
        case Mode::Dead: return "dead";
    }
    return "?";
}

const char* to_string(Request r) {
    switch (r) {
        case Request::None: return "none";
        case Request::Dock: return "dock";
        case Request::Undock: return "undock";
        case Request::JoinQueue: return "join_queue";
        case Request::LeaveQueue: return "leave_queue";
        case Request::Halt: return "halt";
    }
    return "?";
}

bool wants_to_seek(const Strategy& s, const StrategyParams& p, const Observation& obs,
                   Decision decision, Rng& rng) {
    switch (s.seek_rule) {
        case SeekRule::Decision: return decision == Decision::SeekDock;
        case SeekRule::FixedVoltage:
            return obs.energy.kind == EnergyKind::Critical || obs.volts < p.seek_voltage;
        case SeekRule::ResponseThreshold: {
            if (obs.energy.kind == EnergyKind::Critical) return true;
            if (obs.energy.kind != EnergyKind::Discharged) return false;
            return rng.bernoulli(std::pow(obs.energy.level, p.response_exponent));
        }
    }
    return false;
}

MotionCommand steer_to(const Pose& pose, Vec2 target, bool contact, NavMemory& nav, Rng& rng) {
    if (nav.detour_ticks > 0) {
        --nav.detour_ticks;
        return MotionCommand::forward(0.0, 3.0);
    }
    if (contact) {
        nav.detour_ticks = 2;
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        return MotionCommand::rotate(sign * rng.uniform(0.35, 0.65) * std::numbers::pi);
    }
    const Vec2 d = target - pose.pos;
    const double dist = norm(d);
    if (dist < 1e-9) return MotionCommand::stop();
    return MotionCommand::forward(angle_diff(heading_of(d), pose.heading), dist);
}

namespace {

constexpr double kArrived = 0.3;  // cm

MotionCommand search_motion(const Observation& obs, Rng& rng) {
    return RandomWalk(obs.search_forward_probability).next(obs.pose, obs.contact, rng);
}

/// Straight-in approach: staging point first, then the docking point along the
/// wall normal so the robot arrives square to the wall.
MotionCommand approach(const SlotView& t, const Observation& obs, NavMemory& nav, Rng& rng) {
    const Vec2 rel = obs.pose.pos - t.dock_point;
    const double along = dot(rel, t.inward_normal);
    const Vec2 lateral = rel - t.inward_normal * along;
    const double stage_depth = dot(t.staging_point - t.dock_point, t.inward_normal);
    const bool in_corridor = norm(lateral) < 0.5 && along <= stage_depth + 0.5;
    return steer_to(obs.pose, in_corridor ? t.dock_point : t.staging_point, obs.contact, nav, rng);
}

PolicyStep seek_or_approach(const Strategy& s, const Observation& obs, Rng& rng, PolicyStep out) {
    // Second line: wait behind the charging robots instead of crowding the slots.
    if (s.two_line_queue && obs.nearby_station &&
        (!obs.free_signal || obs.nearby_queue_nonempty)) {
        out.request = Request::JoinQueue;
        out.station = *obs.nearby_station;
        out.next_mode = Mode::Queued;
        out.motion = MotionCommand::stop();
        out.activity = Activity::Idle;
        return out;
    }
    if (obs.free_signal) {
        out.next_mode = Mode::Approaching;
        out.station = obs.free_signal->station;
        out.slot = obs.free_signal->slot;
        out.motion = approach(*obs.free_signal, obs, out.nav, rng);
        out.activity = Activity::Moving;
        return out;
    }
    out.next_mode = Mode::Seeking;
    out.motion = search_motion(obs, rng);
    out.activity = Activity::Moving;
    return out;
}

}  // namespace

PolicyStep policy_step(const Strategy& s, const StrategyParams& p, const Observation& obs,
                       Decision decision, Rng& rng) {
    PolicyStep out;
    out.nav = obs.nav;
    out.next_mode = obs.mode;
    if (obs.mode == Mode::Dead) return out;
    if (decision == Decision::StandByHalt) {
        out.next_mode = Mode::Dead;
        out.request = Request::Halt;
        return out;
    }

    const double mode_seconds = obs.mode_ticks * obs.dt_s;
    switch (obs.mode) {
        case Mode::Task:
            if (wants_to_seek(s, p, obs, decision, rng)) return seek_or_approach(s, obs, rng, out);
            out.motion = RandomWalk(p.walk_forward_probability).next(obs.pose, obs.contact, rng);
            out.activity = Activity::Moving;
            return out;

        case Mode::Seeking: return seek_or_approach(s, obs, rng, out);

        case Mode::Approaching:
            if (!obs.target || mode_seconds > p.approach_timeout_s) {
                out.nav = {};
                return seek_or_approach(s, obs, rng, out);
            }
            out.station = obs.target->station;
            out.slot = obs.target->slot;
            out.activity = Activity::Moving;
            if (obs.target->in_contact) {
                const double turn = angle_diff(obs.target->dock_heading, obs.pose.heading);
                if (std::abs(turn) > 1e-9) {
                    out.motion = MotionCommand::rotate(turn);
                } else {
                    out.motion = MotionCommand::stop();
                    out.request = Request::Dock;
                    out.activity = Activity::Idle;
                }
                return out;
            }
            out.motion = approach(*obs.target, obs, out.nav, rng);
            return out;

        case Mode::Queued:
            if (!obs.queue) return seek_or_approach(s, obs, rng, out);
            if (obs.queue->position == 0 && obs.free_signal) {
                out.request = Request::LeaveQueue;
                out.next_mode = Mode::Approaching;
                out.station = obs.free_signal->station;
                out.slot = obs.free_signal->slot;
                out.motion = approach(*obs.free_signal, obs, out.nav, rng);
                out.activity = Activity::Moving;
                return out;
            }
            if (distance(obs.pose.pos, obs.queue->spot) > kArrived) {
                out.motion = steer_to(obs.pose, obs.queue->spot, obs.contact, out.nav, rng);
                out.activity = Activity::Moving;
            } else {
                out.motion = MotionCommand::stop();
                out.activity = Activity::Idle;
            }
            return out;

        case Mode::Docking: out.activity = Activity::Idle; return out;

        case Mode::Charging:
            if (decision == Decision::LeaveDock) {
                out.request = Request::Undock;
                out.next_mode = Mode::Leaving;
            }
            out.activity = Activity::Idle;
            return out;

        case Mode::Leaving:
            if (!obs.exit_waypoint || mode_seconds > p.leave_timeout_s) {
                out.next_mode = Mode::Task;
                out.nav = {};
                out.motion = RandomWalk(p.walk_forward_probability).next(obs.pose, obs.contact, rng);
                out.activity = Activity::Moving;
                return out;
            }
            out.motion = steer_to(obs.pose, *obs.exit_waypoint, obs.contact, out.nav, rng);
            out.activity = Activity::Moving;
            return out;

        case Mode::Aggregating:
        case Mode::Dead: return out;
    }
    return out;
}

}  // namespace forage
