#pragma once

#include <optional>
#include <vector>

#include "forage/arena.hpp"

namespace forage {

struct Slot {
    int id = 0;  // the numeric code carried by the free-slot signal
    Vec2 anchor;
    double width = 4.0;
    std::optional<int> occupant;

    bool free() const { return !occupant.has_value(); }
};

struct DockingStation {
    int id = 0;
    Segment wall;
    Vec2 inward_normal;  // unit vector pointing from the wall into the arena
    std::vector<Slot> slots;
    double supply_voltage = 5.0;

    Vec2 centre() const { return (wall.a + wall.b) * 0.5; }
    Vec2 tangent() const;
    Slot* find_slot(int slot_id);
    const Slot* find_slot(int slot_id) const;
    int occupied_count() const;
};

struct DockingParams {
    double dock_latency_s = 2.0;
    double undock_latency_s = 1.0;
    double alignment_tolerance_deg = 15.0;
    // Distance from the docking contact point still counted as touching.
    double contact_tolerance_cm = 0.5;
    // Slot width is body side plus this margin.
    double slot_margin_cm = 1.0;
};

/// Builds a station on the wall segment [a, b] with `slot_count` slots of
/// `slot_width` centred on the segment. Slot ids are first_slot_id, +1, ...
DockingStation make_station(int id, Vec2 a, Vec2 b, Vec2 inward_normal, int slot_count,
                            double slot_width, int first_slot_id);

struct Signal {
    int slot_id = 0;
    Vec2 anchor;
};

/// Free slots broadcast their code; occupied ones are silent.
std::optional<Signal> broadcast(const Slot& slot);

/// Point where a robot's centre sits when docked at `slot`.
Vec2 dock_point(const DockingStation& station, const Slot& slot, const RobotBody& body);

/// Heading that faces the wall.
double dock_heading(const DockingStation& station);

enum class DockResult { Docked, SlotTaken, NotAligned };

const char* to_string(DockResult r);

/// Touch-sensor docking. Requires the robot to be within contact distance of
/// the slot's docking point (contract). Occupied slots report SlotTaken before
/// alignment is considered.
DockResult attempt_dock(int robot_id, const Pose& pose, const RobotBody& body, Slot& slot,
                        const DockingStation& station, const DockingParams& params);

/// True when the pose is close enough to `dock_point` to call attempt_dock.
bool in_contact(const Pose& pose, const RobotBody& body, const Slot& slot,
                const DockingStation& station, const DockingParams& params);

/// Frees the slot and returns the robot's pose one body length off the wall,
/// facing into the arena.
Pose undock(int robot_id, Slot& slot, const DockingStation& station, const RobotBody& body);

/// The wheel-strain manoeuvre: charging starts once the latency elapses.
class DockingSession {
public:
    DockingSession(int slot_id, double latency_s) : slot_id_(slot_id), remaining_s_(latency_s) {}

    /// Advances the latency timer; returns true exactly once, on the step
    /// where charging begins.
    bool advance(double dt_s);
    bool charging() const { return started_; }
    int slot_id() const { return slot_id_; }

private:
    int slot_id_;
    double remaining_s_;
    bool started_ = false;
};

}  // namespace forage
