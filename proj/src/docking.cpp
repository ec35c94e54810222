#include "forage/docking.hpp"

#include <cmath>
#include <numbers>

#include "forage/errors.hpp"

namespace forage {

Vec2 DockingStation::tangent() const {
    const Vec2 d = wall.b - wall.a;
    return d * (1.0 / norm(d));
}

Slot* DockingStation::find_slot(int slot_id) {
    for (auto& s : slots)
        if (s.id == slot_id) return &s;
    return nullptr;
}

const Slot* DockingStation::find_slot(int slot_id) const {
    for (const auto& s : slots)
        if (s.id == slot_id) return &s;
    return nullptr;
}

int DockingStation::occupied_count() const {
    int n = 0;
    for (const auto& s : slots)
        if (!s.free()) ++n;
    return n;
}

DockingStation make_station(int id, Vec2 a, Vec2 b, Vec2 inward_normal, int slot_count,
                            double slot_width, int first_slot_id) {
    if (slot_count < 0) throw ContractViolation("negative slot count");
    const double length = distance(a, b);
    if (slot_count * slot_width > length + 1e-9)
        throw ContractViolation("slots do not fit on the station wall");
    DockingStation st;
    st.id = id;
    st.wall = {a, b};
    const double n = norm(inward_normal);
    st.inward_normal = inward_normal * (1.0 / n);
    const Vec2 t = st.tangent();
    const double first_offset = 0.5 * length - 0.5 * slot_count * slot_width + 0.5 * slot_width;
    for (int i = 0; i < slot_count; ++i) {
        Slot s;
        s.id = first_slot_id + i;
        s.anchor = a + t * (first_offset + i * slot_width);
        s.width = slot_width;
        st.slots.push_back(s);
    }
    return st;
}

std::optional<Signal> broadcast(const Slot& slot) {
    if (!slot.free()) return std::nullopt;
    return Signal{slot.id, slot.anchor};
}

Vec2 dock_point(const DockingStation& station, const Slot& slot, const RobotBody& body) {
    return slot.anchor + station.inward_normal * body.radius();
}

double dock_heading(const DockingStation& station) {
    return heading_of(station.inward_normal * -1.0);
}

const char* to_string(DockResult r) {
    switch (r) {
        case DockResult::Docked: return "docked";
        case DockResult::SlotTaken: return "slot_taken";
        case DockResult::NotAligned: return "not_aligned";
    }
    return "?";
}

bool in_contact(const Pose& pose, const RobotBody& body, const Slot& slot,
                const DockingStation& station, const DockingParams& params) {
    return distance(pose.pos, dock_point(station, slot, body)) <= params.contact_tolerance_cm;
}

DockResult attempt_dock(int robot_id, const Pose& pose, const RobotBody& body, Slot& slot,
                        const DockingStation& station, const DockingParams& params) {
    if (!in_contact(pose, body, slot, station, params))
        throw ContractViolation("attempt_dock outside contact distance");
    if (!slot.free()) return DockResult::SlotTaken;
    const double tol = params.alignment_tolerance_deg * std::numbers::pi / 180.0;
    if (std::abs(angle_diff(pose.heading, dock_heading(station))) > tol)
        return DockResult::NotAligned;
    slot.occupant = robot_id;
    return DockResult::Docked;
}

Pose undock(int robot_id, Slot& slot, const DockingStation& station, const RobotBody& body) {
    if (slot.occupant != robot_id) throw ContractViolation("undock by a robot not in the slot");
    slot.occupant.reset();
    Pose p;
    p.pos = slot.anchor + station.inward_normal * (body.radius() + body.side);
    p.heading = heading_of(station.inward_normal);
    return p;
}

bool DockingSession::advance(double dt_s) {
    if (started_) return false;
    remaining_s_ -= dt_s;
    if (remaining_s_ <= 1e-12) {
        started_ = true;
        return true;
    }
    return false;
}

}  // namespace forage
