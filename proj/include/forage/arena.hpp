#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "forage/geometry.hpp"
#include "forage/rng.hpp"

namespace forage {

struct Pose {
    Vec2 pos;
    double heading = 0.0;  // radians, [0, 2π)
};

struct Barrier {
    Segment segment;
    // Module heights an organism has to span to overstep it.
    int height_class = 1;
    bool passable_by_organism = true;
};

struct RobotBody {
    double side = 3.0;    // cm; treated as a disc of this diameter
    double speed = 30.0;  // cm/s when moving

    double radius() const { return side / 2.0; }
};

struct Arena {
    double width = 110.0;
    double height = 140.0;
    std::vector<Barrier> barriers;
    double signal_range = 12.5;
    double substep_cm = 1.0;

    bool inside(Vec2 p, double margin) const {
        return p.x >= margin && p.x <= width - margin && p.y >= margin && p.y <= height - margin;
    }
    /// True when the straight line between the points crosses a barrier.
    bool barrier_between(Vec2 a, Vec2 b) const;
};

/// A circular body other robots must not overlap and that blocks signals.
struct Disc {
    Vec2 center;
    double radius = 1.5;
    int owner = -1;
};

enum class CommandKind { Forward, Rotate, Stop };

struct MotionCommand {
    CommandKind kind = CommandKind::Stop;
    // Rotate: relative turn. Forward: turn applied in place before moving.
    double angle = 0.0;
    // Forward only: cap on the travelled distance this step.
    double max_distance = 1e9;

    static MotionCommand stop() { return {}; }
    static MotionCommand rotate(double a) { return {CommandKind::Rotate, a, 0.0}; }
    static MotionCommand forward(double turn = 0.0, double cap = 1e9) {
        return {CommandKind::Forward, turn, cap};
    }
};

struct MotionResult {
    Pose pose;
    bool contact = false;
    double travelled = 0.0;
};

/// True when a disc of `radius` centred at p overlaps a wall, barrier or body.
bool collides(Vec2 p, double radius, const Arena& arena, std::span<const Disc> others);

/// Kinematic update with non-penetrating contact. Motion is advanced in
/// substeps of arena.substep_cm; the last free substep is refined by bisection
/// so the body ends flush with whatever it hit.
MotionResult step_motion(const Pose& pose, const MotionCommand& command, double dt_s,
                         const Arena& arena, const RobotBody& body, std::span<const Disc> others);

/// Euclidean range check plus occlusion by barriers and by every disc in
/// `occluders` whose owner is not one of the endpoint owners.
bool signal_visible(Vec2 from, Vec2 to, const Arena& arena, std::span<const Disc> occluders,
                    int from_owner = -1, int to_owner = -1);
bool signal_visible(Vec2 from, Vec2 to, double range, const Arena& arena,
                    std::span<const Disc> occluders, int from_owner = -1, int to_owner = -1);

/// Default exploration: forward with probability p_forward, otherwise an
/// in-place turn by a uniform angle. After a contact it always turns.
class RandomWalk {
public:
    explicit RandomWalk(double p_forward = 0.9) : p_forward_(p_forward) {}

    MotionCommand next(const Pose& pose, bool contact, Rng& rng) const;
    double p_forward() const { return p_forward_; }

private:
    double p_forward_;
};

}  // namespace forage
