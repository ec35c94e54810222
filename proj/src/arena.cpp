#include "forage/arena.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "forage/errors.hpp"

namespace forage {

Rng Rng::stream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x5eedu};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ContractViolation("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment& s1, const Segment& s2) {
    const int o1 = orientation(s1.a, s1.b, s2.a);
    const int o2 = orientation(s1.a, s1.b, s2.b);
    const int o3 = orientation(s2.a, s2.b, s1.a);
    const int o4 = orientation(s2.a, s2.b, s1.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(s1.a, s1.b, s2.a)) return true;
    if (o2 == 0 && on_segment(s1.a, s1.b, s2.b)) return true;
    if (o3 == 0 && on_segment(s2.a, s2.b, s1.a)) return true;
    if (o4 == 0 && on_segment(s2.a, s2.b, s1.b)) return true;
    return false;
}

bool Arena::barrier_between(Vec2 a, Vec2 b) const {
    for (const auto& bar : barriers)
        if (segments_intersect({a, b}, bar.segment)) return true;
    return false;
}

bool collides(Vec2 p, double radius, const Arena& arena, std::span<const Disc> others) {
    constexpr double eps = 1e-9;
    if (!arena.inside(p, radius - eps)) return true;
    for (const auto& bar : arena.barriers)
        if (distance_to_segment(bar.segment, p) < radius - eps) return true;
    for (const auto& d : others)
        if (distance(p, d.center) < radius + d.radius - eps) return true;
    return false;
}

MotionResult step_motion(const Pose& pose, const MotionCommand& command, double dt_s,
                         const Arena& arena, const RobotBody& body, std::span<const Disc> others) {
    if (dt_s < 0.0) throw ContractViolation("negative time step");
    MotionResult out{pose, false, 0.0};
    if (dt_s == 0.0 || command.kind == CommandKind::Stop) return out;

    out.pose.heading = wrap_angle(pose.heading + command.angle);
    if (command.kind == CommandKind::Rotate) return out;

    const double distance_goal = std::min(body.speed * dt_s, std::max(0.0, command.max_distance));
    if (distance_goal <= 0.0) return out;
    const Vec2 dir = unit_from_angle(out.pose.heading);
    const double r = body.radius();
    const int substeps = std::max(1, static_cast<int>(std::ceil(distance_goal / arena.substep_cm)));
    const double step = distance_goal / substeps;

    double done = 0.0;
    for (int i = 1; i <= substeps; ++i) {
        const double next = step * i;
        if (collides(pose.pos + dir * next, r, arena, others)) {
            double lo = done, hi = next;
            for (int k = 0; k < 40; ++k) {
                const double mid = 0.5 * (lo + hi);
                if (collides(pose.pos + dir * mid, r, arena, others)) hi = mid;
                else lo = mid;
            }
            done = lo;
            out.contact = true;
            break;
        }
        done = next;
    }
    out.pose.pos = pose.pos + dir * done;
    out.travelled = done;
    return out;
}

bool signal_visible(Vec2 from, Vec2 to, double range, const Arena& arena,
                    std::span<const Disc> occluders, int from_owner, int to_owner) {
    if (distance(from, to) > range) return false;
    if (arena.barrier_between(from, to)) return false;
    const Segment path{from, to};
    for (const auto& d : occluders) {
        if (d.owner >= 0 && (d.owner == from_owner || d.owner == to_owner)) continue;
        if (distance_to_segment(path, d.center) < d.radius) return false;
    }
    return true;
}

bool signal_visible(Vec2 from, Vec2 to, const Arena& arena, std::span<const Disc> occluders,
                    int from_owner, int to_owner) {
    return signal_visible(from, to, arena.signal_range, arena, occluders, from_owner, to_owner);
}

MotionCommand RandomWalk::next(const Pose&, bool contact, Rng& rng) const {
    const double draw = rng.uniform();
    if (contact || draw >= p_forward_) {
        // Uniform angle in (-π, π].
        return MotionCommand::rotate(std::numbers::pi - rng.uniform() * kTwoPi);
    }
    return MotionCommand::forward();
}

}  // namespace forage
