#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "forage/arena.hpp"
#include "forage/errors.hpp"

using namespace forage;

namespace {

Arena open_arena() { return Arena{}; }

Arena arena_with_barrier_at_y(double y) {
    Arena a;
    a.barriers.push_back({{{0.0, y}, {110.0, y}}, 1, true});
    return a;
}

}  // namespace

TEST(Motion, ForwardInOpenSpace) {
    const Arena arena = open_arena();
    const RobotBody body;
    const Pose start{{50.0, 50.0}, 0.0};
    const auto r = step_motion(start, MotionCommand::forward(), 1.0, arena, body, {});
    EXPECT_NEAR(r.pose.pos.x, 80.0, 1e-9);
    EXPECT_NEAR(r.pose.pos.y, 50.0, 1e-9);
    EXPECT_FALSE(r.contact);
    EXPECT_NEAR(r.travelled, 30.0, 1e-9);
}

TEST(Motion, ClampsAtBarrier) {
    const Arena arena = arena_with_barrier_at_y(60.0);
    const RobotBody body;
    // Body edge 5 cm from the barrier.
    const Pose start{{50.0, 60.0 - 5.0 - body.radius()}, std::numbers::pi / 2};
    const auto r = step_motion(start, MotionCommand::forward(), 1.0, arena, body, {});
    EXPECT_TRUE(r.contact);
    EXPECT_NEAR(r.pose.pos.y, 60.0 - body.radius(), 1e-6);
    EXPECT_LE(r.pose.pos.y, 60.0 - body.radius() + 1e-9);
}

TEST(Motion, ClampsAtWallAndRobot) {
    const Arena arena = open_arena();
    const RobotBody body;
    auto r = step_motion({{105.0, 70.0}, 0.0}, MotionCommand::forward(), 1.0, arena, body, {});
    EXPECT_TRUE(r.contact);
    EXPECT_NEAR(r.pose.pos.x, 110.0 - body.radius(), 1e-6);

    const std::vector<Disc> others{{{60.0, 70.0}, 1.5, 7}};
    r = step_motion({{50.0, 70.0}, 0.0}, MotionCommand::forward(), 1.0, arena, body, others);
    EXPECT_TRUE(r.contact);
    EXPECT_NEAR(r.pose.pos.x, 57.0, 1e-6);
}

TEST(Motion, ZeroStepAndRotation) {
    const Arena arena = open_arena();
    const RobotBody body;
    const Pose start{{20.0, 20.0}, 1.0};
    auto r = step_motion(start, MotionCommand::forward(), 0.0, arena, body, {});
    EXPECT_EQ(r.pose.pos, start.pos);
    EXPECT_EQ(r.pose.heading, start.heading);

    // Rotation is legal even when wedged against a wall.
    r = step_motion({{1.5, 1.5}, 0.0}, MotionCommand::rotate(-1.0), 0.5, arena, body, {});
    EXPECT_EQ(r.pose.pos, (Vec2{1.5, 1.5}));
    EXPECT_NEAR(r.pose.heading, kTwoPi - 1.0, 1e-12);
    EXPECT_THROW(step_motion(start, MotionCommand::stop(), -1.0, arena, body, {}), ContractViolation);
}

TEST(Motion, NeverPenetratesUnderRandomCommands) {
    Arena arena = arena_with_barrier_at_y(70.0);
    const RobotBody body;
    std::vector<Disc> obstacles;
    for (int i = 0; i < 12; ++i) obstacles.push_back({{8.0 + 9.0 * i, 30.0 + 5.0 * (i % 3)}, 1.5, i});
    Rng rng(42);
    Pose pose{{55.0, 50.0}, 0.3};
    bool contact = false;
    const RandomWalk walk(0.8);
    for (int i = 0; i < 5000; ++i) {
        const auto cmd = walk.next(pose, contact, rng);
        const auto r = step_motion(pose, cmd, 0.5, arena, body, obstacles);
        ASSERT_FALSE(collides(r.pose.pos, body.radius() - 1e-6, arena, obstacles)) << i;
        ASSERT_FALSE(arena.barrier_between(pose.pos, r.pose.pos));
        pose = r.pose;
        contact = r.contact;
    }
}

TEST(Signal, Examples) {
    const Arena arena = open_arena();
    EXPECT_TRUE(signal_visible({10.0, 10.0}, {18.0, 10.0}, arena, {}));
    EXPECT_FALSE(signal_visible({10.0, 10.0}, {30.0, 10.0}, arena, {}));
    const std::vector<Disc> blocker{{{14.0, 10.0}, 1.5, 3}};
    EXPECT_FALSE(signal_visible({10.0, 10.0}, {18.0, 10.0}, arena, blocker));
    // The endpoint owners never occlude themselves.
    EXPECT_TRUE(signal_visible({10.0, 10.0}, {18.0, 10.0}, arena, blocker, -1, 3));
}

TEST(Signal, RangeCutoffAndBarrier) {
    const Arena arena = open_arena();
    EXPECT_TRUE(signal_visible({0.0, 0.0}, {12.5, 0.0}, arena, {}));
    EXPECT_FALSE(signal_visible({0.0, 0.0}, {12.51, 0.0}, arena, {}));
    const Arena walled = arena_with_barrier_at_y(50.0);
    EXPECT_FALSE(signal_visible({20.0, 46.0}, {20.0, 54.0}, walled, {}));
    EXPECT_TRUE(signal_visible({20.0, 42.0}, {20.0, 49.0}, walled, {}));
}

TEST(Signal, SymmetricUnderRandomScenes) {
    Arena arena = arena_with_barrier_at_y(70.0);
    Rng rng(9);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Disc> discs;
        for (int i = 0; i < 6; ++i)
            discs.push_back({{rng.uniform(0.0, 40.0), rng.uniform(50.0, 90.0)}, 1.5, i});
        const Vec2 a{rng.uniform(0.0, 40.0), rng.uniform(50.0, 90.0)};
        const Vec2 b{rng.uniform(0.0, 40.0), rng.uniform(50.0, 90.0)};
        EXPECT_EQ(signal_visible(a, b, arena, discs), signal_visible(b, a, arena, discs));
    }
}

TEST(RandomWalk, DeterministicPerStream) {
    const RandomWalk walk;
    Rng a = Rng::stream(17, 4), b = Rng::stream(17, 4);
    const Pose p{{10.0, 10.0}, 0.0};
    for (int i = 0; i < 1000; ++i) {
        const auto ca = walk.next(p, i % 7 == 0, a);
        const auto cb = walk.next(p, i % 7 == 0, b);
        EXPECT_EQ(ca.kind, cb.kind);
        EXPECT_EQ(ca.angle, cb.angle);
    }
}

TEST(RandomWalk, ContactForcesRotate) {
    const RandomWalk walk(1.0);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(walk.next({}, true, rng).kind, CommandKind::Rotate);
        EXPECT_EQ(walk.next({}, false, rng).kind, CommandKind::Forward);
    }
}

TEST(RandomWalk, CoversMostOfAnEmptyArena) {
    const Arena arena = open_arena();
    const RobotBody body;
    const RandomWalk walk;
    Rng rng(2024);
    Pose pose{{55.0, 70.0}, 0.0};
    bool contact = false;
    std::set<std::pair<int, int>> visited;
    for (int i = 0; i < 10000; ++i) {
        const auto r = step_motion(pose, walk.next(pose, contact, rng), 0.5, arena, body, {});
        const int n = std::max(1, static_cast<int>(std::ceil(r.travelled)));
        for (int k = 0; k <= n; ++k) {
            const Vec2 p = pose.pos + (r.pose.pos - pose.pos) * (static_cast<double>(k) / n);
            visited.insert({static_cast<int>(p.x / 10.0), static_cast<int>(p.y / 10.0)});
        }
        pose = r.pose;
        contact = r.contact;
    }
    const double cells = 11.0 * 14.0;
    EXPECT_GT(static_cast<double>(visited.size()) / cells, 0.8);
}

TEST(Geometry, SegmentsIntersect) {
    EXPECT_TRUE(segments_intersect({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}));
    EXPECT_FALSE(segments_intersect({{0, 0}, {1, 1}}, {{2, 2}, {3, 0}}));
    EXPECT_TRUE(segments_intersect({{0, 0}, {2, 0}}, {{2, 0}, {3, 5}}));
    EXPECT_TRUE(segments_intersect({{0, 0}, {4, 0}}, {{1, 0}, {2, 0}}));
}

TEST(Geometry, AngleHelpers) {
    EXPECT_NEAR(wrap_angle(-0.5), kTwoPi - 0.5, 1e-12);
    EXPECT_NEAR(wrap_angle(7.0), 7.0 - kTwoPi, 1e-12);
    EXPECT_NEAR(angle_diff(0.1, kTwoPi - 0.1), 0.2, 1e-12);
    EXPECT_NEAR(heading_of({0.0, -1.0}), 1.5 * std::numbers::pi, 1e-12);
}
