#include <gtest/gtest.h>

#include <numbers>
#include <vector>

#include "forage/errors.hpp"
#include "forage/strategies.hpp"

using namespace forage;

namespace {

Observation task_obs(double volts) {
    Observation obs;
    obs.pose = {{50.0, 50.0}, 0.0};
    obs.volts = volts;
    obs.energy = classify(volts, false);
    obs.mode = Mode::Task;
    return obs;
}

SlotView slot_at(Vec2 dock) {
    SlotView v;
    v.station = 0;
    v.slot = 1;
    v.dock_point = dock;
    v.staging_point = dock + Vec2{0.0, 3.0};
    v.inward_normal = {0.0, 1.0};
    v.dock_heading = 1.5 * std::numbers::pi;
    return v;
}

const std::vector<Strategy> kAll{solo_strategy(), hand_coded_strategy(), bio_inspired_strategy()};

}  // namespace

TEST(Efficiency, BalancedLedgerIsExactlyOneHalf) {
    EXPECT_EQ(efficiency({15.0, 15.0, 0.0}).phi, 0.5);
    for (int i = 1; i < 1000; ++i) {
        const double t = i * 0.37;
        EXPECT_EQ(efficiency({t, t, 0.0}).phi, 0.5);
    }
}

TEST(Efficiency, Examples) {
    EXPECT_EQ(efficiency({0.0, 10.0, 0.0}).phi, 0.0);
    EXPECT_NEAR(efficiency({18.0, 82.0, 0.0}).phi, 0.18, 1e-15);
    // Dead time counts into the denominator.
    EXPECT_NEAR(efficiency({18.0, 32.0, 50.0}).phi, 0.18, 1e-15);
    const auto empty = efficiency({});
    EXPECT_EQ(empty.phi, 0.0);
    EXPECT_FALSE(empty.defined);
}

TEST(Efficiency, BoundedAndBelowHalfWhenChargingDominates) {
    Rng rng(8);
    for (int i = 0; i < 2000; ++i) {
        const double task = rng.uniform(0.0, 300.0);
        const double rech = rng.uniform(0.0, 300.0);
        const double dead = rng.uniform(0.0, 300.0);
        const double phi = efficiency({task, rech, dead}).phi;
        EXPECT_GE(phi, 0.0);
        EXPECT_LE(phi, 1.0);
        if (rech + dead >= task) EXPECT_LE(phi, 0.5);
    }
}

TEST(Efficiency, SwarmIsMeanOfRobots) {
    const std::vector<LedgerEntry> entries{{10.0, 10.0, 0.0}, {0.0, 0.0, 0.0}, {30.0, 10.0, 0.0}};
    EXPECT_NEAR(swarm_efficiency(entries), (0.5 + 0.0 + 0.75) / 3.0, 1e-15);
}

TEST(Strategies, Names) {
    for (const auto& n : strategy_names()) EXPECT_EQ(strategy_by_name(n).name, n);
    EXPECT_THROW(strategy_by_name("greedy"), ConfigError);
    EXPECT_TRUE(bio_inspired_strategy().collective_instinct);
    EXPECT_TRUE(bio_inspired_strategy().two_line_queue);
    EXPECT_FALSE(hand_coded_strategy().collective_instinct);
}

TEST(Policy, StandByHaltsEveryStrategy) {
    for (const auto& s : kAll) {
        Rng rng(1);
        auto obs = task_obs(3.0);
        const auto step = policy_step(s, {}, obs, Decision::StandByHalt, rng);
        EXPECT_EQ(step.next_mode, Mode::Dead);
        EXPECT_EQ(step.request, Request::Halt);
        EXPECT_EQ(step.motion.kind, CommandKind::Stop);
    }
}

TEST(Policy, DeadRobotsNeverMove) {
    for (const auto& s : kAll) {
        Rng rng(2);
        auto obs = task_obs(3.0);
        obs.mode = Mode::Dead;
        for (auto d : {Decision::ContinueTask, Decision::SeekDock, Decision::StandByHalt}) {
            const auto step = policy_step(s, {}, obs, d, rng);
            EXPECT_EQ(step.motion.kind, CommandKind::Stop);
            EXPECT_EQ(step.next_mode, Mode::Dead);
        }
    }
}

TEST(Policy, CriticalAlwaysSeeks) {
    for (const auto& s : kAll) {
        Rng rng(3);
        for (int i = 0; i < 200; ++i) {
            auto obs = task_obs(3.1);
            const auto step = policy_step(s, {}, obs, Decision::SeekDock, rng);
            EXPECT_EQ(step.next_mode, Mode::Seeking) << s.name;
        }
    }
}

TEST(Policy, HandCodedSeeksBelowFixedVoltage) {
    const auto s = hand_coded_strategy();
    Rng rng(4);
    EXPECT_FALSE(wants_to_seek(s, {}, task_obs(3.66), Decision::ContinueTask, rng));
    EXPECT_TRUE(wants_to_seek(s, {}, task_obs(3.64), Decision::ContinueTask, rng));
}

TEST(Policy, SoloFollowsDecision) {
    const auto s = solo_strategy();
    Rng rng(5);
    EXPECT_TRUE(wants_to_seek(s, {}, task_obs(3.5), Decision::SeekDock, rng));
    EXPECT_FALSE(wants_to_seek(s, {}, task_obs(3.5), Decision::ContinueTask, rng));
}

TEST(Policy, ResponseThresholdProbabilityIsSquaredPriority) {
    const auto s = bio_inspired_strategy();
    Rng rng(6);
    const auto obs = task_obs(3.45);  // level 0.5, p = 0.25
    int hits = 0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) hits += wants_to_seek(s, {}, obs, Decision::SeekDock, rng) ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(hits) / n, 0.25, 0.01);
    EXPECT_FALSE(wants_to_seek(s, {}, task_obs(3.9), Decision::ContinueTask, rng));
}

TEST(Policy, SignalLeadsToApproach) {
    Rng rng(7);
    auto obs = task_obs(3.1);
    obs.free_signal = slot_at({50.0, 40.0});
    const auto step = policy_step(solo_strategy(), {}, obs, Decision::SeekDock, rng);
    EXPECT_EQ(step.next_mode, Mode::Approaching);
    EXPECT_EQ(step.slot, 1);
    EXPECT_EQ(step.motion.kind, CommandKind::Forward);
}

TEST(Policy, ContactAlignedRequestsDock) {
    Rng rng(8);
    auto obs = task_obs(3.5);
    obs.mode = Mode::Approaching;
    obs.target = slot_at({50.0, 50.0});
    obs.target->in_contact = true;
    obs.pose.heading = obs.target->dock_heading;
    const auto step = policy_step(solo_strategy(), {}, obs, Decision::SeekDock, rng);
    EXPECT_EQ(step.request, Request::Dock);
}

TEST(Policy, BioQueuesWhenNoFreeSlot) {
    Rng rng(9);
    auto obs = task_obs(3.1);
    obs.mode = Mode::Seeking;
    obs.nearby_station = 0;
    const auto bio = policy_step(bio_inspired_strategy(), {}, obs, Decision::SeekDock, rng);
    EXPECT_EQ(bio.request, Request::JoinQueue);
    EXPECT_EQ(bio.next_mode, Mode::Queued);
    const auto hand = policy_step(hand_coded_strategy(), {}, obs, Decision::SeekDock, rng);
    EXPECT_EQ(hand.next_mode, Mode::Seeking);
}

TEST(Policy, ChargingLeavesOnlyOnLeaveDecision) {
    Rng rng(10);
    auto obs = task_obs(4.05);
    obs.mode = Mode::Charging;
    EXPECT_EQ(policy_step(bio_inspired_strategy(), {}, obs, Decision::LeaveDock, rng).request,
              Request::Undock);
    EXPECT_EQ(policy_step(solo_strategy(), {}, obs, Decision::KeepCharging, rng).next_mode,
              Mode::Charging);
}

TEST(Policy, DeterministicGivenStream) {
    for (const auto& s : kAll) {
        Rng a(99), b(99);
        for (int i = 0; i < 500; ++i) {
            auto obs = task_obs(3.2 + (i % 50) * 0.01);
            const auto d = decide(obs.energy, 0.1, s.collective_instinct);
            const auto sa = policy_step(s, {}, obs, d, a);
            const auto sb = policy_step(s, {}, obs, d, b);
            EXPECT_EQ(sa.next_mode, sb.next_mode);
            EXPECT_EQ(sa.motion.kind, sb.motion.kind);
            EXPECT_EQ(sa.motion.angle, sb.motion.angle);
        }
    }
}
