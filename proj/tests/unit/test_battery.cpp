#include <gtest/gtest.h>

#include <cmath>

#include "forage/battery.hpp"
#include "forage/errors.hpp"
#include "forage/rng.hpp"

using namespace forage;

namespace {

// Independent piecewise-linear lookup over the default anchors.
double oracle_voltage(double c) {
    const double xs[] = {0.00, 0.05, 0.20, 0.25, 0.85, 0.95, 1.00};
    const double ys[] = {3.00, 3.20, 3.65, 3.70, 4.00, 4.10, 4.20};
    for (int i = 0; i < 6; ++i)
        if (c <= xs[i + 1]) return ys[i] + (ys[i + 1] - ys[i]) * (c - xs[i]) / (xs[i + 1] - xs[i]);
    return 4.2;
}

double minutes_to_empty_moving(double dt_min) {
    BatteryState b;
    double t = 0.0;
    while (b.charge > 0.0) {
        b = discharge_step(b, Activity::Moving, dt_min);
        t += dt_min;
    }
    return t;
}

}  // namespace

TEST(Ocv, DefaultAnchorsAndEnds) {
    const OcvCurve curve;
    EXPECT_DOUBLE_EQ(voltage_of(1.0, curve), 4.2);
    EXPECT_DOUBLE_EQ(voltage_of(0.0, curve), 3.0);
    EXPECT_NEAR(voltage_of(0.85, curve), 4.0, 1e-12);
}

TEST(Ocv, MatchesIndependentInterpolation) {
    const OcvCurve curve;
    for (int i = 0; i <= 1000; ++i) {
        const double c = i / 1000.0;
        EXPECT_NEAR(voltage_of(c, curve), oracle_voltage(c), 1e-12) << c;
    }
}

TEST(Ocv, MonotoneAndInverse) {
    const OcvCurve curve;
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double c = i / 2000.0;
        const double v = voltage_of(c, curve);
        EXPECT_GE(v, prev);
        prev = v;
        EXPECT_NEAR(curve.charge_at(v), c, 1e-9);
    }
}

TEST(Ocv, RejectsOutOfRangeCharge) {
    const OcvCurve curve;
    EXPECT_THROW(voltage_of(-0.01, curve), ContractViolation);
    EXPECT_THROW(voltage_of(1.01, curve), ContractViolation);
}

TEST(Ocv, RejectsBadAnchors) {
    EXPECT_THROW(OcvCurve({{0.0, 3.0}, {0.5, 3.0}, {1.0, 4.2}}), ContractViolation);
    EXPECT_THROW(OcvCurve({{0.0, 3.0}}), ContractViolation);
}

TEST(Adc, FullChargeReadsOneNinetySix) {
    EXPECT_EQ(adc_of_voltage(4.2), 196);
    EXPECT_EQ(adc_of_voltage(0.0), 0);
    EXPECT_EQ(adc_of_voltage(3.0), 140);
}

TEST(Adc, MatchesArithmeticOracleAndClamps) {
    int prev = 0;
    for (int i = 0; i <= 500; ++i) {
        const double v = i / 100.0;
        const long expected = std::lround(v * 0.55 / 3.0 * 255.0);
        const int adc = adc_of_voltage(v);
        EXPECT_EQ(adc, std::min<long>(expected, 255)) << v;
        EXPECT_GE(adc, prev);
        prev = adc;
    }
    EXPECT_EQ(adc_of_voltage(5.0), 234);
}

TEST(Discharge, FullMovingBatteryLasts75Minutes) {
    BatteryState b;
    b = discharge_step(b, Activity::Moving, 75.0);
    EXPECT_DOUBLE_EQ(b.charge, 0.0);
    EXPECT_NEAR(minutes_to_empty_moving(0.5 / 60.0), 75.0, 2.0);
}

TEST(Discharge, HalfChargeEmptiesIn37AndAHalfMinutes) {
    BatteryState b;
    b.charge = 0.5;
    const auto just_before = discharge_step(b, Activity::Moving, 37.0);
    EXPECT_GT(just_before.charge, 0.0);
    EXPECT_DOUBLE_EQ(discharge_step(b, Activity::Moving, 37.5).charge, 0.0);
}

TEST(Discharge, ZeroStepIsIdentity) {
    BatteryState b;
    b.charge = 0.37;
    const auto after = discharge_step(b, Activity::Actuating, 0.0);
    EXPECT_EQ(after.charge, b.charge);
    EXPECT_EQ(after.age_minutes, b.age_minutes);
}

TEST(Discharge, ComposesExactly) {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        BatteryState b;
        b.charge = rng.uniform();
        const double t1 = rng.uniform(0.0, 40.0);
        const double t2 = rng.uniform(0.0, 40.0);
        const double ma = rng.uniform(1.0, 400.0);
        const auto once = discharge_step(b, ma, t1 + t2);
        const auto twice = discharge_step(discharge_step(b, ma, t1), ma, t2);
        EXPECT_NEAR(once.charge, twice.charge, 1e-12);
    }
}

TEST(Discharge, RejectsChargingBattery) {
    BatteryState b;
    b.charging = true;
    EXPECT_THROW(discharge_step(b, Activity::Idle, 1.0), ContractViolation);
}

TEST(Discharge, TracksDeepestDischarge) {
    BatteryState b;
    b = discharge_step(b, Activity::Moving, 30.0);
    EXPECT_NEAR(b.min_charge, 0.6, 1e-12);
}

TEST(Charge, EmptyToFullInNinetyMinutes) {
    BatteryState b;
    b.charge = 0.0;
    b.charging = true;
    EXPECT_NEAR(charge_step(b, 90.0).charge, 1.0, 0.02);

    double t = 0.0;
    const double dt = 0.5 / 60.0;
    while (b.charge < 1.0) {
        b = charge_step(b, dt);
        t += dt;
    }
    EXPECT_NEAR(t, 90.0, 5.0);
    EXPECT_NEAR(charge_minutes(0.0, 1.0), 90.0, 1e-9);
}

TEST(Charge, StopsAtFull) {
    BatteryState b;
    b.charging = true;
    EXPECT_EQ(charge_step(b, 1000.0).charge, 1.0);
    b.charge = 0.999;
    EXPECT_EQ(charge_step(b, 60.0).charge, 1.0);
}

TEST(Charge, RejectsNotCharging) {
    BatteryState b;
    EXPECT_THROW(charge_step(b, 1.0), ContractViolation);
}

TEST(Charge, FifteenMinuteDrainRestoredInFifteenMinutes) {
    BatteryState b;
    b.charge = 0.6;
    const double start = b.charge;
    b = discharge_step(b, Activity::Moving, 15.0);
    b.charging = true;
    double t = 0.0;
    const double dt = 0.5 / 60.0;
    while (b.charge < start - 1e-12) {
        b = charge_step(b, dt);
        t += dt;
    }
    EXPECT_NEAR(t, 15.0, 1.0);
}

TEST(Charge, RoundTripInConstantCurrentRegion) {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const double t = rng.uniform(0.0, 60.0);
        BatteryState b;
        b.charge = rng.uniform(t * 200.0 / 60.0 / 250.0, 0.85);
        const double start = b.charge;
        b = discharge_step(b, Activity::Moving, t);
        b.charging = true;
        b = charge_step(b, t);
        EXPECT_NEAR(b.charge, start, 0.02) << "t=" << t << " start=" << start;
    }
}

TEST(Charge, MonotoneAndSplitInvariant) {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        BatteryState b;
        b.charge = rng.uniform();
        b.charging = true;
        const double t1 = rng.uniform(0.0, 50.0);
        const double t2 = rng.uniform(0.0, 50.0);
        const auto a = charge_step(b, t1);
        EXPECT_GE(a.charge, b.charge);
        EXPECT_LE(a.charge, 1.0);
        EXPECT_NEAR(charge_step(a, t2).charge, charge_step(b, t1 + t2).charge, 1e-9);
    }
}

TEST(Charge, MinutesAgreeWithStepping) {
    // 0.85 -> 1.0 is the taper: 90 - 0.85 / (200 / 250 / 60) minutes.
    const double cc = 0.85 / (200.0 / 250.0 / 60.0);
    EXPECT_NEAR(charge_minutes(0.0, 0.85), cc, 1e-9);
    EXPECT_NEAR(charge_minutes(0.85, 1.0), 90.0 - cc, 1e-9);
    BatteryState b;
    b.charge = 0.3;
    b.charging = true;
    EXPECT_NEAR(charge_step(b, charge_minutes(0.3, 0.9)).charge, 0.9, 1e-9);
}
