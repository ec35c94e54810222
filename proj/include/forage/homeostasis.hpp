#pragma once

#include <optional>

namespace forage {

struct Thresholds {
    double standby_v = 3.05;
    double critical_v = 3.20;
    double normal_v = 3.70;
    double satisfied_v = 4.00;
    double full_v = 4.20;
    // Ideal seek point. Expressed through the background task priority:
    // (normal_v - ideal_seek_v) / (normal_v - critical_v) = 0.1.
    double ideal_seek_v = 3.65;
    // Upward transitions need to clear a boundary by this much. 0 = memoryless.
    double hysteresis_v = 0.0;
};

enum class EnergyKind { StandBy, Critical, Discharged, Normal, Satisfied, Full };

const char* to_string(EnergyKind k);

struct EnergyState {
    EnergyKind kind = EnergyKind::Normal;
    // Graded level for Discharged, in (0,1]; zero otherwise.
    double level = 0.0;

    bool operator==(const EnergyState&) const = default;
};

/// Total classification of (voltage, charging) into the energy regimes.
/// Half-open intervals: [.., 3.05) StandBy, [3.05, 3.2) Critical,
/// [3.2, 3.7) Discharged, otherwise Normal unless charging past 4.0/4.2.
EnergyState classify(double volts, bool charging, const Thresholds& t = {});

/// As classify, but with `previous` given a non-zero hysteresis keeps the
/// robot in a lower regime until the voltage clears the boundary by the band.
EnergyState classify(double volts, bool charging, const Thresholds& t,
                     std::optional<EnergyKind> previous);

/// 0 at or above 3.7 V, 1 at or below 3.2 V, linear in between.
double discharge_priority(double volts, const Thresholds& t = {});

/// Task priority that makes a robot start looking for energy at the ideal point.
double ideal_task_priority(const Thresholds& t = {});

enum class Decision { ContinueTask, SeekDock, StandByHalt, LeaveDock, KeepCharging };

const char* to_string(Decision d);

Decision decide(const EnergyState& state, double task_priority, bool collective_instinct);

}  // namespace forage
