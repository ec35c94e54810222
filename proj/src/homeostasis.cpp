#include "forage/homeostasis.hpp"

#include <algorithm>

#include "forage/errors.hpp"

namespace forage {

const char* to_string(EnergyKind k) {
    switch (k) {
        case EnergyKind::StandBy: return "standby";
        case EnergyKind::Critical: return "critical";
        case EnergyKind::Discharged: return "discharged";
        case EnergyKind::Normal: return "normal";
        case EnergyKind::Satisfied: return "satisfied";
        case EnergyKind::Full: return "full";
    }
    return "?";
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::ContinueTask: return "continue_task";
        case Decision::SeekDock: return "seek_dock";
        case Decision::StandByHalt: return "standby_halt";
        case Decision::LeaveDock: return "leave_dock";
        case Decision::KeepCharging: return "keep_charging";
    }
    return "?";
}

double discharge_priority(double volts, const Thresholds& t) {
    const double span = t.normal_v - t.critical_v;
    return std::clamp((t.normal_v - volts) / span, 0.0, 1.0);
}

double ideal_task_priority(const Thresholds& t) { return discharge_priority(t.ideal_seek_v, t); }

namespace {

int rank(EnergyKind k) {
    switch (k) {
        case EnergyKind::StandBy: return 0;
        case EnergyKind::Critical: return 1;
        case EnergyKind::Discharged: return 2;
        case EnergyKind::Normal: return 3;
        case EnergyKind::Satisfied: return 4;
        case EnergyKind::Full: return 5;
    }
    return 0;
}

EnergyState classify_with_offset(double v, bool charging, const Thresholds& t, double up_shift,
                                 int below_rank) {
    // Boundaries above `below_rank` are raised by the hysteresis band.
    auto edge = [&](double boundary, int rank_above) {
        return rank_above > below_rank ? boundary + up_shift : boundary;
    };
    if (v < edge(t.standby_v, 1)) return {EnergyKind::StandBy, 0.0};
    if (v < edge(t.critical_v, 2)) return {EnergyKind::Critical, 0.0};
    if (v < edge(t.normal_v, 3)) {
        const double level = (t.normal_v - v) / (t.normal_v - t.critical_v);
        return {EnergyKind::Discharged, std::clamp(level, 1e-12, 1.0)};
    }
    if (charging) {
        if (v >= edge(t.full_v, 5)) return {EnergyKind::Full, 0.0};
        if (v >= edge(t.satisfied_v, 4)) return {EnergyKind::Satisfied, 0.0};
    }
    return {EnergyKind::Normal, 0.0};
}

}  // namespace

EnergyState classify(double volts, bool charging, const Thresholds& t) {
    if (!(volts >= 0.0 && volts <= 5.0)) throw ContractViolation("voltage out of [0,5]");
    return classify_with_offset(volts, charging, t, 0.0, 5);
}

EnergyState classify(double volts, bool charging, const Thresholds& t,
                     std::optional<EnergyKind> previous) {
    if (!(volts >= 0.0 && volts <= 5.0)) throw ContractViolation("voltage out of [0,5]");
    if (!previous || t.hysteresis_v <= 0.0) return classify(volts, charging, t);
    return classify_with_offset(volts, charging, t, t.hysteresis_v, rank(*previous));
}

Decision decide(const EnergyState& state, double task_priority, bool collective_instinct) {
    if (!(task_priority >= 0.0 && task_priority <= 1.0))
        throw ContractViolation("task priority out of [0,1]");
    switch (state.kind) {
        case EnergyKind::StandBy: return Decision::StandByHalt;
        case EnergyKind::Critical: return Decision::SeekDock;
        case EnergyKind::Discharged:
            return state.level > task_priority ? Decision::SeekDock : Decision::ContinueTask;
        case EnergyKind::Normal: return Decision::ContinueTask;
        case EnergyKind::Satisfied:
            return collective_instinct ? Decision::LeaveDock : Decision::KeepCharging;
        case EnergyKind::Full: return Decision::LeaveDock;
    }
    return Decision::ContinueTask;
}

}  // namespace forage
