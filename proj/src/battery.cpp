#include "forage/battery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "forage/errors.hpp"

namespace forage {

OcvCurve::OcvCurve()
    : OcvCurve({{0.00, 3.00}, {0.05, 3.20}, {0.20, 3.65}, {0.25, 3.70},
                {0.85, 4.00}, {0.95, 4.10}, {1.00, 4.20}}) {}

OcvCurve::OcvCurve(std::vector<Anchor> anchors) : anchors_(std::move(anchors)) {
    if (anchors_.size() < 2) throw ContractViolation("OCV curve needs at least two anchors");
    if (anchors_.front().first != 0.0 || anchors_.back().first != 1.0)
        throw ContractViolation("OCV anchors must span charge 0..1");
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
        if (!(anchors_[i].first > anchors_[i - 1].first) ||
            !(anchors_[i].second > anchors_[i - 1].second))
            throw ContractViolation("OCV anchors must be strictly increasing");
    }
}

double OcvCurve::voltage(double charge) const {
    if (!(charge >= 0.0 && charge <= 1.0))
        throw ContractViolation("charge out of [0,1]: " + std::to_string(charge));
    auto hi = std::lower_bound(anchors_.begin(), anchors_.end(), charge,
                               [](const Anchor& a, double c) { return a.first < c; });
    if (hi == anchors_.begin()) return hi->second;
    if (hi->first == charge) return hi->second;
    auto lo = std::prev(hi);
    const double t = (charge - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

double OcvCurve::charge_at(double volts) const {
    if (volts <= anchors_.front().second) return 0.0;
    if (volts >= anchors_.back().second) return 1.0;
    for (std::size_t i = 1; i < anchors_.size(); ++i) {
        const auto& [c1, v1] = anchors_[i];
        if (volts <= v1) {
            const auto& [c0, v0] = anchors_[i - 1];
            return c0 + (volts - v0) / (v1 - v0) * (c1 - c0);
        }
    }
    return 1.0;
}

const char* to_string(Activity a) {
    switch (a) {
        case Activity::Idle: return "idle";
        case Activity::Moving: return "moving";
        case Activity::Actuating: return "actuating";
        case Activity::Communicating: return "communicating";
    }
    return "?";
}

double BatteryParams::draw_ma(Activity a) const {
    switch (a) {
        case Activity::Idle: return idle_ma;
        case Activity::Moving: return moving_ma;
        case Activity::Actuating: return actuating_ma;
        case Activity::Communicating: return communicating_ma;
    }
    return idle_ma;
}

double BatteryParams::taper_rate_per_min() const {
    const double cc_minutes = cc_end_charge / cc_rate_per_min();
    const double taper_minutes = full_charge_minutes - cc_minutes;
    if (taper_minutes <= 0.0) throw ContractViolation("full charge time shorter than CC phase");
    return (1.0 - cc_end_charge) / taper_minutes;
}

double voltage_of(double charge, const OcvCurve& curve) { return curve.voltage(charge); }

int adc_of_voltage(double volts, const BatteryParams& params) {
    const double scaled = volts * params.divider_ratio / params.adc_reference_v * params.adc_max;
    const long counts = std::lround(scaled);
    return static_cast<int>(std::clamp<long>(counts, 0, params.adc_max));
}

BatteryState discharge_step(BatteryState b, double current_ma, double dt_minutes) {
    if (b.charging) throw ContractViolation("discharge_step on a charging battery");
    if (dt_minutes < 0.0) throw ContractViolation("negative time step");
    const double used = current_ma * dt_minutes / 60.0 / b.capacity_mah;
    b.charge = std::max(0.0, b.charge - used);
    b.min_charge = std::min(b.min_charge, b.charge);
    b.age_minutes += dt_minutes;
    return b;
}

BatteryState discharge_step(BatteryState b, Activity load, double dt_minutes,
                            const BatteryParams& params) {
    return discharge_step(b, params.draw_ma(load), dt_minutes);
}

BatteryState charge_step(BatteryState b, double dt_minutes, const BatteryParams& params) {
    if (!b.charging) throw ContractViolation("charge_step on a battery that is not docked");
    if (dt_minutes < 0.0) throw ContractViolation("negative time step");
    b.age_minutes += dt_minutes;
    // Rates are expressed against the configured capacity so a non-default
    // cell keeps the same time-to-full.
    const double cc_rate = params.cc_rate_per_min();
    const double taper_rate = params.taper_rate_per_min();
    double remaining = dt_minutes;
    if (b.charge < params.cc_end_charge) {
        const double to_knee = (params.cc_end_charge - b.charge) / cc_rate;
        if (remaining < to_knee) {
            b.charge += remaining * cc_rate;
            return b;
        }
        b.charge = params.cc_end_charge;
        remaining -= to_knee;
    }
    b.charge = std::min(1.0, b.charge + remaining * taper_rate);
    return b;
}

double charge_minutes(double from, double to, const BatteryParams& params) {
    if (from > to) throw ContractViolation("charge_minutes expects from <= to");
    const double knee = params.cc_end_charge;
    double minutes = 0.0;
    if (from < knee) minutes += (std::min(to, knee) - from) / params.cc_rate_per_min();
    if (to > knee) minutes += (to - std::max(from, knee)) / params.taper_rate_per_min();
    return minutes;
}

}  // namespace forage
