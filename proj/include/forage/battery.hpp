#pragma once

#include <utility>
#include <vector>

namespace forage {

/// Open-circuit voltage as a piecewise-linear function of state of charge.
/// Anchors are (charge fraction, volts), strictly increasing in both.
class OcvCurve {
public:
    using Anchor = std::pair<double, double>;

    /// The default anchors pin every homeostasis threshold to a charge level:
    /// 3.0 V empty, 3.2 V at 5 %, 3.65 V at 20 %, 3.7 V at 25 %, 4.0 V at 85 %,
    /// 4.1 V at 95 %, 4.2 V full.
    OcvCurve();
    explicit OcvCurve(std::vector<Anchor> anchors);

    double voltage(double charge) const;
    /// Inverse lookup; volts outside the curve clamp to 0 or 1.
    double charge_at(double volts) const;

    const std::vector<Anchor>& anchors() const { return anchors_; }

private:
    std::vector<Anchor> anchors_;
};

enum class Activity { Idle, Moving, Actuating, Communicating };

const char* to_string(Activity a);

struct BatteryParams {
    double capacity_mah = 250.0;
    double idle_ma = 20.0;
    double moving_ma = 200.0;
    double actuating_ma = 400.0;
    double communicating_ma = 40.0;

    // Constant-current phase replaces Moving drain one-for-one in time.
    double cc_current_ma = 200.0;
    double cc_end_charge = 0.85;
    // Empty to full, constant-current plus taper.
    double full_charge_minutes = 90.0;

    double divider_ratio = 0.55;
    double adc_reference_v = 3.0;
    int adc_max = 255;

    OcvCurve ocv;

    double draw_ma(Activity a) const;
    /// Charge fraction gained per minute in the taper phase.
    double taper_rate_per_min() const;
    double cc_rate_per_min() const { return cc_current_ma / capacity_mah / 60.0; }
};

struct BatteryState {
    double charge = 1.0;
    double capacity_mah = 250.0;
    bool charging = false;
    double age_minutes = 0.0;
    // Deepest discharge seen so far. Recorded only, no wear model.
    double min_charge = 1.0;
};

double voltage_of(double charge, const OcvCurve& curve);

int adc_of_voltage(double volts, const BatteryParams& params = {});

BatteryState discharge_step(BatteryState b, double current_ma, double dt_minutes);
BatteryState discharge_step(BatteryState b, Activity load, double dt_minutes,
                            const BatteryParams& params = {});

/// Two-phase charging: constant current up to cc_end_charge, then a linear
/// taper that reaches 1.0 exactly at full_charge_minutes from empty.
BatteryState charge_step(BatteryState b, double dt_minutes, const BatteryParams& params = {});

/// Minutes needed to charge from `from` to `to` (from <= to).
double charge_minutes(double from, double to, const BatteryParams& params = {});

}  // namespace forage
