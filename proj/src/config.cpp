#include "forage/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "forage/errors.hpp"

namespace forage {

int ScenarioConfig::robot_count() const {
    int n = 0;
    for (const auto& g : groups) n += g.count;
    return n;
}

namespace {

using Getter = std::function<std::string(const ScenarioConfig&)>;
using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

struct Field {
    std::string key;
    Getter get;
    Setter set;
};

std::string fmt(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out))
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

template <class Access>
Field real(std::string key, Access access) {
    return {key, [access](const ScenarioConfig& c) { return fmt(access(const_cast<ScenarioConfig&>(c))); },
            [key, access](ScenarioConfig& c, const std::string& v) { access(c) = parse_double(key, v); }};
}

template <class Access>
Field integer(std::string key, Access access) {
    return {key,
            [access](const ScenarioConfig& c) {
                return std::to_string(access(const_cast<ScenarioConfig&>(c)));
            },
            [key, access](ScenarioConfig& c, const std::string& v) {
                using T = std::remove_reference_t<decltype(access(c))>;
                access(c) = static_cast<T>(parse_int(key, v));
            }};
}

template <class Access>
Field flag(std::string key, Access access) {
    return {key,
            [access](const ScenarioConfig& c) {
                return std::string(access(const_cast<ScenarioConfig&>(c)) ? "true" : "false");
            },
            [key, access](ScenarioConfig& c, const std::string& v) { access(c) = parse_bool(key, v); }};
}

template <class Access>
Field text(std::string key, Access access) {
    return {key, [access](const ScenarioConfig& c) { return access(const_cast<ScenarioConfig&>(c)); },
            [access](ScenarioConfig& c, const std::string& v) { access(c) = v; }};
}

std::string format_ocv(const OcvCurve& curve) {
    std::string out;
    for (const auto& [c, v] : curve.anchors()) {
        if (!out.empty()) out += ", ";
        out += fmt(c) + ":" + fmt(v);
    }
    return out;
}

OcvCurve parse_ocv(const std::string& key, const std::string& v) {
    std::vector<OcvCurve::Anchor> anchors;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(key + ": anchors are charge:volts pairs");
        anchors.emplace_back(parse_double(key, trim(item.substr(0, colon))),
                             parse_double(key, trim(item.substr(colon + 1))));
    }
    try {
        return OcvCurve(std::move(anchors));
    } catch (const ContractViolation& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

#define F(expr) [](ScenarioConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& scalar_fields() {
    static const std::vector<Field> fields = {
        text("run.name", F(name)),
        text("run.strategy", F(strategy)),
        integer("run.seed", F(seed)),
        real("run.duration_min", F(duration_min)),
        integer("run.replications", F(replications)),
        real("run.dt_s", F(dt_s)),

        real("arena.width_cm", F(arena.width)),
        real("arena.height_cm", F(arena.height)),
        real("arena.signal_range_cm", F(arena.signal_range)),
        real("arena.substep_cm", F(arena.substep_cm)),

        real("body.side_cm", F(body.side)),
        real("body.speed_cm_s", F(body.speed)),

        real("battery.capacity_mah", F(battery.capacity_mah)),
        real("battery.idle_ma", F(battery.idle_ma)),
        real("battery.moving_ma", F(battery.moving_ma)),
        real("battery.actuating_ma", F(battery.actuating_ma)),
        real("battery.communicating_ma", F(battery.communicating_ma)),
        real("battery.cc_current_ma", F(battery.cc_current_ma)),
        real("battery.cc_end_charge", F(battery.cc_end_charge)),
        real("battery.full_charge_min", F(battery.full_charge_minutes)),
        real("battery.divider_ratio", F(battery.divider_ratio)),
        real("battery.adc_reference_v", F(battery.adc_reference_v)),
        integer("battery.adc_max", F(battery.adc_max)),
        {"battery.ocv", [](const ScenarioConfig& c) { return format_ocv(c.battery.ocv); },
         [](ScenarioConfig& c, const std::string& v) { c.battery.ocv = parse_ocv("battery.ocv", v); }},

        real("homeostasis.standby_v", F(thresholds.standby_v)),
        real("homeostasis.critical_v", F(thresholds.critical_v)),
        real("homeostasis.normal_v", F(thresholds.normal_v)),
        real("homeostasis.satisfied_v", F(thresholds.satisfied_v)),
        real("homeostasis.full_v", F(thresholds.full_v)),
        real("homeostasis.ideal_seek_v", F(thresholds.ideal_seek_v)),
        real("homeostasis.hysteresis_v", F(thresholds.hysteresis_v)),
        real("homeostasis.critical_window_min", F(critical_window_min)),

        real("docking.dock_latency_s", F(docking.dock_latency_s)),
        real("docking.undock_latency_s", F(docking.undock_latency_s)),
        real("docking.alignment_tolerance_deg", F(docking.alignment_tolerance_deg)),
        real("docking.contact_tolerance_cm", F(docking.contact_tolerance_cm)),
        real("docking.slot_margin_cm", F(docking.slot_margin_cm)),

        real("strategy.task_priority", F(strategy_params.task_priority)),
        real("strategy.seek_voltage", F(strategy_params.seek_voltage)),
        real("strategy.response_exponent", F(strategy_params.response_exponent)),
        real("strategy.walk_forward_probability", F(strategy_params.walk_forward_probability)),
        real("strategy.scan_forward_probability", F(strategy_params.scan_forward_probability)),
        real("strategy.approach_timeout_s", F(strategy_params.approach_timeout_s)),
        real("strategy.leave_timeout_s", F(strategy_params.leave_timeout_s)),
        real("strategy.staging_offset_cm", F(strategy_params.staging_offset_cm)),

        flag("genome.enabled", F(genome.enabled)),
        real("genome.episode_timeout_min", F(genome.episode_timeout_min)),
        real("genome.exchange_cooldown_min", F(genome.exchange_cooldown_min)),
        real("genome.mutation_probability", F(genome.mutation_probability)),
        real("genome.success_increment", F(genome.weights.success_increment)),
        real("genome.failure_factor", F(genome.weights.failure_factor)),
        real("genome.zero_near_epsilon", F(genome.weights.zero_near_epsilon)),
        real("genome.energy_ema_alpha", F(genome.weights.energy_ema_alpha)),
        real("genome.tier_width_mah", F(genome.weights.tier_width_mah)),
        integer("genome.max_states", F(genome.weights.max_states)),

        flag("organism.enabled", F(organism.enabled)),
        integer("organism.chain_margin", F(organism.params.chain_margin)),
        real("organism.crossing_min", F(organism.params.crossing_minutes)),
        real("organism.cell_capacity_ah", F(organism.params.cell_capacity_ah)),
        real("organism.discharge_c_rate", F(organism.params.discharge_c_rate)),
        integer("organism.segment_size", F(organism.params.segment_size)),
        real("organism.docked_idle_factor", F(organism.params.docked_idle_factor)),
        real("organism.speed_factor", F(organism.params.speed_factor)),
        real("organism.assembly_timeout_min", F(organism.assembly_timeout_min)),
    };
    return fields;
}

#undef F

// Indexed list entries: <list>.<index>.<field>.
struct ListField {
    std::string name;
    bool integral;
    std::function<double(const void*)> get;
    std::function<void(void*, double)> set;
};

template <class T, class M>
ListField list_field(std::string name, M T::*member) {
    constexpr bool integral = std::is_integral_v<M>;
    return {name, integral,
            [member](const void* p) { return static_cast<double>(static_cast<const T*>(p)->*member); },
            [member](void* p, double v) { static_cast<T*>(p)->*member = static_cast<M>(v); }};
}

const std::vector<ListField>& group_fields() {
    static const std::vector<ListField> f = {
        list_field("count", &RobotGroup::count),
        list_field("x_min", &RobotGroup::x_min),
        list_field("x_max", &RobotGroup::x_max),
        list_field("y_min", &RobotGroup::y_min),
        list_field("y_max", &RobotGroup::y_max),
        list_field("charge_min", &RobotGroup::charge_min),
        list_field("charge_max", &RobotGroup::charge_max),
    };
    return f;
}

// Station and barrier geometry is nested, so they get hand-written accessors.
struct StationField {
    std::string name;
    bool integral;
    std::function<double&(StationSpec&)> ref;
};

const std::vector<StationField>& station_fields() {
    static const std::vector<StationField> f = {
        {"x1", false, [](StationSpec& s) -> double& { return s.a.x; }},
        {"y1", false, [](StationSpec& s) -> double& { return s.a.y; }},
        {"x2", false, [](StationSpec& s) -> double& { return s.b.x; }},
        {"y2", false, [](StationSpec& s) -> double& { return s.b.y; }},
        {"nx", false, [](StationSpec& s) -> double& { return s.inward_normal.x; }},
        {"ny", false, [](StationSpec& s) -> double& { return s.inward_normal.y; }},
    };
    return f;
}

bool split_indexed(const std::string& key, const std::string& list, std::size_t& index,
                   std::string& field) {
    const std::string prefix = list + ".";
    if (key.rfind(prefix, 0) != 0) return false;
    const auto rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    if (dot == std::string::npos) return false;
    const auto idx = rest.substr(0, dot);
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit)) return false;
    index = std::stoul(idx);
    if (index > 1000) throw ConfigError(key + ": list index too large");
    field = rest.substr(dot + 1);
    return true;
}

template <class T>
T& at_index(std::vector<T>& v, std::size_t i) {
    if (v.size() <= i) v.resize(i + 1);
    return v[i];
}

bool set_list_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
    std::size_t i = 0;
    std::string field;
    if (key == "layout.groups") {
        c.groups.resize(static_cast<std::size_t>(parse_int(key, value)));
        return true;
    }
    if (key == "layout.stations") {
        c.stations.resize(static_cast<std::size_t>(parse_int(key, value)));
        return true;
    }
    if (key == "layout.barriers") {
        c.arena.barriers.resize(static_cast<std::size_t>(parse_int(key, value)));
        return true;
    }
    if (split_indexed(key, "group", i, field)) {
        for (const auto& f : group_fields()) {
            if (f.name != field) continue;
            const double v = f.integral ? static_cast<double>(parse_int(key, value))
                                        : parse_double(key, value);
            f.set(&at_index(c.groups, i), v);
            return true;
        }
        throw ConfigError("unknown key: " + key);
    }
    if (split_indexed(key, "station", i, field)) {
        auto& s = at_index(c.stations, i);
        if (field == "slots") {
            s.slots = static_cast<int>(parse_int(key, value));
            return true;
        }
        for (const auto& f : station_fields()) {
            if (f.name != field) continue;
            f.ref(s) = parse_double(key, value);
            return true;
        }
        throw ConfigError("unknown key: " + key);
    }
    if (split_indexed(key, "barrier", i, field)) {
        auto& b = at_index(c.arena.barriers, i);
        if (field == "x1") b.segment.a.x = parse_double(key, value);
        else if (field == "y1") b.segment.a.y = parse_double(key, value);
        else if (field == "x2") b.segment.b.x = parse_double(key, value);
        else if (field == "y2") b.segment.b.y = parse_double(key, value);
        else if (field == "height_class") b.height_class = static_cast<int>(parse_int(key, value));
        else if (field == "passable_by_organism") b.passable_by_organism = parse_bool(key, value);
        else throw ConfigError("unknown key: " + key);
        return true;
    }
    return false;
}

std::vector<std::pair<std::string, std::string>> list_values(const ScenarioConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("layout.groups", std::to_string(c.groups.size()));
    out.emplace_back("layout.stations", std::to_string(c.stations.size()));
    out.emplace_back("layout.barriers", std::to_string(c.arena.barriers.size()));
    for (std::size_t i = 0; i < c.groups.size(); ++i) {
        for (const auto& f : group_fields()) {
            const double v = f.get(&c.groups[i]);
            out.emplace_back("group." + std::to_string(i) + "." + f.name,
                             f.integral ? std::to_string(static_cast<long long>(v)) : fmt(v));
        }
    }
    for (std::size_t i = 0; i < c.stations.size(); ++i) {
        auto s = c.stations[i];
        for (const auto& f : station_fields())
            out.emplace_back("station." + std::to_string(i) + "." + f.name, fmt(f.ref(s)));
        out.emplace_back("station." + std::to_string(i) + ".slots", std::to_string(s.slots));
    }
    for (std::size_t i = 0; i < c.arena.barriers.size(); ++i) {
        const auto& b = c.arena.barriers[i];
        const std::string p = "barrier." + std::to_string(i) + ".";
        out.emplace_back(p + "x1", fmt(b.segment.a.x));
        out.emplace_back(p + "y1", fmt(b.segment.a.y));
        out.emplace_back(p + "x2", fmt(b.segment.b.x));
        out.emplace_back(p + "y2", fmt(b.segment.b.y));
        out.emplace_back(p + "height_class", std::to_string(b.height_class));
        out.emplace_back(p + "passable_by_organism", b.passable_by_organism ? "true" : "false");
    }
    return out;
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : scalar_fields()) keys.push_back(f.key);
    return keys;
}

void set_config_value(ScenarioConfig& config, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    for (const auto& f : scalar_fields()) {
        if (f.key == key) {
            f.set(config, v);
            return;
        }
    }
    if (set_list_value(config, key, v)) return;
    throw ConfigError("unknown key: " + key);
}

std::string get_config_value(const ScenarioConfig& config, const std::string& key) {
    for (const auto& f : scalar_fields())
        if (f.key == key) return f.get(config);
    for (const auto& [k, v] : list_values(config))
        if (k == key) return v;
    throw ConfigError("unknown key: " + key);
}

ScenarioConfig parse_config(std::istream& is, ScenarioConfig base) {
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        try {
            set_config_value(base, full, t.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    return parse_config(in);
}

void write_resolved(std::ostream& os, const ScenarioConfig& config) {
    std::vector<std::pair<std::string, std::string>> all;
    for (const auto& f : scalar_fields()) all.emplace_back(f.key, f.get(config));
    for (auto& kv : list_values(config)) all.push_back(std::move(kv));

    std::string current;
    for (const auto& [key, value] : all) {
        const auto dot = key.rfind('.');
        const std::string section = key.substr(0, dot);
        if (section != current) {
            if (!current.empty()) os << '\n';
            os << '[' << section << "]\n";
            current = section;
        }
        os << key.substr(dot + 1) << " = " << value << '\n';
    }
}

void validate(const ScenarioConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError("invalid scenario: " + m); };
    strategy_by_name(c.strategy);
    if (!(c.duration_min > 0.0)) fail("run.duration_min must be positive");
    if (!(c.dt_s > 0.0)) fail("run.dt_s must be positive");
    if (c.replications < 1) fail("run.replications must be at least 1");
    if (!(c.arena.width > 0.0 && c.arena.height > 0.0)) fail("arena dimensions must be positive");
    if (!(c.arena.signal_range > 0.0)) fail("arena.signal_range_cm must be positive");
    if (!(c.arena.substep_cm > 0.0)) fail("arena.substep_cm must be positive");
    if (!(c.body.side > 0.0)) fail("body.side_cm must be positive");
    if (!(c.body.speed >= 0.0)) fail("body.speed_cm_s must be non-negative");
    if (c.groups.empty() || c.robot_count() < 1) fail("at least one robot is required");

    auto inside = [&](Vec2 p) {
        return p.x >= 0.0 && p.x <= c.arena.width && p.y >= 0.0 && p.y <= c.arena.height;
    };
    const double r = c.body.radius();
    for (std::size_t i = 0; i < c.groups.size(); ++i) {
        const auto& g = c.groups[i];
        const std::string n = "group." + std::to_string(i);
        if (g.count < 0) fail(n + ".count must be non-negative");
        if (g.x_min > g.x_max || g.y_min > g.y_max) fail(n + " has an empty placement rectangle");
        if (g.x_min < r || g.y_min < r || g.x_max > c.arena.width - r ||
            g.y_max > c.arena.height - r)
            fail(n + " placement rectangle leaves the arena");
        if (!(g.charge_min >= 0.0 && g.charge_max <= 1.0 && g.charge_min <= g.charge_max))
            fail(n + " charge range must lie in [0,1]");
    }
    for (std::size_t i = 0; i < c.stations.size(); ++i) {
        const auto& s = c.stations[i];
        const std::string n = "station." + std::to_string(i);
        if (!inside(s.a) || !inside(s.b)) fail(n + " lies outside the arena");
        if (s.slots < 0) fail(n + ".slots must be non-negative");
        if (norm(s.inward_normal) == 0.0) fail(n + " needs a non-zero inward normal");
        const double width = c.body.side + c.docking.slot_margin_cm;
        if (s.slots * width > distance(s.a, s.b) + 1e-9)
            fail(n + ": " + std::to_string(s.slots) + " slots do not fit on the wall");
    }
    for (std::size_t i = 0; i < c.arena.barriers.size(); ++i) {
        const auto& b = c.arena.barriers[i];
        const std::string n = "barrier." + std::to_string(i);
        if (!inside(b.segment.a) || !inside(b.segment.b)) fail(n + " lies outside the arena");
        if (b.height_class < 1) fail(n + ".height_class must be at least 1");
    }

    const auto& t = c.thresholds;
    if (!(t.standby_v < t.critical_v && t.critical_v < t.normal_v && t.normal_v < t.satisfied_v &&
          t.satisfied_v < t.full_v))
        fail("homeostasis thresholds must increase standby < critical < normal < satisfied < full");
    if (!(t.ideal_seek_v > t.critical_v && t.ideal_seek_v < t.normal_v))
        fail("homeostasis.ideal_seek_v must lie between critical_v and normal_v");
    if (t.hysteresis_v < 0.0) fail("homeostasis.hysteresis_v must be non-negative");

    const auto& b = c.battery;
    if (!(b.capacity_mah > 0.0)) fail("battery.capacity_mah must be positive");
    if (!(b.idle_ma > 0.0 && b.moving_ma > 0.0 && b.actuating_ma > 0.0 && b.communicating_ma > 0.0))
        fail("battery draws must be positive");
    if (b.moving_ma < b.idle_ma) fail("battery.moving_ma must be at least battery.idle_ma");
    if (!(b.cc_end_charge > 0.0 && b.cc_end_charge < 1.0))
        fail("battery.cc_end_charge must lie in (0,1)");
    if (!(b.cc_current_ma > 0.0)) fail("battery.cc_current_ma must be positive");
    if (!(b.full_charge_minutes > b.cc_end_charge / b.cc_rate_per_min()))
        fail("battery.full_charge_min must exceed the constant-current phase");
    if (b.adc_max < 1) fail("battery.adc_max must be positive");

    const auto& sp = c.strategy_params;
    if (!(sp.task_priority >= 0.0 && sp.task_priority <= 1.0))
        fail("strategy.task_priority must lie in [0,1]");
    for (double p : {sp.walk_forward_probability, sp.scan_forward_probability,
                     c.genome.mutation_probability})
        if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0,1]");
    if (!(sp.response_exponent > 0.0)) fail("strategy.response_exponent must be positive");

    const auto& gw = c.genome.weights;
    if (!(gw.failure_factor >= 0.0 && gw.failure_factor < 1.0))
        fail("genome.failure_factor must lie in [0,1)");
    if (!(gw.success_increment > 0.0)) fail("genome.success_increment must be positive");
    if (!(gw.energy_ema_alpha > 0.0 && gw.energy_ema_alpha <= 1.0))
        fail("genome.energy_ema_alpha must lie in (0,1]");
    if (!(gw.tier_width_mah > 0.0)) fail("genome.tier_width_mah must be positive");
    if (gw.max_states < default_genome("").total_states())
        fail("genome.max_states is smaller than the preprogrammed genome");
    if (!(c.genome.episode_timeout_min > 0.0)) fail("genome.episode_timeout_min must be positive");

    const auto& op = c.organism.params;
    if (op.segment_size < 1) fail("organism.segment_size must be at least 1");
    if (op.chain_margin < 0) fail("organism.chain_margin must be non-negative");
    if (!(op.docked_idle_factor > 0.0 && op.docked_idle_factor <= 1.0))
        fail("organism.docked_idle_factor must lie in (0,1]");
    if (!(op.speed_factor > 0.0)) fail("organism.speed_factor must be positive");
}

namespace {

ScenarioConfig base_scenario(std::string name) {
    ScenarioConfig c;
    c.name = std::move(name);
    return c;
}

StationSpec bottom_station(int slots) { return {{45.0, 0.0}, {65.0, 0.0}, {0.0, 1.0}, slots}; }
StationSpec top_station(int slots, double height) {
    return {{35.0, height}, {75.0, height}, {0.0, -1.0}, slots};
}

ScenarioConfig barrier_scenario(std::string name, bool organisms) {
    ScenarioConfig c = base_scenario(std::move(name));
    c.strategy = "bio-inspired";
    c.stations = {top_station(4, c.arena.height)};
    c.arena.barriers = {Barrier{{{0.0, 90.0}, {c.arena.width, 90.0}}, 1, true}};
    // Group 0 shares the stations' side; group 1 is cut off behind the barrier.
    c.groups = {
        RobotGroup{2, 5.0, 105.0, 95.0, 130.0, 0.5, 1.0},
        RobotGroup{6, 5.0, 105.0, 5.0, 85.0, 0.5, 1.0},
    };
    c.genome.enabled = true;
    c.organism.enabled = organisms;
    return c;
}

}  // namespace

std::vector<std::string> scenario_names() {
    return {"solo", "bottleneck", "barrier-swarm", "barrier-organism"};
}

bool is_scenario_name(const std::string& name) {
    for (const auto& n : scenario_names())
        if (n == name) return true;
    return name == "s1" || name == "s2" || name == "s3" || name == "s4";
}

ScenarioConfig scenario(const std::string& name) {
    if (name == "solo" || name == "s1") {
        ScenarioConfig c = base_scenario("solo");
        c.strategy = "solo";
        c.groups = {RobotGroup{1, 5.0, 105.0, 20.0, 135.0, 1.0, 1.0}};
        c.stations = {bottom_station(1)};
        return c;
    }
    if (name == "bottleneck" || name == "s2") {
        ScenarioConfig c = base_scenario("bottleneck");
        c.strategy = "bio-inspired";
        c.groups = {RobotGroup{10, 5.0, 105.0, 20.0, 135.0, 0.4, 1.0}};
        c.stations = {bottom_station(2)};
        return c;
    }
    if (name == "barrier-swarm" || name == "s3") return barrier_scenario("barrier-swarm", false);
    if (name == "barrier-organism" || name == "s4")
        return barrier_scenario("barrier-organism", true);
    throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace forage
