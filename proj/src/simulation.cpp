#include "forage/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "forage/errors.hpp"

namespace forage {

namespace {

// Waiting line geometry, measured from the station wall along its normal.
constexpr double kQueueFirstSpot = 8.5;
constexpr double kQueueSpacing = 4.0;
constexpr std::size_t kQueueMaxSpots = 40;
constexpr double kExitSideStep = 1.0;
constexpr double kExitDepth = 15.0;
constexpr double kWaypointReached = 0.5;
constexpr double kChainSnap = 1.0;
constexpr double kChainLeadIn = 3.0;
constexpr double kBarrierTouch = 0.05;
constexpr double kCrossShiftMax = 40.0;

constexpr std::uint64_t kWorldStream = 0xF0F0'0000'0000ULL;

bool foraging(Mode m) { return m == Mode::Seeking || m == Mode::Approaching || m == Mode::Queued; }

}  // namespace

const char* to_string(Bin b) {
    switch (b) {
        case Bin::Task: return "task";
        case Bin::Recharging: return "recharging";
        case Bin::Dead: return "dead";
    }
    return "?";
}

Bin bin_of(Mode m) {
    if (m == Mode::Task) return Bin::Task;
    if (m == Mode::Dead) return Bin::Dead;
    return Bin::Recharging;
}

LedgerEntry TickLedger::minutes(double dt_s) const {
    const double k = dt_s / 60.0;
    return {static_cast<double>(task) * k, static_cast<double>(recharging) * k,
            static_cast<double>(dead) * k};
}

Simulation::Simulation(ScenarioConfig config)
    : config_(std::move(config)), world_rng_(Rng::stream(config_.seed, kWorldStream)) {
    validate(config_);
    strategy_ = strategy_by_name(config_.strategy);
    dt_min_ = config_.dt_s / 60.0;
    total_ticks_ = std::llround(config_.duration_min * 60.0 / config_.dt_s);

    const double slot_width = config_.body.side + config_.docking.slot_margin_cm;
    int next_slot = 0;
    for (std::size_t i = 0; i < config_.stations.size(); ++i) {
        const auto& s = config_.stations[i];
        stations_.push_back(make_station(static_cast<int>(i), s.a, s.b, s.inward_normal, s.slots,
                                         slot_width, next_slot));
        next_slot += s.slots;
    }
    queues_.resize(stations_.size());
    place_robots();
}

double Simulation::minutes() const { return static_cast<double>(tick_) * dt_min_; }

void Simulation::emit(int robot, std::string name, double value) {
    events_.push_back({tick_, robot, std::move(name), value});
}

std::vector<Disc> Simulation::discs(int skip_a, int skip_b) const {
    std::vector<Disc> out;
    out.reserve(robots_.size());
    for (const auto& r : robots_) {
        if (r.id == skip_a || r.id == skip_b) continue;
        out.push_back({r.pose.pos, config_.body.radius(), r.id});
    }
    return out;
}

void Simulation::place_robots() {
    const double radius = config_.body.radius();
    int id = 0;
    for (const auto& group : config_.groups) {
        for (int k = 0; k < group.count; ++k, ++id) {
            Robot r;
            r.id = id;
            r.rng = Rng::stream(config_.seed, static_cast<std::uint64_t>(id));
            const auto others = discs();
            bool placed = false;
            for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
                const Vec2 p{r.rng.uniform(group.x_min, group.x_max),
                             r.rng.uniform(group.y_min, group.y_max)};
                if (collides(p, radius, config_.arena, others)) continue;
                r.pose.pos = p;
                placed = true;
            }
            if (!placed)
                throw ConfigError("cannot place robot " + std::to_string(id) +
                                  " without overlap; enlarge its group rectangle");
            r.pose.heading = r.rng.uniform(0.0, kTwoPi);
            r.battery.capacity_mah = config_.battery.capacity_mah;
            r.battery.charge = r.rng.uniform(group.charge_min, group.charge_max);
            r.battery.min_charge = r.battery.charge;
            r.energy = classify(voltage_of(r.battery.charge, config_.battery.ocv), false,
                                config_.thresholds)
                           .kind;
            r.genome = default_genome("robot-" + std::to_string(id));
            if (!stations_.empty()) {
                r.isolated = std::all_of(stations_.begin(), stations_.end(), [&](const auto& st) {
                    return config_.arena.barrier_between(r.pose.pos,
                                                         st.centre() + st.inward_normal * radius);
                });
            }
            graph_.add_robot(id);
            robots_.push_back(std::move(r));
        }
    }
    for (const auto& r : robots_)
        if (r.isolated) emit(r.id, "isolated", 1.0);
}

void Simulation::run() {
    while (!finished()) step();
}

void Simulation::step() {
    if (finished()) return;
    for (auto& r : robots_) step_robot(r);
    if (config_.organism.enabled) organisms_tick();
    if (config_.genome.enabled) exchanges();
    account();
    ++tick_;
    sample();
    if (finished()) {
        if (config_.genome.enabled) {
            std::vector<Genome> all;
            for (const auto& r : robots_) all.push_back(r.genome);
            emit(-1, "genome_divergence", divergence(all));
        }
        emit(-1, "end", static_cast<double>(total_ticks_));
    }
}

void Simulation::set_mode(Robot& r, Mode m) { r.mode = m; }

void Simulation::halt(Robot& r) {
    r.mode = Mode::Dead;
    r.battery.charging = false;
    r.session.reset();
    r.undock_remaining_s = -1.0;
    leave_queue(r.id);
    emit(r.id, "standby", minutes());
}

void Simulation::leave_queue(int robot) {
    for (auto& q : queues_) std::erase(q, robot);
}

std::vector<Vec2> Simulation::queue_spots(int station, std::size_t count) const {
    const auto& st = stations_.at(static_cast<std::size_t>(station));
    const double r = config_.body.radius();
    const Vec2 t = st.tangent();
    auto blocked = [&](Vec2 p) {
        if (!config_.arena.inside(p, r)) return true;
        return std::any_of(robots_.begin(), robots_.end(), [&](const Robot& o) {
            return o.mode == Mode::Dead && distance(o.pose.pos, p) < 2.0 * r;
        });
    };
    // One spot per row; a row whose centre is taken by a dead robot shifts sideways.
    constexpr double kLateral[] = {0.0, 1.0, -1.0, 2.0, -2.0};
    std::vector<Vec2> spots;
    for (std::size_t k = 0; k < kQueueMaxSpots && spots.size() < count; ++k) {
        const Vec2 row =
            st.centre() + st.inward_normal * (kQueueFirstSpot + kQueueSpacing * static_cast<double>(k));
        if (!config_.arena.inside(row, r)) break;
        for (double lateral : kLateral) {
            const Vec2 p = row + t * (lateral * kQueueSpacing);
            if (!blocked(p)) {
                spots.push_back(p);
                break;
            }
        }
    }
    return spots;
}

std::vector<Vec2> Simulation::exit_path(const DockingStation& st, const Slot& slot) const {
    const double r = config_.body.radius();
    const Vec2 t = st.tangent();
    const Vec2 c = st.centre();
    const double half = 0.5 * distance(st.wall.a, st.wall.b);
    const double side = dot(slot.anchor - c, t) >= 0.0 ? 1.0 : -1.0;
    auto clamp_in = [&](Vec2 p) {
        p.x = std::clamp(p.x, r, config_.arena.width - r);
        p.y = std::clamp(p.y, r, config_.arena.height - r);
        return p;
    };
    const Vec2 aside =
        clamp_in(c + t * (side * (half + r + kExitSideStep)) + st.inward_normal * (r + config_.body.side));
    const Vec2 out = clamp_in(aside + st.inward_normal * kExitDepth);
    return {aside, out};
}

std::optional<SlotView> Simulation::slot_view(const Robot& r, int station, int slot,
                                              const std::vector<Disc>&) const {
    const auto& st = stations_.at(static_cast<std::size_t>(station));
    const Slot* s = st.find_slot(slot);
    if (!s) return std::nullopt;
    SlotView v;
    v.station = station;
    v.slot = slot;
    v.dock_point = dock_point(st, *s, config_.body);
    v.staging_point = v.dock_point + st.inward_normal * config_.strategy_params.staging_offset_cm;
    v.inward_normal = st.inward_normal;
    v.dock_heading = dock_heading(st);
    v.in_contact = in_contact(r.pose, config_.body, *s, st, config_.docking);
    return v;
}

Observation Simulation::observe(const Robot& r, const std::vector<Disc>& others) const {
    Observation obs;
    obs.pose = r.pose;
    obs.contact = r.contact;
    obs.volts = voltage_of(r.battery.charge, config_.battery.ocv);
    obs.energy = classify(obs.volts, r.battery.charging, config_.thresholds, r.energy);
    obs.mode = r.mode;
    obs.mode_ticks = r.mode_ticks;
    obs.dt_s = config_.dt_s;
    obs.speed = config_.body.speed;
    obs.nav = r.nav;

    const double range = config_.arena.signal_range;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& st : stations_) {
        for (const auto& s : st.slots) {
            if (!broadcast(s)) continue;
            if (!signal_visible(s.anchor, r.pose.pos, config_.arena, others, -1, r.id)) continue;
            const double d = distance(s.anchor, r.pose.pos);
            if (d < best) {
                best = d;
                obs.free_signal = slot_view(r, st.id, s.id, others);
            }
        }
    }

    if (r.mode == Mode::Approaching && r.station >= 0) {
        const auto& st = stations_[static_cast<std::size_t>(r.station)];
        const Slot* s = st.find_slot(r.slot);
        if (s && s->free() && distance(s->anchor, r.pose.pos) <= 2.0 * range &&
            !config_.arena.barrier_between(s->anchor, r.pose.pos))
            obs.target = slot_view(r, r.station, r.slot, others);
    }

    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& st : stations_) {
        const Vec2 cp = closest_point(st.wall, r.pose.pos);
        const double d = distance(cp, r.pose.pos);
        if (d <= range && d < nearest && !config_.arena.barrier_between(cp, r.pose.pos)) {
            nearest = d;
            obs.nearby_station = st.id;
        }
    }
    if (obs.nearby_station) {
        const auto& q = queues_[static_cast<std::size_t>(*obs.nearby_station)];
        obs.nearby_queue_nonempty = std::any_of(q.begin(), q.end(), [&](int id) { return id != r.id; });
    }

    if (r.mode == Mode::Queued) {
        for (std::size_t s = 0; s < queues_.size(); ++s) {
            const auto& q = queues_[s];
            const auto it = std::find(q.begin(), q.end(), r.id);
            if (it == q.end()) continue;
            const auto pos = static_cast<std::size_t>(it - q.begin());
            const auto spots = queue_spots(static_cast<int>(s), pos + 1);
            if (spots.size() > pos) obs.queue = QueueView{static_cast<int>(pos), spots[pos]};
        }
    }

    if (r.mode == Mode::Leaving && !r.exit_path.empty()) obs.exit_waypoint = r.exit_path.front();

    obs.search_forward_probability = config_.strategy_params.walk_forward_probability;
    if (config_.genome.enabled && r.episode_gene == "rotate")
        obs.search_forward_probability = config_.strategy_params.scan_forward_probability;
    return obs;
}

void Simulation::step_robot(Robot& r) {
    if (r.mode == Mode::Dead) return;
    const Mode before = r.mode;
    const auto& bp = config_.battery;
    const double dt_s = config_.dt_s;

    const double volts = voltage_of(r.battery.charge, bp.ocv);
    const EnergyState state = classify(volts, r.battery.charging, config_.thresholds, r.energy);
    r.energy = state.kind;

    auto finish = [&] {
        r.mode_ticks = (r.mode == before) ? r.mode_ticks + 1 : 0;
    };

    if (state.kind == EnergyKind::Critical && r.mode != Mode::Docking && r.mode != Mode::Charging) {
        if (!r.critical_since) r.critical_since = tick_;
        const double waited = static_cast<double>(tick_ - *r.critical_since) * dt_min_;
        if (waited > config_.critical_window_min && !r.critical_overrun_logged) {
            r.critical_overrun_logged = true;
            emit(r.id, "critical_overrun", waited);
        }
    } else if (state.kind != EnergyKind::Critical && state.kind != EnergyKind::StandBy) {
        r.critical_since.reset();
        r.critical_overrun_logged = false;
    }

    if (r.mode == Mode::Aggregating) {
        // The organism controller moves and powers its members.
        if (state.kind == EnergyKind::StandBy) halt(r);
        finish();
        return;
    }

    const Decision decision =
        decide(state, config_.strategy_params.task_priority, strategy_.collective_instinct);

    // Undock manoeuvre in progress: the robot still sits in its slot.
    if (r.undock_remaining_s >= 0.0) {
        r.battery = discharge_step(r.battery, Activity::Idle, dt_min_, bp);
        r.undock_remaining_s = std::max(0.0, r.undock_remaining_s - dt_s);
        if (r.undock_remaining_s <= 1e-12) {
            auto& st = stations_[static_cast<std::size_t>(r.station)];
            Slot* slot = st.find_slot(r.slot);
            Slot probe = *slot;
            const Pose out = undock(r.id, probe, st, config_.body);
            if (!collides(out.pos, config_.body.radius(), config_.arena, discs(r.id))) {
                r.pose = undock(r.id, *slot, st, config_.body);
                r.exit_path = exit_path(st, *slot);
                r.undock_remaining_s = -1.0;
                r.session.reset();
                emit(r.id, "undock", static_cast<double>(slot->id));
                r.station = -1;
                r.slot = -1;
                r.nav = {};
                r.mode = Mode::Leaving;
            }
        }
        finish();
        return;
    }

    if (r.mode == Mode::Docking) {
        if (decision == Decision::StandByHalt) {
            halt(r);
            finish();
            return;
        }
        r.battery = discharge_step(r.battery, Activity::Idle, dt_min_, bp);
        if (r.session->advance(dt_s)) {
            r.battery.charging = true;
            r.mode = Mode::Charging;
            r.critical_since.reset();
            emit(r.id, "charge", r.battery.charge);
            const double mah = r.battery.charge * r.battery.capacity_mah;
            if (config_.genome.enabled && !r.episode_gene.empty() && r.genome.find(r.episode_gene)) {
                update_on_success(r.genome, r.episode_gene,
                                  std::max(0.0, r.episode_start_mah - mah), minutes(),
                                  config_.genome.weights);
            }
            r.episode_gene.clear();
            if (r.reward) {
                const double latency = static_cast<double>(tick_ - r.reward->formed_tick) * dt_min_;
                if (r.genome.find(r.reward->gene))
                    update_on_success(r.genome, r.reward->gene,
                                      r.reward->spent_mah + std::max(0.0, r.reward->start_mah - mah),
                                      minutes(), config_.genome.weights);
                emit(r.id, "fitness_latency", latency);
                r.reward.reset();
            }
            r.barrier_contact = false;
            r.station_seen = false;
        }
        finish();
        return;
    }

    if (r.mode == Mode::Leaving) {
        while (!r.exit_path.empty() && distance(r.pose.pos, r.exit_path.front()) < kWaypointReached)
            r.exit_path.erase(r.exit_path.begin());
    }

    auto others = discs(r.id);
    const Observation obs = observe(r, others);
    const PolicyStep step = policy_step(strategy_, config_.strategy_params, obs, decision, r.rng);
    r.nav = step.nav;
    Mode next = step.next_mode;

    switch (step.request) {
        case Request::Halt:
            halt(r);
            finish();
            return;
        case Request::JoinQueue: {
            auto& q = queues_.at(static_cast<std::size_t>(step.station));
            leave_queue(r.id);
            q.push_back(r.id);
            r.station = step.station;
            r.slot = -1;
            break;
        }
        case Request::LeaveQueue: leave_queue(r.id); break;
        case Request::Dock: {
            auto& st = stations_.at(static_cast<std::size_t>(step.station));
            Slot* slot = st.find_slot(step.slot);
            const DockResult res =
                attempt_dock(r.id, r.pose, config_.body, *slot, st, config_.docking);
            if (res == DockResult::Docked) {
                next = Mode::Docking;
                r.session.emplace(slot->id, config_.docking.dock_latency_s);
                emit(r.id, "dock", static_cast<double>(slot->id));
            } else if (res == DockResult::SlotTaken) {
                next = Mode::Seeking;
                r.nav = {};
            }
            break;
        }
        case Request::Undock:
            r.undock_remaining_s = config_.docking.undock_latency_s;
            r.battery.charging = false;
            next = Mode::Charging;
            break;
        case Request::None: break;
    }

    if (next == Mode::Approaching || next == Mode::Docking) {
        r.station = step.station;
        r.slot = step.slot;
    } else if (next != Mode::Queued && next != Mode::Charging) {
        r.station = -1;
        r.slot = -1;
    }
    if (next != Mode::Queued) leave_queue(r.id);
    r.mode = next;

    r.contact = false;
    if (step.motion.kind != CommandKind::Stop) {
        const MotionResult res =
            step_motion(r.pose, step.motion, dt_s, config_.arena, config_.body, others);
        r.pose = res.pose;
        r.contact = res.contact;
        if (res.contact) {
            for (const auto& b : config_.arena.barriers)
                if (distance_to_segment(b.segment, r.pose.pos) <= config_.body.radius() + 1e-6)
                    r.barrier_contact = true;
        }
    }

    if (r.battery.charging) {
        r.battery = charge_step(r.battery, dt_min_, bp);
    } else {
        r.battery = discharge_step(r.battery, step.activity, dt_min_, bp);
    }
    if (obs.free_signal || obs.nearby_station) r.station_seen = true;

    if (config_.genome.enabled) genome_tick(r);
    finish();
}

void Simulation::start_episode(Robot& r) {
    // A robot still waiting for the payoff of an earlier crossing does not call again.
    const SelectionContext ctx{config_.organism.enabled && r.barrier_contact && !r.station_seen &&
                               !r.reward};
    const Gene& g = select_sequence(r.genome, ctx, config_.genome.weights);
    r.episode_gene = g.name;
    r.episode_start = tick_;
    r.episode_start_mah = r.battery.charge * r.battery.capacity_mah;
    if (ctx.allow_aggregation && is_aggregation_gene(g)) become_aggregator(r);
}

void Simulation::genome_tick(Robot& r) {
    if (!foraging(r.mode)) {
        if (r.mode == Mode::Task) r.episode_gene.clear();
        return;
    }
    if (r.episode_gene.empty()) {
        start_episode(r);
        return;
    }
    if (r.mode != Mode::Seeking) return;
    const double elapsed = static_cast<double>(tick_ - r.episode_start) * dt_min_;
    if (elapsed < config_.genome.episode_timeout_min) return;
    if (r.genome.find(r.episode_gene))
        update_on_failure(r.genome, r.episode_gene, minutes(), config_.genome.weights);
    if (r.rng.bernoulli(config_.genome.mutation_probability))
        r.genome = mutate(r.genome, r.rng, config_.genome.weights);
    start_episode(r);
}

// ---------------------------------------------------------------------------
// Organisms

bool Simulation::same_side(Vec2 a, Vec2 b) const { return !config_.arena.barrier_between(a, b); }

int Simulation::nearest_barrier(Vec2 p) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config_.arena.barriers.size(); ++i) {
        const auto& b = config_.arena.barriers[i];
        if (!b.passable_by_organism) continue;
        const double d = distance_to_segment(b.segment, p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void Simulation::become_aggregator(Robot& r) {
    // Join a chain that is still looking for members before calling a new one.
    for (auto& [id, plan] : plans_) {
        if (plan.phase != OrganismPlan::Phase::Assembling) continue;
        if (plan.chain.size() + plan.pending.size() >= static_cast<std::size_t>(plan.target_size))
            continue;
        if (!same_side(robots_[static_cast<std::size_t>(plan.caller)].pose.pos, r.pose.pos)) continue;
        plan.pending.push_back(r.id);
        r.plan = id;
        r.mode = Mode::Aggregating;
        r.nav = {};
        r.episode_gene.clear();
        leave_queue(r.id);
        return;
    }

    const int barrier = nearest_barrier(r.pose.pos);
    if (barrier < 0) return;
    const auto& b = config_.arena.barriers[static_cast<std::size_t>(barrier)];
    OrganismPlan plan;
    plan.id = next_plan_id_++;
    plan.caller = r.id;
    plan.barrier = barrier;
    plan.gene = r.episode_gene;
    plan.target_size = min_chain_length(b, config_.organism.params);
    plan.started_tick = tick_;
    plan.phase_start = tick_;
    plan.heading = heading_of(closest_point(b.segment, r.pose.pos) - r.pose.pos);
    plan.chain = {r.id};
    r.pose.heading = plan.heading;
    r.plan = plan.id;
    r.mode = Mode::Aggregating;
    r.nav = {};
    r.episode_gene.clear();
    leave_queue(r.id);
    emit(r.id, "organism_call", static_cast<double>(plan.id));
    const int id = plan.id;
    plans_.emplace(id, std::move(plan));
    recruit(plans_.at(id));
}

void Simulation::recruit(OrganismPlan& plan) {
    const std::size_t have = plan.chain.size() + plan.pending.size();
    if (have >= static_cast<std::size_t>(plan.target_size)) return;
    const Vec2 origin = robots_[static_cast<std::size_t>(plan.caller)].pose.pos;

    std::vector<int> eligible;
    for (const auto& o : robots_) {
        if (o.plan >= 0 || (o.mode != Mode::Task && o.mode != Mode::Seeking)) continue;
        if (!same_side(origin, o.pose.pos)) continue;
        eligible.push_back(o.id);
    }
    std::sort(eligible.begin(), eligible.end(), [&](int a, int b) {
        const auto& ra = robots_[static_cast<std::size_t>(a)];
        const auto& rb = robots_[static_cast<std::size_t>(b)];
        const int pa = ra.mode == Mode::Task ? 0 : 1;
        const int pb = rb.mode == Mode::Task ? 0 : 1;
        if (pa != pb) return pa < pb;
        const double da = distance(ra.pose.pos, origin), db = distance(rb.pose.pos, origin);
        if (da != db) return da < db;
        return a < b;
    });

    std::size_t needed = static_cast<std::size_t>(plan.target_size) - have;
    if (eligible.size() > needed && eligible.size() - needed < static_cast<std::size_t>(plan.target_size)) {
        // The rest could not make up another chain, so take them along.
        needed = eligible.size();
        plan.target_size = static_cast<int>(have + needed);
    }
    for (std::size_t k = 0; k < std::min(needed, eligible.size()); ++k) {
        auto& o = robots_[static_cast<std::size_t>(eligible[k])];
        o.plan = plan.id;
        o.mode = Mode::Aggregating;
        o.mode_ticks = 0;
        o.nav = {};
        o.episode_gene.clear();
        o.station = -1;
        o.slot = -1;
        leave_queue(o.id);
        plan.pending.push_back(o.id);
    }
}

Vec2 Simulation::chain_spot(const OrganismPlan& plan, std::size_t index) const {
    const Vec2 head = robots_[static_cast<std::size_t>(plan.chain.front())].pose.pos;
    return head - unit_from_angle(plan.heading) * (config_.body.side * static_cast<double>(index));
}

bool Simulation::chain_fits(const OrganismPlan& plan) const {
    const double r = config_.body.radius();
    const Vec2 dir = unit_from_angle(plan.heading);
    const Vec2 head = robots_[static_cast<std::size_t>(plan.chain.front())].pose.pos;
    const auto last = static_cast<std::size_t>(std::max(plan.target_size, 2) - 1);
    const Vec2 lead_in = chain_spot(plan, last) - dir * kChainLeadIn;
    return config_.arena.inside(lead_in, r) && !config_.arena.barrier_between(head, lead_in);
}

void Simulation::balance(OrganismPlan& plan) {
    std::vector<int> members;
    if (!plan.bus.segments.empty()) {
        members = plan.bus.live_members();
    } else {
        members = plan.chain;
    }
    std::erase_if(members, [&](int id) { return robots_[static_cast<std::size_t>(id)].mode == Mode::Dead; });
    if (members.size() < 2) return;
    double sum = 0.0;
    for (int id : members) sum += robots_[static_cast<std::size_t>(id)].battery.charge;
    const double mean = sum / static_cast<double>(members.size());
    for (int id : members) {
        auto& b = robots_[static_cast<std::size_t>(id)].battery;
        b.charge = mean;
        b.min_charge = std::min(b.min_charge, mean);
    }
}

bool Simulation::move_rigid(OrganismPlan& plan, double dist) {
    RobotBody body = config_.body;
    body.speed *= config_.organism.params.speed_factor;
    std::vector<Disc> obstacles;
    for (const auto& o : robots_) {
        if (std::find(plan.chain.begin(), plan.chain.end(), o.id) != plan.chain.end()) continue;
        obstacles.push_back({o.pose.pos, config_.body.radius(), o.id});
    }
    double travel = dist;
    for (int id : plan.chain) {
        Pose p = robots_[static_cast<std::size_t>(id)].pose;
        p.heading = plan.heading;
        const auto res = step_motion(p, MotionCommand::forward(0.0, dist), config_.dt_s,
                                     config_.arena, body, obstacles);
        travel = std::min(travel, res.travelled);
    }
    if (travel <= 1e-9) return false;
    const Vec2 d = unit_from_angle(plan.heading) * travel;
    for (int id : plan.chain) robots_[static_cast<std::size_t>(id)].pose.pos = robots_[static_cast<std::size_t>(id)].pose.pos + d;
    return true;
}

void Simulation::dissolve(OrganismPlan& plan, bool success) {
    if (!success) {
        auto& caller = robots_[static_cast<std::size_t>(plan.caller)];
        if (caller.genome.find(plan.gene))
            update_on_failure(caller.genome, plan.gene, minutes(), config_.genome.weights);
        if (plan.virtual_genome && plan.virtual_genome->find(plan.gene))
            update_on_failure(*plan.virtual_genome, plan.gene, minutes(), config_.genome.weights);
    }
    if (plan.chain.size() >= 2) {
        graph_.disaggregate(plan.chain.front());
        emit(plan.caller, "organism_split", static_cast<double>(plan.id));
    }
    std::vector<int> members = plan.chain;
    members.insert(members.end(), plan.pending.begin(), plan.pending.end());
    for (int id : members) {
        auto& m = robots_[static_cast<std::size_t>(id)];
        m.plan = -1;
        m.nav = {};
        m.episode_gene.clear();
        if (m.mode == Mode::Dead) continue;
        m.mode = Mode::Seeking;
        m.mode_ticks = 0;
        if (success) {
            m.barrier_contact = false;
            m.station_seen = false;
        }
    }
    plan.chain.clear();
    plan.pending.clear();
}

void Simulation::cross(OrganismPlan& plan) {
    const auto& seg = config_.arena.barriers[static_cast<std::size_t>(plan.barrier)].segment;
    const Vec2 along = seg.b - seg.a;
    const Vec2 n = Vec2{-along.y, along.x} * (1.0 / norm(along));
    auto reflect = [&](Vec2 p) { return p - n * (2.0 * dot(p - seg.a, n)); };
    // Landing spots mirror the chain; if they are taken the chain walks on
    // in its travel direction.
    const Vec2 new_dir = unit_from_angle(plan.heading);

    std::vector<Disc> obstacles;
    for (const auto& o : robots_) {
        if (std::find(plan.chain.begin(), plan.chain.end(), o.id) != plan.chain.end()) continue;
        obstacles.push_back({o.pose.pos, config_.body.radius(), o.id});
    }
    std::vector<Vec2> landing;
    for (int id : plan.chain) landing.push_back(reflect(robots_[static_cast<std::size_t>(id)].pose.pos));

    const double r = config_.body.radius();
    for (double shift = 0.0; shift <= kCrossShiftMax; shift += 1.0) {
        bool free = true;
        for (std::size_t k = 0; k < landing.size(); ++k) {
            const Vec2 p = landing[k] + new_dir * shift;
            const Vec2 from = robots_[static_cast<std::size_t>(plan.chain[k])].pose.pos;
            if (!config_.arena.barrier_between(from, p) || collides(p, r, config_.arena, obstacles)) {
                free = false;
                break;
            }
        }
        if (!free) continue;
        for (std::size_t k = 0; k < plan.chain.size(); ++k) {
            auto& m = robots_[static_cast<std::size_t>(plan.chain[k])];
            m.pose.pos = landing[k] + new_dir * shift;
            m.pose.heading = heading_of(new_dir);
            const double mah = m.battery.charge * m.battery.capacity_mah;
            m.reward = Robot::PendingReward{plan.gene, plan.formed_tick, mah, 0.0};
        }
        emit(plan.caller, "organism_cross", static_cast<double>(plan.chain.size()));
        if (plan.virtual_genome && plan.virtual_genome->find(plan.gene))
            update_on_success(*plan.virtual_genome, plan.gene,
                              crossing_cost_mah(plan.chain.size(), config_.battery.actuating_ma,
                                                config_.organism.params),
                              minutes(), config_.genome.weights);
        dissolve(plan, true);
        return;
    }
    emit(plan.caller, "cross_fail", 2.0);
    dissolve(plan, false);
}

void Simulation::step_plan(OrganismPlan& plan) {
    const auto& bp = config_.battery;
    const auto& op = config_.organism.params;
    auto alive = [&](int id) { return robots_[static_cast<std::size_t>(id)].mode != Mode::Dead; };

    std::erase_if(plan.pending, [&](int id) {
        if (alive(id)) return false;
        robots_[static_cast<std::size_t>(id)].plan = -1;
        return true;
    });
    if (!std::all_of(plan.chain.begin(), plan.chain.end(), alive)) {
        emit(plan.caller, "organism_abort", 1.0);
        dissolve(plan, false);
        return;
    }

    const double phase_min = static_cast<double>(tick_ - plan.phase_start) * dt_min_;

    if (plan.phase == OrganismPlan::Phase::Assembling) {
        recruit(plan);
        const double waited = static_cast<double>(tick_ - plan.started_tick) * dt_min_;
        if (waited > config_.organism.assembly_timeout_min) {
            emit(plan.caller, "organism_abort", 0.0);
            dissolve(plan, false);
            return;
        }
        const Vec2 dir = unit_from_angle(plan.heading);
        const double docked_draw = plan.chain.size() >= 2 ? bp.idle_ma * op.docked_idle_factor : bp.idle_ma;
        if (plan.chain.size() == 1 && !chain_fits(plan)) {
            // No room behind the caller yet: it walks on towards the barrier first.
            auto& c = robots_[static_cast<std::size_t>(plan.caller)];
            const auto res = step_motion(c.pose, MotionCommand::forward(), config_.dt_s, config_.arena,
                                         config_.body, discs(c.id));
            c.pose = res.pose;
            c.battery = discharge_step(c.battery, Activity::Moving, dt_min_, bp);
        } else {
            for (int id : plan.chain) {
                auto& m = robots_[static_cast<std::size_t>(id)];
                m.battery = discharge_step(m.battery, docked_draw, dt_min_);
            }
        }

        for (std::size_t k = 0; k < plan.pending.size(); ++k) {
            auto& m = robots_[static_cast<std::size_t>(plan.pending[k])];
            const Vec2 spot = chain_spot(plan, plan.chain.size() + k);
            const Vec2 rel = m.pose.pos - spot;
            const double behind = -dot(rel, dir);
            const double lateral = norm(rel + dir * behind);
            const bool in_line = lateral < 0.5 && behind >= -0.5 && behind <= kChainLeadIn + 0.5;
            const Vec2 goal = in_line ? spot : spot - dir * kChainLeadIn;

            if (k == 0 && distance(m.pose.pos, spot) <= kChainSnap) {
                const Pose snapped{spot, plan.heading};
                auto others = discs(m.id);
                std::erase_if(others, [&](const Disc& d) {
                    return std::find(plan.chain.begin(), plan.chain.end(), d.owner) != plan.chain.end();
                });
                const int tail = plan.chain.back();
                const Pose tail_pose = robots_[static_cast<std::size_t>(tail)].pose;
                if (!collides(spot, config_.body.radius(), config_.arena, others) &&
                    graph_.dock_robots(m.id, ConnectorLocation::Front, snapped, tail,
                                       ConnectorLocation::Back, tail_pose,
                                       config_.body.radius()) == DockRejection::None) {
                    m.pose = snapped;
                    m.battery = discharge_step(m.battery, docked_draw, dt_min_);
                    if (plan.chain.size() == 1) emit(plan.caller, "organism_join", static_cast<double>(plan.id));
                    plan.chain.push_back(m.id);
                    emit(m.id, "organism_join", static_cast<double>(plan.id));
                    plan.pending.erase(plan.pending.begin());
                    --k;
                    continue;
                }
            }

            const MotionCommand cmd = steer_to(m.pose, goal, m.contact, m.nav, m.rng);
            const auto res = step_motion(m.pose, cmd, config_.dt_s, config_.arena, config_.body, discs(m.id));
            m.pose = res.pose;
            m.contact = res.contact;
            m.battery = discharge_step(m.battery, Activity::Moving, dt_min_, bp);
        }

        if (plan.pending.empty() && plan.chain.size() >= static_cast<std::size_t>(plan.target_size)) {
            plan.phase = OrganismPlan::Phase::Moving;
            plan.phase_start = tick_;
            plan.formed_tick = tick_;
            plan.bus = EnergyBus::build(plan.chain, op.segment_size, op.cell_capacity_ah);
            std::vector<Genome> genomes;
            for (int id : plan.chain) genomes.push_back(robots_[static_cast<std::size_t>(id)].genome);
            plan.virtual_genome = merge_virtual_genome(genomes, "organism-" + std::to_string(plan.id),
                                                       config_.genome.weights);
            emit(plan.caller, "organism_form", static_cast<double>(plan.chain.size()));
            if (config_.genome.enabled) emit(plan.caller, "genome_divergence", divergence(genomes));
        }
        balance(plan);
        return;
    }

    if (plan.phase == OrganismPlan::Phase::Moving) {
        const auto& barrier = config_.arena.barriers[static_cast<std::size_t>(plan.barrier)];
        const Vec2 head = robots_[static_cast<std::size_t>(plan.chain.front())].pose.pos;
        const double gap = distance_to_segment(barrier.segment, head) - config_.body.radius();
        for (int id : plan.chain) {
            auto& m = robots_[static_cast<std::size_t>(id)];
            m.battery = discharge_step(m.battery, Activity::Moving, dt_min_, bp);
        }
        if (gap > kBarrierTouch) {
            const double reach = config_.body.speed * op.speed_factor * config_.dt_s;
            const bool moved = move_rigid(plan, std::min(reach, gap));
            if (!moved && phase_min > config_.strategy_params.approach_timeout_s / 60.0) {
                emit(plan.caller, "cross_fail", 0.0);
                dissolve(plan, false);
                return;
            }
        } else {
            double pooled = 0.0;
            for (int id : plan.bus.live_members()) {
                const auto& b = robots_[static_cast<std::size_t>(id)].battery;
                pooled += b.charge * b.capacity_mah;
            }
            const double required = crossing_cost_mah(plan.chain.size(), bp.actuating_ma, op);
            const auto outcome = cross_barrier(graph_, plan.chain, barrier, pooled, required, op);
            if (!outcome.crossed) {
                emit(plan.caller, "cross_fail", 1.0);
                dissolve(plan, false);
                return;
            }
            plan.phase = OrganismPlan::Phase::Actuating;
            plan.phase_start = tick_;
        }
        balance(plan);
        return;
    }

    // Actuating: the chain lifts itself over the barrier.
    for (int id : plan.chain) {
        auto& m = robots_[static_cast<std::size_t>(id)];
        m.battery = discharge_step(m.battery, Activity::Actuating, dt_min_, bp);
    }
    balance(plan);
    if (phase_min + dt_min_ >= op.crossing_minutes - 1e-9) cross(plan);
}

void Simulation::organisms_tick() {
    for (auto& [id, plan] : plans_) {
        if (plan.chain.empty()) continue;
        step_plan(plan);
    }
    std::erase_if(plans_, [](const auto& kv) { return kv.second.chain.empty(); });
}

// ---------------------------------------------------------------------------

void Simulation::exchanges() {
    const auto all = discs();
    const double range = config_.arena.signal_range;
    for (std::size_t i = 0; i < robots_.size(); ++i) {
        auto& a = robots_[i];
        if (a.mode == Mode::Dead) continue;
        for (std::size_t j = i + 1; j < robots_.size(); ++j) {
            auto& b = robots_[j];
            if (b.mode == Mode::Dead) continue;
            if (distance(a.pose.pos, b.pose.pos) > range) continue;
            const auto key = std::make_pair(a.id, b.id);
            const auto it = last_exchange_.find(key);
            if (it != last_exchange_.end() &&
                static_cast<double>(tick_ - it->second) * dt_min_ < config_.genome.exchange_cooldown_min)
                continue;
            if (!signal_visible(a.pose.pos, b.pose.pos, range, config_.arena, all, a.id, b.id)) continue;
            auto [ga, gb] = exchange(a.genome, b.genome, a.rng, config_.genome.weights, minutes());
            a.genome = std::move(ga);
            b.genome = std::move(gb);
            last_exchange_[key] = tick_;
            emit(a.id, "exchange", static_cast<double>(b.id));
        }
    }
}

void Simulation::account() {
    for (auto& r : robots_) {
        const Bin b = bin_of(r.mode);
        if (tick_ == 0 || b != r.bin) emit(r.id, to_string(b));
        r.bin = b;
        switch (b) {
            case Bin::Task: ++r.ledger.task; break;
            case Bin::Recharging: ++r.ledger.recharging; break;
            case Bin::Dead: ++r.ledger.dead; break;
        }
    }
}

void Simulation::sample() {
    const double elapsed_s = static_cast<double>(tick_) * config_.dt_s;
    const int minute = static_cast<int>(std::floor(elapsed_s / 60.0 + 1e-9));
    const int last = timeseries_.empty() ? 0 : timeseries_.back().minute;
    if (minute <= last) return;
    TimeSample s;
    s.minute = minute;
    for (const auto& r : robots_) s.alive += r.mode != Mode::Dead ? 1 : 0;
    for (const auto& st : stations_) s.occupied_slots += st.occupied_count();
    for (const auto& q : queues_) s.queued += static_cast<int>(q.size());
    timeseries_.push_back(s);
}

void Simulation::check_invariants() const {
    const double r = config_.body.radius();
    for (const auto& a : robots_) {
        if (!config_.arena.inside(a.pose.pos, r - 1e-6))
            throw ContractViolation("robot " + std::to_string(a.id) + " left the arena");
        const auto& l = a.ledger;
        if (l.task + l.recharging + l.dead != tick_)
            throw ContractViolation("ledger of robot " + std::to_string(a.id) + " does not sum to elapsed time");
        if (a.battery.charge < 0.0 || a.battery.charge > 1.0)
            throw ContractViolation("charge out of range");
        for (const auto& b : robots_) {
            if (b.id <= a.id) continue;
            if (distance(a.pose.pos, b.pose.pos) < 2.0 * r - 1e-6)
                throw ContractViolation("robots " + std::to_string(a.id) + " and " +
                                        std::to_string(b.id) + " overlap");
        }
    }
    for (const auto& st : stations_) {
        for (const auto& s : st.slots) {
            if (!s.occupant) continue;
            const auto& o = robots_.at(static_cast<std::size_t>(*s.occupant));
            if (o.mode != Mode::Docking && o.mode != Mode::Charging && o.mode != Mode::Dead)
                throw ContractViolation("slot held by robot " + std::to_string(o.id) + " in mode " +
                                        to_string(o.mode));
        }
    }
    for (const auto& q : queues_)
        for (int id : q)
            if (robots_.at(static_cast<std::size_t>(id)).mode != Mode::Queued)
                throw ContractViolation("queue holds robot " + std::to_string(id) + " not in Queued mode");
    graph_.check_invariants();
}

}  // namespace forage
