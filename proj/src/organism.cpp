#include "forage/organism.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

#include "forage/errors.hpp"

namespace forage {

const char* to_string(ConnectorLocation loc) {
    switch (loc) {
        case ConnectorLocation::Front: return "front";
        case ConnectorLocation::LeftWheel: return "left_wheel";
        case ConnectorLocation::RightWheel: return "right_wheel";
        case ConnectorLocation::Back: return "back";
    }
    return "?";
}

ConnectorKind kind_of(ConnectorLocation loc) {
    return loc == ConnectorLocation::Front ? ConnectorKind::Male : ConnectorKind::Female;
}

bool is_rotational(ConnectorLocation loc) {
    return loc == ConnectorLocation::LeftWheel || loc == ConnectorLocation::RightWheel;
}

double connector_bearing(ConnectorLocation loc) {
    switch (loc) {
        case ConnectorLocation::Front: return 0.0;
        case ConnectorLocation::LeftWheel: return std::numbers::pi / 2.0;
        case ConnectorLocation::RightWheel: return -std::numbers::pi / 2.0;
        case ConnectorLocation::Back: return std::numbers::pi;
    }
    return 0.0;
}

const char* to_string(DockRejection r) {
    switch (r) {
        case DockRejection::None: return "none";
        case DockRejection::UnknownRobot: return "unknown_robot";
        case DockRejection::SameRobot: return "same_robot";
        case DockRejection::IncompatibleKinds: return "incompatible_kinds";
        case DockRejection::ConnectorOccupied: return "connector_occupied";
        case DockRejection::Misaligned: return "misaligned";
    }
    return "?";
}

bool connectors_aligned(const Pose& a, ConnectorLocation a_loc, const Pose& b,
                        ConnectorLocation b_loc, double body_radius,
                        const ConnectorAlignment& tol) {
    const double dir_a = a.heading + connector_bearing(a_loc);
    const double dir_b = b.heading + connector_bearing(b_loc);
    const Vec2 pa = a.pos + unit_from_angle(dir_a) * body_radius;
    const Vec2 pb = b.pos + unit_from_angle(dir_b) * body_radius;
    if (distance(pa, pb) > tol.distance_tolerance_cm) return false;
    const double facing = std::abs(angle_diff(dir_a, dir_b + std::numbers::pi));
    return facing <= tol.angle_tolerance_deg * std::numbers::pi / 180.0;
}

void AggregationGraph::add_robot(int id) {
    if (has_robot(id)) return;
    robots_.insert(std::upper_bound(robots_.begin(), robots_.end(), id), id);
}

bool AggregationGraph::has_robot(int id) const {
    return std::binary_search(robots_.begin(), robots_.end(), id);
}

std::optional<ConnectorEnd> AggregationGraph::engaged_with(ConnectorEnd end) const {
    for (const auto& l : links_) {
        if (l.male == end) return l.female;
        if (l.female == end) return l.male;
    }
    return std::nullopt;
}

DockRejection AggregationGraph::dock_robots(int a, ConnectorLocation a_loc, int b,
                                            ConnectorLocation b_loc) {
    if (!has_robot(a) || !has_robot(b)) return DockRejection::UnknownRobot;
    if (a == b) return DockRejection::SameRobot;
    if (kind_of(a_loc) == kind_of(b_loc)) return DockRejection::IncompatibleKinds;
    const ConnectorEnd ea{a, a_loc}, eb{b, b_loc};
    if (engaged_with(ea) || engaged_with(eb)) return DockRejection::ConnectorOccupied;
    if (kind_of(a_loc) == ConnectorKind::Male) links_.push_back({ea, eb});
    else links_.push_back({eb, ea});
    return DockRejection::None;
}

DockRejection AggregationGraph::dock_robots(int a, ConnectorLocation a_loc, const Pose& a_pose,
                                            int b, ConnectorLocation b_loc, const Pose& b_pose,
                                            double body_radius, const ConnectorAlignment& tol) {
    if (!has_robot(a) || !has_robot(b)) return DockRejection::UnknownRobot;
    if (a == b) return DockRejection::SameRobot;
    if (kind_of(a_loc) == kind_of(b_loc)) return DockRejection::IncompatibleKinds;
    if (engaged_with({a, a_loc}) || engaged_with({b, b_loc}))
        return DockRejection::ConnectorOccupied;
    if (!connectors_aligned(a_pose, a_loc, b_pose, b_loc, body_radius, tol))
        return DockRejection::Misaligned;
    return dock_robots(a, a_loc, b, b_loc);
}

std::vector<std::vector<int>> AggregationGraph::undock_robots(const Link& link) {
    auto it = std::find(links_.begin(), links_.end(), link);
    if (it == links_.end()) throw ContractViolation("undock of a link that does not exist");
    links_.erase(it);
    auto first = component_of(link.male.robot);
    if (std::binary_search(first.begin(), first.end(), link.female.robot)) return {first};
    return {first, component_of(link.female.robot)};
}

void AggregationGraph::disaggregate(int robot) {
    const auto members = component_of(robot);
    std::erase_if(links_, [&](const Link& l) {
        return std::binary_search(members.begin(), members.end(), l.male.robot);
    });
}

std::vector<Link> AggregationGraph::links_within(std::span<const int> members) const {
    std::set<int> m(members.begin(), members.end());
    std::vector<Link> out;
    for (const auto& l : links_)
        if (m.count(l.male.robot) && m.count(l.female.robot)) out.push_back(l);
    return out;
}

std::vector<int> AggregationGraph::component_of(int robot) const {
    std::set<int> seen{robot};
    std::vector<int> frontier{robot};
    while (!frontier.empty()) {
        const int r = frontier.back();
        frontier.pop_back();
        for (const auto& l : links_) {
            int other = -1;
            if (l.male.robot == r) other = l.female.robot;
            else if (l.female.robot == r) other = l.male.robot;
            if (other >= 0 && seen.insert(other).second) frontier.push_back(other);
        }
    }
    return {seen.begin(), seen.end()};
}

std::vector<std::vector<int>> AggregationGraph::organisms() const {
    std::vector<std::vector<int>> out;
    std::set<int> assigned;
    for (int r : robots_) {
        if (assigned.count(r)) continue;
        auto comp = component_of(r);
        assigned.insert(comp.begin(), comp.end());
        if (comp.size() >= 2) out.push_back(std::move(comp));
    }
    return out;
}

bool AggregationGraph::in_organism(int robot) const {
    for (const auto& l : links_)
        if (l.male.robot == robot || l.female.robot == robot) return true;
    return false;
}

void AggregationGraph::check_invariants() const {
    std::set<ConnectorEnd> used;
    for (const auto& l : links_) {
        if (kind_of(l.male.location) != ConnectorKind::Male ||
            kind_of(l.female.location) != ConnectorKind::Female)
            throw ContractViolation("link does not pair male with female");
        if (l.male.robot == l.female.robot) throw ContractViolation("robot linked to itself");
        if (!has_robot(l.male.robot) || !has_robot(l.female.robot))
            throw ContractViolation("link to unknown robot");
        if (!used.insert(l.male).second || !used.insert(l.female).second)
            throw ContractViolation("connector engaged twice");
    }
}

int joint_dof(const AggregationGraph& graph, std::span<const int> members) {
    if (members.size() < 2) return 0;
    int wheel_joints = 0;
    for (const auto& l : graph.links_within(members)) {
        if (is_rotational(l.male.location)) ++wheel_joints;
        if (is_rotational(l.female.location)) ++wheel_joints;
    }
    const int pitch_axes = static_cast<int>(members.size()) - 1;
    return 2 * wheel_joints + pitch_axes;
}

int longest_chain(const AggregationGraph& graph, std::span<const int> members) {
    if (members.empty()) return 0;
    std::map<int, std::vector<int>> adj;
    for (int m : members) adj[m];
    for (const auto& l : graph.links_within(members)) {
        adj[l.male.robot].push_back(l.female.robot);
        adj[l.female.robot].push_back(l.male.robot);
    }
    int best = 1;
    std::set<int> on_path;
    std::function<void(int, int)> dfs = [&](int node, int length) {
        best = std::max(best, length);
        if (best == static_cast<int>(members.size())) return;
        for (int next : adj[node]) {
            if (on_path.count(next)) continue;
            on_path.insert(next);
            dfs(next, length + 1);
            on_path.erase(next);
        }
    };
    for (int start : members) {
        on_path = {start};
        dfs(start, 1);
    }
    return best;
}

EnergyBus EnergyBus::build(std::span<const int> join_order, int segment_size,
                           double cell_capacity_ah) {
    if (segment_size < 1) throw ContractViolation("segment size must be positive");
    EnergyBus bus;
    bus.cell_capacity_ah = cell_capacity_ah;
    for (std::size_t i = 0; i < join_order.size(); ++i) {
        if (i % static_cast<std::size_t>(segment_size) == 0) bus.segments.emplace_back();
        bus.segments.back().members.push_back(join_order[i]);
    }
    return bus;
}

std::vector<int> EnergyBus::live_members() const {
    std::vector<int> out;
    for (const auto& s : segments)
        if (s.state == SegmentState::Live) out.insert(out.end(), s.members.begin(), s.members.end());
    return out;
}

int EnergyBus::segment_of(int robot) const {
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (std::find(segments[i].members.begin(), segments[i].members.end(), robot) !=
            segments[i].members.end())
            return static_cast<int>(i);
    return -1;
}

PooledEnergy pool_energy(const EnergyBus& bus, double c_rate) {
    std::size_t live = 0;
    for (const auto& s : bus.segments)
        if (s.state == SegmentState::Live) live += s.members.size();
    PooledEnergy p;
    p.capacity_ah = static_cast<double>(live) * bus.cell_capacity_ah;
    p.max_current_a = c_rate * p.capacity_ah;
    return p;
}

EnergyBus isolate_fault(EnergyBus bus, int failed_robot) {
    const int seg = bus.segment_of(failed_robot);
    if (seg < 0) throw ContractViolation("faulty robot is not on this bus");
    bus.segments[static_cast<std::size_t>(seg)].state = SegmentState::Isolated;
    return bus;
}

int min_chain_length(const Barrier& barrier, const OrganismParams& params) {
    return barrier.height_class + params.chain_margin;
}

CrossingOutcome cross_barrier(const AggregationGraph& graph, std::span<const int> members,
                              const Barrier& barrier, double pooled_mah, double required_mah,
                              const OrganismParams& params) {
    if (!barrier.passable_by_organism) return {false, "barrier impassable"};
    if (members.size() < 2) return {false, "not an organism"};
    if (longest_chain(graph, members) < min_chain_length(barrier, params))
        return {false, "chain too short"};
    if (pooled_mah < required_mah) return {false, "insufficient pooled energy"};
    return {true, ""};
}

double crossing_cost_mah(std::size_t members, double actuating_ma, const OrganismParams& params) {
    return static_cast<double>(members) * actuating_ma * params.crossing_minutes / 60.0;
}

}  // namespace forage
