#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forage/arena.hpp"

namespace forage {

enum class ConnectorLocation : std::uint8_t { Front, LeftWheel, RightWheel, Back };
enum class ConnectorKind { Male, Female };

inline constexpr ConnectorLocation kConnectorLocations[] = {
    ConnectorLocation::Front, ConnectorLocation::LeftWheel, ConnectorLocation::RightWheel,
    ConnectorLocation::Back};

const char* to_string(ConnectorLocation loc);

/// One male connector on the front, female ones in both wheels and the back.
ConnectorKind kind_of(ConnectorLocation loc);
/// Wheel connectors are rotational joints.
bool is_rotational(ConnectorLocation loc);
/// Direction of the connector relative to the robot's heading.
double connector_bearing(ConnectorLocation loc);

struct ConnectorEnd {
    int robot = -1;
    ConnectorLocation location = ConnectorLocation::Front;

    auto operator<=>(const ConnectorEnd&) const = default;
};

/// An engaged male/female pair.
struct Link {
    ConnectorEnd male;
    ConnectorEnd female;

    auto operator<=>(const Link&) const = default;
};

enum class DockRejection {
    None,
    UnknownRobot,
    SameRobot,
    IncompatibleKinds,
    ConnectorOccupied,
    Misaligned,
};

const char* to_string(DockRejection r);

struct ConnectorAlignment {
    double distance_tolerance_cm = 0.6;
    double angle_tolerance_deg = 15.0;
};

/// Both connector points within tolerance and facing each other.
bool connectors_aligned(const Pose& a, ConnectorLocation a_loc, const Pose& b,
                        ConnectorLocation b_loc, double body_radius,
                        const ConnectorAlignment& tol = {});

/// Connector graph over every robot in the world. Organisms are the connected
/// components with at least two robots; singletons are swarm robots.
class AggregationGraph {
public:
    void add_robot(int id);
    bool has_robot(int id) const;

    /// Hooks `a`'s connector to `b`'s. With poses given, the connectors must
    /// also be physically aligned. Returns DockRejection::None on success.
    DockRejection dock_robots(int a, ConnectorLocation a_loc, int b, ConnectorLocation b_loc);
    DockRejection dock_robots(int a, ConnectorLocation a_loc, const Pose& a_pose, int b,
                              ConnectorLocation b_loc, const Pose& b_pose, double body_radius,
                              const ConnectorAlignment& tol = {});

    /// Removes a link; returns the organisms the two endpoints belong to
    /// afterwards (one if still connected, two on a split; singletons included).
    std::vector<std::vector<int>> undock_robots(const Link& link);

    /// Removes every link touching the members of `robot`'s organism.
    void disaggregate(int robot);

    std::optional<ConnectorEnd> engaged_with(ConnectorEnd end) const;
    const std::vector<Link>& links() const { return links_; }
    std::vector<Link> links_within(std::span<const int> members) const;

    /// Component containing `robot`, sorted by id.
    std::vector<int> component_of(int robot) const;
    /// Components of two or more robots, each sorted, ordered by smallest id.
    std::vector<std::vector<int>> organisms() const;
    std::size_t organism_count() const { return organisms().size(); }
    bool in_organism(int robot) const;

    void check_invariants() const;

private:
    std::vector<int> robots_;
    std::vector<Link> links_;
};

/// Internal articulation degrees of freedom: each engaged wheel connector
/// adds two, and every robot joined beyond the first adds one pitch axis.
int joint_dof(const AggregationGraph& graph, std::span<const int> members);

/// Robots on the longest simple path through the organism.
int longest_chain(const AggregationGraph& graph, std::span<const int> members);

struct OrganismParams {
    // Chain needed to overstep a barrier: height_class + this.
    int chain_margin = 2;
    double crossing_minutes = 1.0;
    double cell_capacity_ah = 0.25;
    double discharge_c_rate = 4.0;
    int segment_size = 5;
    double docked_idle_factor = 0.5;
    double speed_factor = 0.6;
};

enum class SegmentState { Live, Isolated };

struct BusSegment {
    std::vector<int> members;
    SegmentState state = SegmentState::Live;
};

/// Shared energy bus of an organism: cells in Live segments are in parallel.
struct EnergyBus {
    std::vector<BusSegment> segments;
    double cell_capacity_ah = 0.25;

    /// Consecutive runs of `segment_size` robots in join order.
    static EnergyBus build(std::span<const int> join_order, int segment_size,
                           double cell_capacity_ah);

    std::vector<int> live_members() const;
    int segment_of(int robot) const;  // -1 if absent
};

struct PooledEnergy {
    double capacity_ah = 0.0;
    double max_current_a = 0.0;
};

PooledEnergy pool_energy(const EnergyBus& bus, double c_rate = 4.0);

/// Switches off the segment holding `failed_robot`; the rest stays live.
EnergyBus isolate_fault(EnergyBus bus, int failed_robot);

int min_chain_length(const Barrier& barrier, const OrganismParams& params = {});

struct CrossingOutcome {
    bool crossed = false;
    std::string reason;
};

/// Whether the organism can overstep `barrier`: it needs a simple chain of
/// height_class + chain_margin robots and at least `required_mah` in its pool.
CrossingOutcome cross_barrier(const AggregationGraph& graph, std::span<const int> members,
                              const Barrier& barrier, double pooled_mah, double required_mah,
                              const OrganismParams& params = {});

/// Energy for one crossing: every member actuating for the crossing time.
double crossing_cost_mah(std::size_t members, double actuating_ma, const OrganismParams& params);

}  // namespace forage
