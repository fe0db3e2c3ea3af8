#pragma once

#include "manet/engine.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace manet
{

struct Position
{
    double x = 0.0;
    double y = 0.0;
};

double distance(const Position& a, const Position& b) noexcept;

struct Area
{
    double width = 500.0;
    double height = 500.0;

    bool contains(const Position& p) const noexcept
    {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

struct RandomWaypointParams
{
    Area area;
    SimTime pause = 10.0;
    double speedMin = 1.0;
    double speedMax = 20.0;
};

/// A pause at `origin` followed by straight-line travel to `destination`.
struct MobilityLeg
{
    Position origin;
    Position destination;
    double speed = 1.0;
    SimTime start = 0.0;      ///< node reached origin
    SimTime pauseUntil = 0.0; ///< end of the pause at origin
    SimTime departAt = 0.0;   ///< equals pauseUntil

    SimTime travel_time() const noexcept { return distance(origin, destination) / speed; }
    SimTime arrive_at() const noexcept { return departAt + travel_time(); }
    Position position_at(SimTime t) const noexcept;
};

class MobilityError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// Draws each node's position uniformly over the area, in node order.
std::vector<Position> init_positions(std::size_t n, const Area& area, RngStream& rng);

/// Draws the next Random Waypoint leg for a node idle at `origin` since `now`.
MobilityLeg next_leg(const Position& origin, SimTime now, const RandomWaypointParams& params,
                     RngStream& rng);

class MobilityModel
{
public:
    virtual ~MobilityModel() = default;
    virtual std::size_t node_count() const noexcept = 0;
    virtual Position position_at(NodeId node, SimTime t) = 0;

    /// Leg-transition hook used for trace export; static models never fire it.
    using TransitionObserver = std::function<void(NodeId, SimTime, const Position&)>;
    virtual void attach(Engine& engine, TransitionObserver observer) = 0;
};

class StaticMobility final : public MobilityModel
{
public:
    explicit StaticMobility(std::vector<Position> positions) : positions_(std::move(positions)) {}

    std::size_t node_count() const noexcept override { return positions_.size(); }
    Position position_at(NodeId node, SimTime) override { return positions_.at(node); }
    void attach(Engine&, TransitionObserver) override {}

    void move(NodeId node, Position p) { positions_.at(node) = p; }

private:
    std::vector<Position> positions_;
};

/// Random Waypoint with lazily generated legs. Each node draws from its own
/// (Mobility, node) stream, and initial placement from (Placement, system),
/// so the trace depends only on the root seed and the parameters.
class RandomWaypoint final : public MobilityModel
{
public:
    RandomWaypoint(std::size_t nodes, RandomWaypointParams params, SimTime horizon,
                   std::uint64_t rootSeed);

    std::size_t node_count() const noexcept override { return legs_.size(); }

    /// Throws MobilityError for t beyond the horizon.
    Position position_at(NodeId node, SimTime t) override;
    void attach(Engine& engine, TransitionObserver observer) override;

    const MobilityLeg& leg_at(NodeId node, SimTime t);
    const RandomWaypointParams& params() const noexcept { return params_; }

private:
    void extend_to(NodeId node, SimTime t);
    void schedule_transition(Engine& engine, NodeId node, std::size_t legIndex);

    RandomWaypointParams params_;
    SimTime horizon_;
    std::vector<RngStream> streams_;
    std::vector<std::vector<MobilityLeg>> legs_;
    TransitionObserver observer_;
};

} // namespace manet
