#include "manet/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace manet
{

double distance(const Position& a, const Position& b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Position MobilityLeg::position_at(SimTime t) const noexcept
{
    if (t <= departAt)
        return origin;
    const SimTime travel = travel_time();
    if (travel <= 0.0)
        return destination;
    const double f = std::min(1.0, (t - departAt) / travel);
    return Position{origin.x + f * (destination.x - origin.x),
                    origin.y + f * (destination.y - origin.y)};
}

std::vector<Position> init_positions(std::size_t n, const Area& area, RngStream& rng)
{
    std::vector<Position> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = rng.uniform(0.0, area.width);
        const double y = rng.uniform(0.0, area.height);
        out.push_back(Position{x, y});
    }
    return out;
}

MobilityLeg next_leg(const Position& origin, SimTime now, const RandomWaypointParams& params,
                     RngStream& rng)
{
    MobilityLeg leg;
    leg.origin = origin;
    leg.destination.x = rng.uniform(0.0, params.area.width);
    leg.destination.y = rng.uniform(0.0, params.area.height);
    leg.speed = rng.uniform(params.speedMin, params.speedMax);
    leg.start = now;
    leg.pauseUntil = now + params.pause;
    leg.departAt = leg.pauseUntil;
    return leg;
}

RandomWaypoint::RandomWaypoint(std::size_t nodes, RandomWaypointParams params, SimTime horizon,
                               std::uint64_t rootSeed)
    : params_(params), horizon_(horizon), legs_(nodes)
{
    RngStream placement(rootSeed, RngPurpose::Placement, kSystemTarget);
    const auto initial = init_positions(nodes, params_.area, placement);
    streams_.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
    {
        streams_.emplace_back(rootSeed, RngPurpose::Mobility, i);
        legs_[i].push_back(next_leg(initial[i], 0.0, params_, streams_[i]));
    }
}

void RandomWaypoint::extend_to(NodeId node, SimTime t)
{
    auto& legs = legs_.at(node);
    while (legs.back().arrive_at() < t)
    {
        const MobilityLeg& last = legs.back();
        legs.push_back(next_leg(last.destination, last.arrive_at(), params_, streams_[node]));
    }
}

const MobilityLeg& RandomWaypoint::leg_at(NodeId node, SimTime t)
{
    if (t > horizon_)
        throw MobilityError("position query at t=" + std::to_string(t) + " beyond horizon " +
                            std::to_string(horizon_));
    extend_to(node, t);
    const auto& legs = legs_[node];
    // Last leg whose start is <= t.
    auto it = std::upper_bound(legs.begin(), legs.end(), t,
                               [](SimTime v, const MobilityLeg& l) { return v < l.start; });
    if (it != legs.begin())
        --it;
    return *it;
}

Position RandomWaypoint::position_at(NodeId node, SimTime t)
{
    Position p = leg_at(node, t).position_at(t);
    p.x = std::clamp(p.x, 0.0, params_.area.width);
    p.y = std::clamp(p.y, 0.0, params_.area.height);
    return p;
}

void RandomWaypoint::attach(Engine& engine, TransitionObserver observer)
{
    observer_ = std::move(observer);
    for (NodeId n = 0; n < legs_.size(); ++n)
        schedule_transition(engine, n, 0);
}

void RandomWaypoint::schedule_transition(Engine& engine, NodeId node, std::size_t legIndex)
{
    auto& legs = legs_[node];
    if (legIndex >= legs.size())
    {
        const MobilityLeg& last = legs.back();
        legs.push_back(next_leg(last.destination, last.arrive_at(), params_, streams_[node]));
    }
    const SimTime at = legs[legIndex].start;
    if (at > horizon_ || at < engine.now())
        return;
    engine.schedule(at, node, EventKind::MobilityLeg, [this, &engine, node, legIndex] {
        if (observer_)
            observer_(node, legs_[node][legIndex].start, legs_[node][legIndex].origin);
        schedule_transition(engine, node, legIndex + 1);
    });
}

} // namespace manet
