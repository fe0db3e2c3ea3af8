#pragma once

// Helpers shared by the unit tests and the acceptance runner: a BFS oracle,
// random static topologies and small static simulations.

#include "manet/engine.hpp"
#include "manet/mobility.hpp"
#include "manet/simulation.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <vector>

namespace manet::testing
{

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

using Adjacency = std::vector<std::vector<NodeId>>;

/// Unit-disk graph computed with plain pairwise distances.
inline Adjacency unit_disk(const std::vector<Position>& pos, double range)
{
    Adjacency adj(pos.size());
    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = 0; b < pos.size(); ++b)
        {
            if (a == b)
                continue;
            const double dx = pos[a].x - pos[b].x;
            const double dy = pos[a].y - pos[b].y;
            if (std::sqrt(dx * dx + dy * dy) <= range)
                adj[a].push_back(static_cast<NodeId>(b));
        }
    return adj;
}

inline std::vector<std::uint32_t> bfs(const Adjacency& adj, NodeId src)
{
    std::vector<std::uint32_t> dist(adj.size(), kUnreachable);
    std::deque<NodeId> q{src};
    dist[src] = 0;
    while (!q.empty())
    {
        const NodeId u = q.front();
        q.pop_front();
        for (NodeId v : adj[u])
            if (dist[v] == kUnreachable)
            {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    return dist;
}

inline bool connected(const Adjacency& adj)
{
    if (adj.empty())
        return true;
    for (auto d : bfs(adj, 0))
        if (d == kUnreachable)
            return false;
    return true;
}

/// Rejection-samples node positions until the unit-disk graph is connected.
/// The square shrinks with n so graphs stay multi-hop but connectable.
inline std::vector<Position> random_connected(std::size_t n, std::uint64_t seed,
                                              double range = 250.0)
{
    const double side = range * (1.0 + std::sqrt(static_cast<double>(n)) / 2.0);
    RngStream rng(seed, RngPurpose::Topology, n);
    for (;;)
    {
        std::vector<Position> pos(n);
        for (auto& p : pos)
            p = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
        if (connected(unit_disk(pos, range)))
            return pos;
    }
}

/// Nodes spaced `gap` metres apart on the x axis.
inline std::vector<Position> line(std::size_t n, double gap = 200.0)
{
    std::vector<Position> pos(n);
    for (std::size_t i = 0; i < n; ++i)
        pos[i] = {gap * static_cast<double>(i), 0.0};
    return pos;
}

inline std::unique_ptr<Simulation> static_sim(Protocol protocol, std::vector<Position> pos,
                                              SimulationSetup setup = {})
{
    setup.protocol = protocol;
    return std::make_unique<Simulation>(setup,
                                        std::make_unique<StaticMobility>(std::move(pos)));
}

} // namespace manet::testing
