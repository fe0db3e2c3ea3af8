#pragma once

#include "manet/engine.hpp"

#include <vector>

namespace manet
{

struct CbrFlow
{
    std::uint32_t id = 0;
    NodeId src = 0;
    NodeId dest = 0;
    std::size_t packetSize = 512;
    SimTime interval = 0.25;
    SimTime start = 0.0;
    SimTime stop = 0.0;

    /// Number of packets the flow offers over [start, stop).
    std::uint64_t packets_offered() const noexcept;
    /// Send time of the k-th packet (0-based).
    SimTime tick_time(std::uint64_t k) const noexcept
    {
        return start + static_cast<double>(k) * interval;
    }
};

struct WorkloadSpec
{
    std::size_t flows = 10;
    SimTime interval = 0.25; // 4 packets/s
    std::size_t packetSize = 512;
    SimTime startMin = 5.0;
    SimTime startMax = 15.0;
    SimTime stop = 125.0;
};

/// Draws distinct (src, dest) pairs with src != dest; at most n(n-1) flows.
std::vector<CbrFlow> generate_flows(const WorkloadSpec& spec, std::size_t nodes, RngStream& rng);

} // namespace manet
