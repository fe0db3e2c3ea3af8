#include "manet/workload.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace manet
{

std::uint64_t CbrFlow::packets_offered() const noexcept
{
    if (!(stop > start) || interval <= 0)
        return 0;
    std::uint64_t k = static_cast<std::uint64_t>(std::ceil((stop - start) / interval));
    // Guard against rounding in the division.
    while (k > 0 && tick_time(k - 1) >= stop)
        --k;
    while (tick_time(k) < stop)
        ++k;
    return k;
}

std::vector<CbrFlow> generate_flows(const WorkloadSpec& spec, std::size_t nodes, RngStream& rng)
{
    std::vector<CbrFlow> flows;
    if (nodes < 2)
        return flows;
    const std::size_t maxPairs = nodes * (nodes - 1);
    const std::size_t count = std::min(spec.flows, maxPairs);
    std::set<std::pair<NodeId, NodeId>> used;
    while (flows.size() < count)
    {
        const auto src = static_cast<NodeId>(rng.below(nodes));
        const auto dest = static_cast<NodeId>(rng.below(nodes));
        if (src == dest || !used.insert({src, dest}).second)
            continue;
        CbrFlow f;
        f.id = static_cast<std::uint32_t>(flows.size());
        f.src = src;
        f.dest = dest;
        f.packetSize = spec.packetSize;
        f.interval = spec.interval;
        f.start = rng.uniform(spec.startMin, spec.startMax);
        f.stop = spec.stop;
        flows.push_back(f);
    }
    return flows;
}

} // namespace manet
