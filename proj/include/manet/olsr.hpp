#pragma once

#include "manet/protocol.hpp"

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace manet::olsr
{

struct Config
{
    SimTime helloInterval = 2.0;
    SimTime tcInterval = 5.0;
    SimTime neighborHold = 6.0;  // 3 x hello
    SimTime topologyHold = 15.0; // 3 x TC
};

/// Two-hop sets keyed by the symmetric neighbor that reaches them.
using TwoHopMap = std::map<NodeId, std::set<NodeId>>;

/// Greedy MPR selection: first every neighbor that is the only way to reach
/// some strict two-hop node, then repeatedly the neighbor covering the most
/// still-uncovered nodes (ties to the lower id).
std::set<NodeId> select_mprs(NodeId self, const TwoHopMap& twoHop);

/// Strict two-hop neighborhood: reachable through a symmetric neighbor, not
/// itself a neighbor, not self.
std::set<NodeId> strict_two_hop(NodeId self, const TwoHopMap& twoHop);

class Agent final : public RoutingAgent
{
public:
    using MprObserver =
        std::function<void(NodeId self, const TwoHopMap& twoHop, const std::set<NodeId>& mprs)>;

    struct NeighborState
    {
        bool symmetric = false;
        SimTime expiry = 0.0;
    };
    struct TopologyRecord
    {
        std::uint32_t ansn = 0;
        SimTime expiry = 0.0;
    };

    Agent(NodeId self, Services& services, Config config = {});

    Protocol protocol() const noexcept override { return Protocol::Olsr; }
    void start() override;
    SendOutcome send_data(DataPacket packet) override;
    std::optional<RouteEntry> route_lookup(NodeId dest, SimTime t) override;

    void emit_hello();
    void emit_tc();
    const std::set<NodeId>& compute_mprs();

    /// Builds the HELLO this node would send now.
    Hello make_hello();

    const std::map<NodeId, NeighborState>& neighbors() const noexcept { return neighbors_; }
    TwoHopMap two_hop() const;
    const std::set<NodeId>& mprs() const noexcept { return mprs_; }
    std::set<NodeId> mpr_selectors() const;
    const std::map<std::pair<NodeId, NodeId>, TopologyRecord>& topology() const noexcept
    {
        return topology_;
    }
    std::uint32_t ansn() const noexcept { return ansn_; }
    std::uint64_t tc_forwards() const noexcept { return tcForwards_; }
    std::uint64_t hellos_sent() const noexcept { return hellosSent_; }
    std::uint64_t tcs_originated() const noexcept { return tcsOriginated_; }

    void set_mpr_observer(MprObserver observer) { observer_ = std::move(observer); }

private:
    void on_frame(const Frame& frame) override;
    void process_hello(const Hello& hello, NodeId sender);
    void process_tc(const Tc& tc, NodeId sender);
    void handle_data(const DataPacket& packet);
    void on_link_failure(NodeId neighbor);
    void purge(SimTime t);
    void compute_routing_table();
    void hello_timer();
    void tc_timer();

    Config config_;
    std::map<NodeId, NeighborState> neighbors_;
    std::map<NodeId, std::pair<std::set<NodeId>, SimTime>> twoHop_;
    std::set<NodeId> mprs_;
    std::map<NodeId, SimTime> selectors_;
    std::map<std::pair<NodeId, NodeId>, TopologyRecord> topology_;
    std::map<NodeId, std::uint32_t> latestAnsn_;
    std::set<std::pair<NodeId, std::uint32_t>> processed_;
    std::set<std::pair<NodeId, std::uint32_t>> forwarded_;
    std::uint32_t ansn_ = 0;
    std::uint32_t msgSeq_ = 0;
    std::vector<NodeId> lastAdvertised_;
    std::map<NodeId, RouteEntry> routes_;
    bool routesDirty_ = true;
    bool mprDirty_ = true;
    std::uint64_t tcForwards_ = 0;
    std::uint64_t hellosSent_ = 0;
    std::uint64_t tcsOriginated_ = 0;
    MprObserver observer_;
};

} // namespace manet::olsr
