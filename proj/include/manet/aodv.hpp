#pragma once

#include "manet/protocol.hpp"

#include <functional>
#include <map>
#include <utility>

namespace manet::aodv
{

struct Config
{
    SimTime helloInterval = 1.0;
    std::uint32_t allowedHelloLoss = 3;
    SimTime activeRouteTimeout = 10.0;
    SimTime seenCacheExpiry = 5.0;
    std::uint32_t rreqRetries = 2;
    SimTime retryBase = 1.0;
    std::uint32_t netDiameter = 35;
    bool intermediateReply = true;
};

struct Route
{
    NodeId nextHop = 0;
    std::uint32_t hops = 0;
    std::uint32_t seq = 0;
    SimTime expiry = 0.0;
    bool valid = false;
};

class Agent final : public RoutingAgent
{
public:
    /// Called after every accepted route installation (node, dest).
    using TableObserver = std::function<void(NodeId node, NodeId dest)>;

    Agent(NodeId self, Services& services, Config config = {});

    Protocol protocol() const noexcept override { return Protocol::Aodv; }
    void start() override;
    SendOutcome send_data(DataPacket packet) override;
    std::optional<RouteEntry> route_lookup(NodeId dest, SimTime t) override;

    /// Loop-free update rule: accept when there is no valid entry, the
    /// candidate is fresher, or equally fresh and shorter.
    bool update_route(NodeId dest, std::uint32_t seq, std::uint32_t hops, NodeId nextHop,
                      SimTime t);

    /// Starts discovery for `dest`; no-op when a valid route exists or a
    /// discovery is already in flight. Returns whether an RREQ went out.
    bool originate_rreq(NodeId dest);

    void on_neighbor_lost(NodeId neighbor);
    void hello_tick();

    std::uint32_t own_seq() const noexcept { return ownSeq_; }
    std::uint32_t last_broadcast_id() const noexcept { return broadcastId_; }
    bool discovering(NodeId dest) const { return discoveries_.count(dest) != 0; }
    const std::map<NodeId, Route>& table() const noexcept { return table_; }
    std::uint64_t rreq_rebroadcasts() const noexcept { return rebroadcasts_; }

    void set_table_observer(TableObserver observer) { observer_ = std::move(observer); }

private:
    struct Discovery
    {
        std::uint32_t retries = 0;
        EventHandle timer;
    };

    void on_frame(const Frame& frame) override;
    void handle_rreq(const Rreq& rreq, NodeId sender);
    void handle_rrep(const Rrep& rrep, NodeId sender);
    void handle_rerr(const Rerr& rerr, NodeId sender);
    void handle_data(const DataPacket& packet, NodeId sender);

    /// Returns the entry when valid at `t`; an expired entry is invalidated
    /// and its sequence number bumped so stale replies cannot revive it.
    Route* valid_route(NodeId dest, SimTime t);
    void refresh(NodeId dest, SimTime t);
    void send_rreq(NodeId dest);
    void on_discovery_timeout(NodeId dest);
    void complete_discovery(NodeId dest);
    void transmit_data(DataPacket packet, bool atOrigin);
    TxResult broadcast_control(Packet packet);

    Config config_;
    std::uint32_t ownSeq_ = 0;
    std::uint32_t broadcastId_ = 0;
    std::map<NodeId, Route> table_;
    std::map<std::pair<NodeId, std::uint32_t>, SimTime> seen_;
    std::map<NodeId, SimTime> neighbors_;
    std::map<NodeId, Discovery> discoveries_;
    SimTime lastBroadcastAt_ = -1.0e9;
    std::uint64_t rebroadcasts_ = 0;
    TableObserver observer_;
};

} // namespace manet::aodv
