#pragma once

#include "manet/energy.hpp"
#include "manet/engine.hpp"
#include "manet/metrics.hpp"
#include "manet/packets.hpp"
#include "manet/radio.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace manet
{

enum class Protocol : std::uint8_t
{
    Aodv,
    Dsr,
    Olsr,
};

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view name) noexcept;

struct AodvFreshness
{
    std::uint32_t destSeq = 0;
    SimTime expiry = 0.0;
};

/// Protocol-neutral view of a forwarding decision.
struct RouteEntry
{
    NodeId dest = 0;
    NodeId nextHop = 0;
    std::uint32_t hopCount = 1;
    bool valid = true;
    /// AODV: sequence number and expiry; DSR: the full source route; OLSR: nothing.
    std::variant<std::monostate, AodvFreshness, std::vector<NodeId>> freshness;
};

enum class SendOutcome : std::uint8_t
{
    Sent,
    Queued,
    Dropped,
};

/// Per-destination FIFO of packets waiting for a route.
class SendBuffer
{
public:
    explicit SendBuffer(std::size_t capacity = 64, SimTime maxHold = 30.0)
        : capacity_(capacity), maxHold_(maxHold)
    {
    }

    /// Returns the number of packets evicted to make room (oldest first).
    std::size_t push(const DataPacket& packet, SimTime now);

    /// Removes and returns all live packets for `dest`; `expired` counts
    /// those that outlived maxHold.
    std::vector<DataPacket> take(NodeId dest, SimTime now, std::size_t& expired);

    /// Drops everything queued for `dest`, returning the count.
    std::size_t drop(NodeId dest);

    std::size_t size(NodeId dest) const;
    bool empty() const noexcept { return queues_.empty(); }

private:
    struct Held
    {
        DataPacket packet;
        SimTime enqueuedAt;
    };
    std::size_t capacity_;
    SimTime maxHold_;
    std::map<NodeId, std::deque<Held>> queues_;
};

/// Shared per-run services handed to every routing agent.
struct Services
{
    Engine& engine;
    Channel& channel;
    EnergyModel& energy;
    Metrics& metrics;
    std::size_t nodeCount;
};

/// Base class for one node's routing protocol instance.
class RoutingAgent
{
public:
    RoutingAgent(NodeId self, Services& services) : self_(self), svc_(services) {}
    virtual ~RoutingAgent() = default;

    RoutingAgent(const RoutingAgent&) = delete;
    RoutingAgent& operator=(const RoutingAgent&) = delete;

    NodeId id() const noexcept { return self_; }
    virtual Protocol protocol() const noexcept = 0;

    /// Arms periodic timers. Called once when the run starts.
    virtual void start() {}

    /// Entry point for a received frame. Rx energy is already charged; dead
    /// nodes never get here.
    void handle_packet(const Frame& frame);

    /// Hands a locally generated data packet to the protocol.
    virtual SendOutcome send_data(DataPacket packet) = 0;

    /// Pure query; never triggers discovery.
    virtual std::optional<RouteEntry> route_lookup(NodeId dest, SimTime t) = 0;

    std::uint64_t malformed() const noexcept { return malformed_; }

protected:
    virtual void on_frame(const Frame& frame) = 0;

    SimTime now() const noexcept { return svc_.engine.now(); }
    bool alive() const { return svc_.energy.alive(self_); }
    Engine& engine() noexcept { return svc_.engine; }
    Metrics& metrics() noexcept { return svc_.metrics; }
    std::size_t node_count() const noexcept { return svc_.nodeCount; }

    TxResult broadcast(Packet packet);
    TxResult unicast(NodeId to, Packet packet);

    void deliver(const DataPacket& packet);
    void count_malformed();
    void drop(DropReason reason, std::uint64_t count = 1) { svc_.metrics.record_drop(reason, count); }

    /// Queues `packet` and accounts buffer evictions.
    void buffer_packet(const DataPacket& packet);
    /// Pulls every live packet waiting for `dest`, accounting expirations.
    std::vector<DataPacket> take_buffered(NodeId dest);

    NodeId self_;
    Services& svc_;
    SendBuffer buffer_;
    std::uint64_t malformed_ = 0;
};

} // namespace manet
