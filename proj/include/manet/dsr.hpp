#pragma once

#include "manet/protocol.hpp"

#include <set>
#include <utility>
#include <vector>

namespace manet::dsr
{

struct Config
{
    SimTime retryBase = 0.5;
    std::uint32_t rreqRetries = 2;
    std::size_t cacheCapacity = 64;
    SimTime cacheLifetime = 30.0;
    bool replyFromCache = false;
};

/// Path cache. Every stored path starts at the owning node and is free of
/// repeated nodes; the oldest path is evicted first.
class RouteCache
{
public:
    struct Entry
    {
        std::vector<NodeId> path;
        SimTime insertedAt;
    };

    explicit RouteCache(std::size_t capacity = 64, SimTime lifetime = 30.0)
        : capacity_(capacity), lifetime_(lifetime)
    {
    }

    /// Rejects paths shorter than two nodes or with a repeated node. An
    /// identical path is refreshed rather than duplicated.
    bool insert(std::vector<NodeId> path, SimTime t);

    /// Shortest live path ending at `dest` (prefixes of longer paths count);
    /// ties go to the most recently inserted.
    std::optional<std::vector<NodeId>> lookup(NodeId dest, SimTime t);

    /// Removes every path that traverses the link a-b in either direction.
    std::size_t remove_link(NodeId a, NodeId b);

    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    void purge(SimTime t);

    std::size_t capacity_;
    SimTime lifetime_;
    std::vector<Entry> entries_;
};

bool has_duplicates(const std::vector<NodeId>& path);

class Agent final : public RoutingAgent
{
public:
    Agent(NodeId self, Services& services, Config config = {});

    Protocol protocol() const noexcept override { return Protocol::Dsr; }
    SendOutcome send_data(DataPacket packet) override;
    std::optional<RouteEntry> route_lookup(NodeId dest, SimTime t) override;

    /// Floods an RREQ for `dest` unless a cached route exists or a
    /// discovery is already running. Returns whether an RREQ went out.
    bool originate_discovery(NodeId dest);

    std::uint32_t last_request_id() const noexcept { return requestId_; }
    bool discovering(NodeId dest) const { return discoveries_.count(dest) != 0; }
    RouteCache& cache() noexcept { return cache_; }

private:
    struct Discovery
    {
        std::uint32_t retries = 0;
        EventHandle timer;
    };

    void on_frame(const Frame& frame) override;
    void handle_rreq(const Rreq& rreq);
    void handle_rrep(const Rrep& rrep);
    void handle_rerr(Rerr rerr);
    void handle_data(DataPacket packet);

    void send_rreq(NodeId dest);
    void on_discovery_timeout(NodeId dest);
    void complete_discovery(NodeId dest);
    /// Sends from the origin along a cached path; false if none is cached.
    bool send_from_origin(DataPacket& packet);
    void forward_source_routed(DataPacket packet);
    void report_broken_link(const DataPacket& packet, NodeId next);

    Config config_;
    RouteCache cache_;
    std::uint32_t requestId_ = 0;
    std::set<std::pair<NodeId, std::uint32_t>> seen_;
    std::map<NodeId, Discovery> discoveries_;
};

} // namespace manet::dsr
